"""Plain-text gnuplot script emission for sweep tables.

Scripts reference the data file by its basename, so they work from the
directory the data was written to. No image is rendered here.
"""

from __future__ import annotations

import os

from .analysis import SweepTable

_UNITS = {
    "field_b": "B (Tesla)",
    "temperature_t": "T (Tesla)",
    "theta0": "theta0 (rad)",
    "anisotropy_ba": "B_A (Tesla)",
    "coupling_j0": "J0 (Tesla)",
}


def plot_script_text(table: SweepTable, data_filename: str) -> str:
    """Gnuplot commands drawing phase/pi against the swept axis."""
    columns = [*table.columns, "status"]
    y_col = columns.index("phase_over_pi") + 1
    has_curves = "curve" in columns

    if has_curves:
        x_name = columns[1]
        x_col = 2
        n_curves = len({row[0] for row in table.rows})
    else:
        x_name = columns[0]
        x_col = 1
        n_curves = 1

    lines = [
        "# generated by spinflop; data columns: " + ", ".join(columns),
        "set datafile separator ','",
        f"set xlabel '{_UNITS.get(x_name, x_name)}'",
        "set ylabel 'phase / pi'",
        "set grid",
    ]

    axis2 = None
    if not has_curves and len(table.metadata.get("axes", [])) == 2:
        axis2 = table.metadata["axes"][1]["parameter"]

    if axis2 is not None:
        count = table.metadata["axes"][0]["count"]
        z_col = y_col
        y2_col = columns.index(axis2) + 1
        lines += [
            f"set ylabel '{_UNITS.get(axis2, axis2)}'",
            "set zlabel 'phase / pi'",
            f"set dgrid3d {count},{count}",
            "set hidden3d",
            f"splot '{data_filename}' every ::1 using {x_col}:{y2_col}:{z_col} "
            "with lines notitle",
        ]
    elif has_curves:
        lines.append(
            f"plot for [k=0:{n_curves - 1}] '{data_filename}' every ::1 "
            f"using (column(1)==k ? column({x_col}) : 1/0):{y_col} "
            "with lines title sprintf('curve %d', k)"
        )
    else:
        lines.append(
            f"plot '{data_filename}' every ::1 using {x_col}:{y_col} with lines notitle"
        )
    return "\n".join(lines) + "\n"


def write_plot_script(table: SweepTable, data_path: str, script_path: str) -> None:
    text = plot_script_text(table, os.path.basename(data_path))
    with open(script_path, "w", encoding="utf-8") as handle:
        handle.write(text)
