"""Parameter sweeps, figure-style data grids, and power-law scaling fits.

Sweep cells are independent pure computations; failures near the spin-flop
transition are recorded per row in a status column instead of aborting the
sweep, because the behaviour near the transition is exactly what the sweeps
are for. Output ordering follows the grid index, so tables are deterministic
regardless of any internal parallelism.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bath import BathParams, CRITICAL_FIELD_GUARD, critical_field
from .errors import (
    BeyondCriticalFieldError,
    FitError,
    QuadratureConvergenceError,
    ValidationError,
    ZeroFieldError,
)
from .phase import DEFAULT_PHASE_TOL, gp_for_params
from .qubit import InitialState

SWEEPABLE_PARAMETERS = (
    "field_b",
    "temperature_t",
    "theta0",
    "anisotropy_ba",
    "coupling_j0",
)

RESULT_COLUMNS = ("tau0", "tau", "phase", "phase_over_pi", "quadrature_error")

#: Default fit windows: field range for the zero-field law, distance below
#: the critical field for the near-critical law. Both sampled log-spaced.
ZERO_FIELD_WINDOW = (1e-3, 2e-2)
CRITICAL_WINDOW = (1e-3, 1e-1)
SCALING_POINTS = 20

FIGURE_AXIS_POINTS = {"fig1": 200, "fig2": 200, "fig3": 80, "fig4": 80}


def worker_count() -> int:
    """Parallelism cap from SPINFLOP_THREADS; defaults to sequential."""
    raw = os.environ.get("SPINFLOP_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(
            f"SPINFLOP_THREADS must be a positive integer, got {raw!r}"
        ) from None
    if value < 1:
        raise ValidationError(f"SPINFLOP_THREADS must be a positive integer, got {raw!r}")
    return value


def _ordered_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class AxisSpec:
    """One swept parameter with an inclusive, deterministic grid."""

    parameter: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEPABLE_PARAMETERS:
            raise ValidationError(
                f"cannot sweep {self.parameter!r}; choose one of {SWEEPABLE_PARAMETERS}"
            )
        if self.count < 2:
            raise ValidationError("axis count must be at least 2")
        if not self.start < self.stop:
            raise ValidationError("axis start must be below stop")
        if self.spacing not in ("linear", "log"):
            raise ValidationError("axis spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.start <= 0:
            raise ValidationError("log spacing requires start > 0")

    def grid(self) -> list[float]:
        if self.spacing == "linear":
            values = np.linspace(self.start, self.stop, self.count)
        else:
            values = np.exp(np.linspace(math.log(self.start), math.log(self.stop), self.count))
        return [float(v) for v in values]


@dataclass(frozen=True)
class SweepSpec:
    base: BathParams
    init: InitialState
    axis1: AxisSpec
    axis2: AxisSpec | None = None
    clamp_to_critical: bool = False

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.parameter == self.axis1.parameter:
            raise ValidationError("the two sweep axes must name distinct parameters")


@dataclass
class SweepTable:
    """Rectangular sweep result: named value columns plus a per-row status."""

    columns: list[str]
    rows: list[list[float]]
    status: list[str]
    metadata: dict

    def __post_init__(self):
        if len(self.rows) != len(self.status):
            raise ValidationError("row/status length mismatch")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValidationError("ragged sweep table row")

    def column(self, name: str) -> list[float]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv_text(self) -> str:
        lines = [",".join([*self.columns, "status"])]
        for row, status in zip(self.rows, self.status):
            lines.append(",".join([repr(float(v)) for v in row] + [status]))
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        def cell(v: float):
            return float(v) if math.isfinite(v) else None

        doc = {
            "columns": [*self.columns, "status"],
            "rows": [
                [*(cell(v) for v in row), status]
                for row, status in zip(self.rows, self.status)
            ],
            "metadata": {
                "params": self.metadata,
                "timestamp": _timestamp(),
                "tool_version": __version__,
            },
        }
        return json.dumps(doc, indent=1) + "\n"

    def write(self, path: str, fmt: str) -> None:
        if fmt == "csv":
            text = self.to_csv_text()
        elif fmt == "json":
            text = self.to_json_text()
        else:
            raise ValidationError(f"unknown output format {fmt!r}")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _timestamp() -> str:
    """ISO timestamp; honours SOURCE_DATE_EPOCH for reproducible outputs."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(tz=timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%SZ")


_NAN_RESULT = (math.nan, math.nan, math.nan, math.nan, math.nan)


def _gp_cell(
    base: BathParams,
    init: InitialState,
    overrides: dict[str, float],
    clamp: bool,
    tol: float,
    eta_rtol: float,
) -> tuple[tuple[float, float, float, float, float], str]:
    """Evaluate one sweep cell; never raises, reports trouble via status."""
    try:
        bath_overrides = {k: v for k, v in overrides.items() if k != "theta0"}
        params = replace(base, **bath_overrides) if bath_overrides else base
        cell_init = (
            InitialState(theta0=overrides["theta0"]) if "theta0" in overrides else init
        )
        if params.field_b <= 0:
            raise ZeroFieldError(params.field_b)
        status = "ok"
        if params.field_b >= critical_field(params):
            if not clamp:
                raise BeyondCriticalFieldError(params.field_b, critical_field(params))
            status = "clamped"
        result = gp_for_params(
            params, cell_init, clamp_field=clamp, tol=tol, eta_rtol=eta_rtol
        )
        row = (
            result.tau0,
            result.tau,
            result.phase,
            result.phase / math.pi,
            result.quadrature_error,
        )
        return row, status
    except ZeroFieldError:
        return _NAN_RESULT, "error:zero_field"
    except BeyondCriticalFieldError:
        return _NAN_RESULT, "error:beyond_critical_field"
    except QuadratureConvergenceError:
        return _NAN_RESULT, "error:quadrature"
    except ValidationError:
        return _NAN_RESULT, "error:validation"


def run_sweep(
    spec: SweepSpec,
    *,
    tol: float = DEFAULT_PHASE_TOL,
    eta_rtol: float = 1e-10,
    workers: int | None = None,
) -> SweepTable:
    """Evaluate the phase over the grid of the sweep spec.

    One row per grid point, ordered by grid index (axis1 outer, axis2
    inner). Swept columns always record the requested grid value; a clamped
    row is computed at the guard field just below the transition.
    """
    axes = [spec.axis1] + ([spec.axis2] if spec.axis2 is not None else [])
    grids = [axis.grid() for axis in axes]
    names = [axis.parameter for axis in axes]

    cells: list[dict[str, float]] = []
    if len(grids) == 1:
        cells = [{names[0]: v} for v in grids[0]]
    else:
        cells = [{names[0]: v1, names[1]: v2} for v1 in grids[0] for v2 in grids[1]]

    workers = worker_count() if workers is None else workers
    outcomes = _ordered_map(
        lambda ov: _gp_cell(spec.base, spec.init, ov, spec.clamp_to_critical, tol, eta_rtol),
        cells,
        workers,
    )

    columns = [*names, *RESULT_COLUMNS]
    rows = []
    status = []
    for overrides, (result, state) in zip(cells, outcomes):
        rows.append([overrides[n] for n in names] + list(result))
        status.append(state)

    metadata = _params_metadata(spec.base, spec.init)
    metadata["axes"] = [
        {
            "parameter": axis.parameter,
            "start": axis.start,
            "stop": axis.stop,
            "count": axis.count,
            "spacing": axis.spacing,
        }
        for axis in axes
    ]
    metadata["clamp_to_critical"] = spec.clamp_to_critical
    return SweepTable(columns=columns, rows=rows, status=status, metadata=metadata)


def _params_metadata(params: BathParams, init: InitialState) -> dict:
    return {
        "coordination_m": params.coordination_m,
        "spin_s": params.spin_s,
        "exchange_j": params.exchange_j,
        "anisotropy_ba": params.anisotropy_ba,
        "field_b": params.field_b,
        "temperature_t": params.temperature_t,
        "coupling_j0": params.coupling_j0,
        "theta0": init.theta0,
    }


def _reference_bath(
    *, field_b: float, temperature_t: float, coupling_j0: float, anisotropy_ba: float
) -> BathParams:
    return BathParams.from_mj(
        mj=40.0,
        anisotropy_ba=anisotropy_ba,
        field_b=field_b,
        temperature_t=temperature_t,
        coupling_j0=coupling_j0,
        coordination_m=6,
        spin_s=0.5,
    )


def figure_data(
    figure: str,
    *,
    axis_points: int | None = None,
    tol: float = DEFAULT_PHASE_TOL,
    eta_rtol: float = 1e-10,
    workers: int | None = None,
) -> SweepTable:
    """Data grid for one of the four reference figures.

    fig1: phase versus theta0 at B = 0.5 T for an uncoupled curve and two
    coupled ones (T = 0.8, 1.2). fig2: phase versus field at theta0 = 1.3
    for an uncoupled curve and two coupled ones (T = 0.8, 1.5), fields past
    the transition clamped. fig3/fig4: coupled (B, T) surface at
    B_A = 0.10 / 0.15, fields past the transition flagged as errors.
    """
    if figure not in FIGURE_AXIS_POINTS:
        raise ValidationError(f"unknown figure {figure!r}; choose fig1..fig4")
    n = FIGURE_AXIS_POINTS[figure] if axis_points is None else axis_points
    if n < 2:
        raise ValidationError("figure grids need at least 2 points per axis")

    coupled_j0 = 2.5 * (40.0 / 6.0)  # J0 = 2.5 J at the reference exchange
    if figure == "fig1":
        curves = [(0.0, 0.8), (coupled_j0, 0.8), (coupled_j0, 1.2)]
        tables = []
        for j0, temp in curves:
            base = _reference_bath(
                field_b=0.5, temperature_t=temp, coupling_j0=j0, anisotropy_ba=0.10
            )
            spec = SweepSpec(
                base=base,
                init=InitialState(theta0=0.0),
                axis1=AxisSpec("theta0", 0.0, math.pi, n),
                clamp_to_critical=True,
            )
            tables.append(run_sweep(spec, tol=tol, eta_rtol=eta_rtol, workers=workers))
        return _merge_curves(figure, "theta0", curves, tables)

    if figure == "fig2":
        curves = [(0.0, 0.8), (coupled_j0, 0.8), (coupled_j0, 1.5)]
        tables = []
        for j0, temp in curves:
            base = _reference_bath(
                field_b=0.5, temperature_t=temp, coupling_j0=j0, anisotropy_ba=0.10
            )
            spec = SweepSpec(
                base=base,
                init=InitialState(theta0=1.3),
                axis1=AxisSpec("field_b", 3.0 / n, 3.0, n),
                clamp_to_critical=True,
            )
            tables.append(run_sweep(spec, tol=tol, eta_rtol=eta_rtol, workers=workers))
        return _merge_curves(figure, "field_b", curves, tables)

    anisotropy = 0.10 if figure == "fig3" else 0.15
    base = _reference_bath(
        field_b=0.5, temperature_t=0.8, coupling_j0=coupled_j0, anisotropy_ba=anisotropy
    )
    spec = SweepSpec(
        base=base,
        init=InitialState(theta0=1.3),
        axis1=AxisSpec("field_b", 3.0 / n, 3.0, n),
        axis2=AxisSpec("temperature_t", 2.5 / n, 2.5, n),
        clamp_to_critical=False,
    )
    table = run_sweep(spec, tol=tol, eta_rtol=eta_rtol, workers=workers)
    table.metadata["figure"] = figure
    return table


def _merge_curves(figure, axis_name, curves, tables) -> SweepTable:
    columns = ["curve", axis_name, "coupling_j0", "temperature_t", *RESULT_COLUMNS]
    rows = []
    status = []
    for index, ((j0, temp), table) in enumerate(zip(curves, tables)):
        axis_idx = table.columns.index(axis_name)
        result_idx = [table.columns.index(c) for c in RESULT_COLUMNS]
        for row, state in zip(table.rows, table.status):
            rows.append(
                [float(index), row[axis_idx], j0, temp] + [row[i] for i in result_idx]
            )
            status.append(state)
    metadata = dict(tables[0].metadata)
    metadata["figure"] = figure
    metadata["curves"] = [
        {"curve": i, "coupling_j0": j0, "temperature_t": temp}
        for i, (j0, temp) in enumerate(curves)
    ]
    return SweepTable(columns=columns, rows=rows, status=status, metadata=metadata)


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares power law phase = prefactor * |b - pivot|^exponent."""

    exponent: float
    prefactor: float
    r_squared: float
    pivot: float
    n_points: int


def fit_power_law(
    points: list[tuple[float, float]], pivot: float, side: str
) -> PowerLawFit:
    """Ordinary least squares on (log |b - pivot|, log phase).

    `side` declares which side of the pivot the abscissas must lie on:
    'above_zero' for the small-field law, 'below_critical' for the
    near-transition law.
    """
    if side not in ("above_zero", "below_critical"):
        raise ValidationError("side must be 'above_zero' or 'below_critical'")
    if len(points) < 5:
        raise FitError(f"power-law fit needs at least 5 points, got {len(points)}")

    xs = []
    ys = []
    for b, phase in points:
        if side == "above_zero":
            distance = b - pivot
            if not b > 0 or not distance > 0:
                raise FitError(f"field {b!r} not above the pivot {pivot!r}")
        else:
            distance = pivot - b
            if not distance > 0:
                raise FitError(f"field {b!r} not below the pivot {pivot!r}")
        if not phase > 0:
            raise FitError(f"nonpositive phase {phase!r} cannot enter a log fit")
        xs.append(math.log(distance))
        ys.append(math.log(phase))

    x = np.asarray(xs)
    y = np.asarray(ys)
    x_center = x - x.mean()
    denom = float(np.dot(x_center, x_center))
    if denom == 0.0:
        raise FitError("degenerate abscissas: all points at the same distance")
    slope = float(np.dot(x_center, y - y.mean()) / denom)
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float(np.dot(residuals, residuals))
    ss_tot = float(np.dot(y - y.mean(), y - y.mean()))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(
        exponent=slope,
        prefactor=math.exp(intercept),
        r_squared=r_squared,
        pivot=pivot,
        n_points=len(points),
    )


def scaling_curve(
    params: BathParams,
    init: InitialState,
    regime: str,
    *,
    window: tuple[float, float] | None = None,
    points: int = SCALING_POINTS,
    tol: float = DEFAULT_PHASE_TOL,
    eta_rtol: float = 1e-10,
) -> tuple[list[tuple[float, float]], float, str]:
    """Sample (field, phase) pairs in one of the two asymptotic regimes.

    Returns the points plus the pivot and side to hand to fit_power_law.
    For 'critical' the window is measured as distance below the critical
    field and sampled log-spaced in that distance.
    """
    if points < 5:
        raise ValidationError("scaling curves need at least 5 points")
    if regime == "zero-field":
        lo, hi = window if window is not None else ZERO_FIELD_WINDOW
        if not (0 < lo < hi):
            raise ValidationError("zero-field window must satisfy 0 < min < max")
        fields = np.exp(np.linspace(math.log(lo), math.log(hi), points))
        pivot, side = 0.0, "above_zero"
    elif regime == "critical":
        bc = critical_field(params)
        lo, hi = window if window is not None else CRITICAL_WINDOW
        if not (0 < lo < hi < bc):
            raise ValidationError("critical window must satisfy 0 < min < max < B_c")
        distances = np.exp(np.linspace(math.log(lo), math.log(hi), points))
        fields = bc - distances
        pivot, side = bc, "below_critical"
    else:
        raise ValidationError("regime must be 'zero-field' or 'critical'")

    samples = []
    for b in fields:
        result = gp_for_params(
            params.with_field(float(b)), init, tol=tol, eta_rtol=eta_rtol
        )
        samples.append((float(b), result.phase))
    return samples, pivot, side


def fit_scaling(
    params: BathParams,
    init: InitialState,
    regime: str,
    *,
    window: tuple[float, float] | None = None,
    points: int = SCALING_POINTS,
    tol: float = DEFAULT_PHASE_TOL,
    eta_rtol: float = 1e-10,
) -> tuple[PowerLawFit, list[tuple[float, float]]]:
    """Run the regime's default window and fit the power law."""
    samples, pivot, side = scaling_curve(
        params, init, regime, window=window, points=points, tol=tol, eta_rtol=eta_rtol
    )
    return fit_power_law(samples, pivot, side), samples
