"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 physics-domain violation
(field at or beyond the spin-flop transition), 4 I/O failure, 5 numerical
failure. All validation happens before any computation, so nonzero exits
never leave partial output behind.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .analysis import (
    AxisSpec,
    SweepSpec,
    figure_data,
    fit_power_law,
    fit_scaling,
    run_sweep,
)
from .bath import BathParams, clamp_to_critical, critical_field, decoherence_time
from .config import RunConfig, load_config
from .errors import (
    DomainError,
    FitError,
    NumericalError,
    ValidationError,
)
from .gnuplot import write_plot_script
from .phase import (
    circular_difference,
    gp_closed_form,
    gp_for_params,
    gp_trajectory_oracle,
    precession_trajectory,
)
from .qubit import InitialState

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_NUMERICAL = 5

_DEFAULTS = {
    "coordination_m": 6,
    "spin_s": 0.5,
    "mj": 40.0,
    "anisotropy_ba": 0.10,
    "field_b": 0.5,
    "temperature_t": 0.8,
    "theta0": 0.5 * math.pi,
}


def _bath_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("physical parameters")
    group.add_argument("--config", metavar="FILE", help="config file; flags override it")
    group.add_argument("--m", type=int, help="nearest-neighbour count M (default 6)")
    group.add_argument("--s", type=float, help="sublattice spin S, half-integer (default 0.5)")
    group.add_argument("--mj", type=float, help="exchange product M*J in Tesla (default 40)")
    group.add_argument("--ba", type=float, help="anisotropy field B_A in Tesla (default 0.10)")
    group.add_argument("--b", type=float, help="external field B in Tesla (default 0.5)")
    group.add_argument("--temp", type=float, help="temperature in Tesla, k_B=1 (default 0.8)")
    group.add_argument(
        "--j0", type=float, help="qubit-bath coupling J0 in Tesla (default 2.5*J)"
    )
    group.add_argument(
        "--theta0", type=float, help="initial Bloch polar angle in radians (default pi/2)"
    )
    group.add_argument(
        "--eta-tol",
        type=float,
        default=1e-10,
        help="relative tolerance of the thermal-weight quadrature (default 1e-10)",
    )
    group.add_argument(
        "--gp-tol",
        type=float,
        default=1e-9,
        help="absolute tolerance of the phase quadrature in radians (default 1e-9)",
    )


def _load(args) -> RunConfig:
    if args.config:
        return load_config(args.config)
    return RunConfig()


def _resolve_inputs(args, config: RunConfig) -> tuple[BathParams, InitialState]:
    cfg = config.params
    m = args.m if args.m is not None else cfg.get("coordination_m", _DEFAULTS["coordination_m"])
    s = args.s if args.s is not None else cfg.get("spin_s", _DEFAULTS["spin_s"])
    if args.mj is not None:
        exchange = args.mj / m
    elif "exchange_j" in cfg:
        exchange = cfg["exchange_j"]
    else:
        exchange = _DEFAULTS["mj"] / m
    ba = args.ba if args.ba is not None else cfg.get("anisotropy_ba", _DEFAULTS["anisotropy_ba"])
    b = args.b if args.b is not None else cfg.get("field_b", _DEFAULTS["field_b"])
    temp = args.temp if args.temp is not None else cfg.get(
        "temperature_t", _DEFAULTS["temperature_t"]
    )
    j0 = args.j0 if args.j0 is not None else cfg.get("coupling_j0", 2.5 * exchange)
    theta0 = args.theta0 if args.theta0 is not None else cfg.get("theta0", _DEFAULTS["theta0"])
    params = BathParams(
        exchange_j=exchange,
        anisotropy_ba=ba,
        field_b=b,
        temperature_t=temp,
        coupling_j0=j0,
        coordination_m=m,
        spin_s=s,
    )
    return params, InitialState(theta0=theta0)


def _cmd_critical_field(args) -> int:
    params, _ = _resolve_inputs(args, _load(args))
    print(f"{critical_field(params):.6g}")
    return EXIT_OK


def _gp_report(label: str, result) -> None:
    prefix = f"{label}." if label else ""
    print(f"{prefix}phase            = {result.phase:.9g} rad")
    print(f"{prefix}phase_over_pi    = {result.phase / math.pi:.6f}")
    print(f"{prefix}tau0             = {result.tau0:.9g} 1/Tesla")
    print(f"{prefix}tau              = {result.tau:.9g} 1/Tesla")
    print(f"{prefix}quadrature_error = {result.quadrature_error:.3e} rad")


def _cmd_gp(args) -> int:
    params, init = _resolve_inputs(args, _load(args))
    if params.field_b <= 0:
        raise ValidationError("gp requires a strictly positive field B")
    if args.clamp:
        params = clamp_to_critical(params)
    # an out-of-range field raises BeyondCriticalFieldError (exit 3) downstream

    results = {}
    if args.method in ("closed-form", "both"):
        results["closed_form"] = gp_for_params(
            params, init, tol=args.gp_tol, eta_rtol=args.eta_tol
        )
    if args.method in ("oracle", "both"):
        tau0 = decoherence_time(params, eta_rtol=args.eta_tol)
        traj = precession_trajectory(init, params.field_b, tau0, n_steps=args.steps)
        results["trajectory_oracle"] = gp_trajectory_oracle(traj)

    if args.method == "both":
        _gp_report("closed_form", results["closed_form"])
        _gp_report("trajectory_oracle", results["trajectory_oracle"])
        diff = circular_difference(
            results["closed_form"].phase, results["trajectory_oracle"].phase
        )
        print(f"difference       = {diff:.3e} rad")
    else:
        (result,) = results.values()
        _gp_report("", result)
    return EXIT_OK


def _sweep_spec_from_config(config: RunConfig, params: BathParams, init: InitialState):
    sweep = config.sweep
    required = ("axis1_parameter", "axis1_start", "axis1_stop", "axis1_count")
    if not all(key in sweep for key in required):
        raise ValidationError(
            "sweep needs --figure or a [sweep] config section with axis1_* keys"
        )
    axis1 = AxisSpec(
        sweep["axis1_parameter"],
        sweep["axis1_start"],
        sweep["axis1_stop"],
        sweep["axis1_count"],
        sweep.get("axis1_spacing", "linear"),
    )
    axis2 = None
    if "axis2_parameter" in sweep:
        for key in ("axis2_start", "axis2_stop", "axis2_count"):
            if key not in sweep:
                raise ValidationError(f"sweep axis2 incomplete: missing {key}")
        axis2 = AxisSpec(
            sweep["axis2_parameter"],
            sweep["axis2_start"],
            sweep["axis2_stop"],
            sweep["axis2_count"],
            sweep.get("axis2_spacing", "linear"),
        )
    return SweepSpec(
        base=params,
        init=init,
        axis1=axis1,
        axis2=axis2,
        clamp_to_critical=sweep.get("clamp_to_critical", False),
    )


def _cmd_sweep(args) -> int:
    config = _load(args)
    params, init = _resolve_inputs(args, config)

    figure = args.figure or config.sweep.get("figure")
    if figure:
        table = figure_data(
            figure,
            axis_points=args.figure_points,
            tol=args.gp_tol,
            eta_rtol=args.eta_tol,
        )
    else:
        spec = _sweep_spec_from_config(config, params, init)
        table = run_sweep(spec, tol=args.gp_tol, eta_rtol=args.eta_tol)

    path = args.output or config.output.get("path")
    if not path:
        raise ValidationError("sweep needs an output path (-o or [output] path)")
    fmt = args.format or config.output.get("format")
    if not fmt:
        fmt = "json" if path.endswith(".json") else "csv"
    if fmt not in ("csv", "json"):
        raise ValidationError(f"unknown output format {fmt!r}")

    table.write(path, fmt)
    emit_script = args.emit_plot_script or config.output.get("emit_plot_script", False)
    if emit_script:
        script_path = path + ".gnuplot"
        write_plot_script(table, path, script_path)
        print(f"wrote plot script {script_path}")
    print(f"wrote {len(table.rows)} rows to {path}")
    return EXIT_OK


def _cmd_scaling(args) -> int:
    if args.selftest:
        planted_exponent, planted_prefactor = 0.25, 3.0
        fields = [0.01 * (1.3**k) for k in range(20)]
        points = [(b, planted_prefactor * b**planted_exponent) for b in fields]
        fit = fit_power_law(points, pivot=0.0, side="above_zero")
        err = abs(fit.exponent - planted_exponent)
        print(f"selftest exponent error = {err:.3e}")
        if err > 1e-10:
            raise FitError(f"selftest failed: exponent error {err:.3e}")
        return EXIT_OK

    config = _load(args)
    params, init = _resolve_inputs(args, config)
    regime = args.regime or config.fit.get("regime")
    if regime not in ("zero-field", "critical"):
        raise ValidationError("scaling needs --regime zero-field|critical")

    window = None
    w_min = args.window_min if args.window_min is not None else config.fit.get("window_min")
    w_max = args.window_max if args.window_max is not None else config.fit.get("window_max")
    if (w_min is None) != (w_max is None):
        raise ValidationError("provide both window bounds or neither")
    if w_min is not None:
        window = (w_min, w_max)
    points = args.points if args.points is not None else config.fit.get("points", 20)

    fit, samples = fit_scaling(
        params,
        init,
        regime,
        window=window,
        points=points,
        tol=args.gp_tol,
        eta_rtol=args.eta_tol,
    )
    lo = min(b for b, _ in samples)
    hi = max(b for b, _ in samples)
    print(f"regime    = {regime}")
    print(f"pivot     = {fit.pivot:.6g} Tesla")
    print(f"window    = B in [{lo:.6g}, {hi:.6g}] Tesla")
    print(f"points    = {fit.n_points}")
    print(f"exponent  = {fit.exponent:.6f}")
    print(f"prefactor = {fit.prefactor:.6g}")
    print(f"r_squared = {fit.r_squared:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinflop",
        description=(
            "Geometric phase of a central spin qubit coupled to an "
            "antiferromagnetic magnon environment. Units: fields, temperatures "
            "and energies in Tesla (g*mu_B = k_B = 1), times in inverse Tesla."
        ),
    )
    parser.add_argument("--version", action="version", version=f"spinflop {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_crit = sub.add_parser(
        "critical-field", help="print the spin-flop critical field in Tesla"
    )
    _bath_arguments(p_crit)
    p_crit.set_defaults(handler=_cmd_critical_field)

    p_gp = sub.add_parser(
        "gp", help="geometric phase over one precession cycle for one parameter set"
    )
    _bath_arguments(p_gp)
    p_gp.add_argument(
        "--method",
        choices=("closed-form", "oracle", "both"),
        default="closed-form",
        help="closed-form integral, trajectory oracle, or both plus their difference",
    )
    p_gp.add_argument(
        "--steps", type=int, default=4096, help="oracle trajectory samples (default 4096)"
    )
    p_gp.add_argument(
        "--clamp",
        action="store_true",
        help="clamp fields at or beyond the transition to just below it",
    )
    p_gp.set_defaults(handler=_cmd_gp)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep and write CSV or JSON")
    _bath_arguments(p_sweep)
    p_sweep.add_argument(
        "--figure",
        choices=("fig1", "fig2", "fig3", "fig4"),
        help="preset reference-figure grid instead of a [sweep] config section",
    )
    p_sweep.add_argument(
        "--figure-points",
        type=int,
        help="override points per axis for --figure grids",
    )
    p_sweep.add_argument("-o", "--output", help="output file path")
    p_sweep.add_argument(
        "--format", choices=("csv", "json"), help="output format (default from extension)"
    )
    p_sweep.add_argument(
        "--emit-plot-script",
        action="store_true",
        help="also write a gnuplot script next to the data file",
    )
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_scale = sub.add_parser(
        "scaling", help="fit the small-field or near-critical power law of the phase"
    )
    _bath_arguments(p_scale)
    p_scale.add_argument(
        "--regime",
        choices=("zero-field", "critical"),
        help="which asymptotic window to fit",
    )
    p_scale.add_argument(
        "--window-min",
        type=float,
        help="window lower edge in Tesla (distance below B_c for critical)",
    )
    p_scale.add_argument("--window-max", type=float, help="window upper edge in Tesla")
    p_scale.add_argument("--points", type=int, help="number of log-spaced samples (default 20)")
    p_scale.add_argument(
        "--selftest",
        action="store_true",
        help="fit a planted power law and report the exponent error",
    )
    p_scale.set_defaults(handler=_cmd_scaling)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
