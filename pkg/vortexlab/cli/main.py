"""``vortexlab`` command line.

Each subcommand is a thin wrapper over one library operation:

    vortexlab profile   --epsilon E --r0 R --mesh M --tol T --out f.csv
    vortexlab evolve    --config case.json --out traj.csv
    vortexlab reconstruct --traj traj.csv --time T --config case.json --out field.gpf
    vortexlab gp-run    --config case.json --out-prefix run/
    vortexlab localize  --field f.gpf --out vortices.csv
    vortexlab compare   --a x.gpf --b y.gpf --metric l43-supercurrent --out -
    vortexlab sweep-dt | sweep-n | sweep-eps --config case.json ...
    vortexlab gamma     --ratios 1e2,1e3,1e4 --out -
    vortexlab track-error --traj traj.csv --vortices run/vortices.csv --out -

Exit status: 0 on success, 1 on error, 2 when a collision or boundary guard
stopped a run early.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

import numpy as np

from vortexlab import __version__
from vortexlab.cli.io import (
    VORTEX_HEADER,
    Cell,
    format_table,
    read_field,
    read_trajectory,
    read_vortex_series,
    vortex_rows,
    write_field,
    write_text,
    write_trajectory,
)
from vortexlab.cli.metrics import Metric, compare, regression_comments
from vortexlab.cli.scenario import ScenarioConfig, load_scenario
from vortexlab.config import (
    DEFAULT_GAMMA_RATIOS,
    DEFAULT_PROFILE_MESH,
    DEFAULT_PROFILE_TOL,
    REFERENCE_DT,
    REFERENCE_N_MODES,
)
from vortexlab.core.model import ComplexField, Termination, VortexConfiguration, dirac_w11_distance
from vortexlab.dynamics.convergence import ConvergenceTable, convergence_study
from vortexlab.dynamics.integrator import integrate
from vortexlab.errors import (
    GuardTriggeredError,
    InvalidParamsError,
    PairingInvalidError,
    VortexLabError,
)
from vortexlab.fields.reconstruction import (
    ReconstructionSpec,
    build_reconstruction,
    canonical_map,
    reconstruct_psi,
    well_prepared_gap,
)
from vortexlab.gp.localize import DetectedVortices, localize_vortices
from vortexlab.gp.solver import GPConfig, run_gp
from vortexlab.logging_config import get_logger, set_level
from vortexlab.profile.radial import (
    compute_gamma,
    localized_energy,
    lower_bound_constant,
    solve_profile,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GUARD = 2


# ── Helpers ─────────────────────────────────────────────────────────────────


def _float_list(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        msg = f"expected comma-separated numbers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        msg = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc


def _reconstruction_spec(
    scenario: ScenarioConfig, config: VortexConfiguration, epsilon: float, r0: Optional[float]
) -> ReconstructionSpec:
    return build_reconstruction(
        config,
        epsilon,
        scenario.polar_grid(),
        r0=scenario.r0 if r0 is None else r0,
        n_modes=scenario.n_modes,
    )


def _reconstruct(
    scenario: ScenarioConfig, config: VortexConfiguration, epsilon: float, r0: Optional[float]
) -> ComplexField:
    return reconstruct_psi(_reconstruction_spec(scenario, config, epsilon, r0))


def _require_full_run(termination: Termination, t_end: float) -> None:
    if termination is not Termination.REACHED_TMAX:
        raise GuardTriggeredError(f"reduced dynamics stopped at t={t_end:g}: {termination.value}")


# ── Commands ────────────────────────────────────────────────────────────────


def _cmd_profile(args: argparse.Namespace) -> int:
    profile = solve_profile(args.epsilon, args.r0, args.mesh, args.tol)
    comments = [
        ("epsilon", profile.epsilon),
        ("r0", profile.r0),
        ("residual", profile.residual_norm),
        ("iterations", profile.iterations),
        ("energy", localized_energy(profile)),
        ("lower_bound_c", lower_bound_constant(profile)),
    ]
    write_text(args.out, format_table(["r", "f"], zip(profile.nodes, profile.values), comments))
    return EXIT_OK


def _cmd_evolve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    cfg = scenario.integrator_config(dt=args.dt, t_max=args.t_max, n_modes=args.n_modes)
    record = integrate(scenario.configuration(), cfg)
    write_trajectory(args.out, record)
    if record.termination is not Termination.REACHED_TMAX:
        logger.warning(
            "Integration stopped at t=%g (%s); trajectory up to the stop was written",
            record.times[-1], record.termination.value,
        )
        return EXIT_GUARD
    return EXIT_OK


def _cmd_reconstruct(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    record = read_trajectory(args.traj)
    state = record.state_at(args.time)
    epsilon = scenario.epsilon if args.epsilon is None else args.epsilon
    write_field(args.out, _reconstruct(scenario, state, epsilon, args.r0))
    return EXIT_OK


def _cmd_gp_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    cfg = scenario.gp_config(epsilon=args.epsilon, dt=args.dt, t_max=args.t_max)
    initial = _reconstruct(scenario, scenario.configuration(), cfg.epsilon, None)
    out = Path(args.out_prefix)

    def save_snapshot(step: int, t: float, state: ComplexField, _: DetectedVortices) -> None:
        write_field(out / f"snap_{step:06d}.gpf", state)

    run = run_gp(
        initial,
        cfg,
        keep_snapshots=False,
        on_snapshot=None if args.no_snapshots else save_snapshot,
    )
    series_comments = [
        ("epsilon", cfg.epsilon),
        ("dt", cfg.dt),
        ("mass_drift", run.mass_drift),
        ("energy_drift", run.energy_drift),
    ]
    series = zip(run.times, run.masses, run.energies)
    write_text(out / "series.csv", format_table(["t", "mass", "energy"], series, series_comments))
    rows = [row for t, found in zip(run.times, run.vortices) for row in vortex_rows(t, found)]
    write_text(out / "vortices.csv", format_table(VORTEX_HEADER, rows))
    return EXIT_OK


def _cmd_localize(args: argparse.Namespace) -> int:
    detected = localize_vortices(read_field(args.field))
    rows = [[x, y, w] for (x, y), w in zip(detected.positions, detected.windings.tolist())]
    write_text(
        args.out,
        format_table(["x", "y", "winding"], rows, [("total_winding", detected.total_winding)]),
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    value = compare(
        read_field(args.a),
        read_field(args.b),
        args.metric,
        relative=args.relative,
        mod_phase=args.mod_phase,
    )
    row = [args.metric, int(args.relative), int(args.mod_phase), value]
    write_text(args.out, format_table(["metric", "relative", "mod_phase", "value"], [row]))
    return EXIT_OK


def _write_convergence(out: str, table: ConvergenceTable, reference: float) -> None:
    comments = [
        ("slope", table.slope),
        ("intercept", table.intercept),
        ("final_time", table.final_time),
        ("reference", reference),
    ]
    write_text(out, format_table([table.parameter, "effective", "error"], table.rows(), comments))


def _cmd_sweep_dt(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    table = convergence_study(
        scenario.configuration(),
        scenario.integrator_config(t_max=args.t_max),
        dts=args.dts,
        reference_dt=args.reference_dt,
    )
    _write_convergence(args.out, table, args.reference_dt)
    return EXIT_OK


def _cmd_sweep_n(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    table = convergence_study(
        scenario.configuration(),
        scenario.integrator_config(t_max=args.t_max),
        ns=args.ns,
        reference_n_modes=args.reference_n,
    )
    _write_convergence(args.out, table, args.reference_n)
    return EXIT_OK


def _sweep_canonical(
    scenario: ScenarioConfig, eps_values: Sequence[float], gamma_const: float
) -> str:
    config = scenario.configuration()
    u_star = canonical_map(config, scenario.n_modes, scenario.polar_grid())
    rows = []
    for epsilon in eps_values:
        spec = _reconstruction_spec(scenario, config, epsilon, None)
        psi = reconstruct_psi(spec)
        rows.append(
            [
                epsilon,
                compare(u_star, psi, Metric.L2),
                compare(u_star, psi, Metric.L43_SUPERCURRENT),
                well_prepared_gap(spec, gamma_const, psi),
            ]
        )
        logger.info(
            "sweep-eps canonical: epsilon=%g l43=%.6g gap=%.6g", epsilon, rows[-1][2], rows[-1][3]
        )
    comments = [("gamma", gamma_const)]
    comments += regression_comments("l2_", [(r[0], r[1]) for r in rows])
    comments += regression_comments("l43_", [(r[0], r[2]) for r in rows])
    return format_table(["epsilon", "l2", "l43_supercurrent", "energy_gap"], rows, comments)


# (name, metric, remove global phase first)
_GP_METRICS = (
    ("l43_supercurrent", Metric.L43_SUPERCURRENT, False),
    ("l2_mod_phase", Metric.L2, True),
    ("l2_gradient_mod_phase", Metric.L2_GRADIENT, True),
)


def _gp_states_at(
    initial: ComplexField, cfg: GPConfig, steps: Sequence[int]
) -> Dict[int, Tuple[ComplexField, DetectedVortices]]:
    """Run the GP solver and keep the states reached at *steps*."""
    wanted = set(steps)
    kept: Dict[int, Tuple[ComplexField, DetectedVortices]] = {}

    def keep(step: int, t: float, state: ComplexField, detected: DetectedVortices) -> None:
        if step in wanted:
            kept[step] = (state, detected)

    stride = math.gcd(*wanted, cfg.n_steps)
    run_gp(initial, replace(cfg, snapshot_stride=stride), keep_snapshots=False, on_snapshot=keep)
    return kept


def _sweep_gp(
    scenario: ScenarioConfig, eps_values: Sequence[float], times: Optional[Sequence[float]]
) -> str:
    times = sorted(set(times)) if times else [scenario.t_max]
    if times[0] <= 0.0:
        raise InvalidParamsError(f"comparison times must be positive, got {times[0]:g}")
    config = scenario.configuration()
    record = integrate(config, scenario.integrator_config(t_max=times[-1]))
    _require_full_run(record.termination, float(record.times[-1]))
    grid = scenario.polar_grid()

    curves: Dict[Tuple[float, str, str], List[Tuple[float, float]]] = {}
    for epsilon in eps_values:
        cfg = scenario.gp_config(epsilon=epsilon, t_max=times[-1])
        steps = {max(1, round(t / cfg.dt)): t for t in times}
        initial = _reconstruct(scenario, config, epsilon, None)
        states = _gp_states_at(initial, cfg, list(steps))
        for step, t in steps.items():
            state, detected = states[step]
            target = record.state_at(step * cfg.dt)
            references = (
                ("psi_star", _reconstruct(scenario, target, epsilon, None)),
                ("u_star", canonical_map(target, scenario.n_modes, grid)),
            )
            for ref_name, reference in references:
                for name, metric, mod_phase in _GP_METRICS:
                    value = compare(reference, state, metric, relative=True, mod_phase=mod_phase)
                    curves.setdefault((t, ref_name, name), []).append((epsilon, value))
            position = float(np.max(detected.match(target))) if len(detected) else math.inf
            curves.setdefault((t, "ode", "position"), []).append((epsilon, position))
            logger.info(
                "sweep-eps gp: epsilon=%g t=%g position_error=%.6g", epsilon, t, position
            )

    rows: List[List[Cell]] = []
    for (t, ref_name, name), points in curves.items():
        fit = dict(regression_comments("", points))
        rows.append(
            [
                t,
                ref_name,
                name,
                *(value for _, value in points),
                *(fit.get(key, "") for key in ("slope", "intercept", "residual")),
            ]
        )
    header = [
        "t",
        "reference",
        "metric",
        *(f"eps_{epsilon:g}" for epsilon in eps_values),
        "slope",
        "intercept",
        "residual",
    ]
    return format_table(header, rows, [("t_end", times[-1])])


def _cmd_sweep_eps(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.config)
    if args.against == "canonical":
        gamma_const = args.gamma
        if gamma_const is None:
            gamma_const = compute_gamma(
                DEFAULT_GAMMA_RATIOS, DEFAULT_PROFILE_MESH, DEFAULT_PROFILE_TOL
            ).gamma
        text = _sweep_canonical(scenario, args.eps, gamma_const)
    else:
        text = _sweep_gp(scenario, args.eps, args.times)
    write_text(args.out, text)
    return EXIT_OK


def _cmd_gamma(args: argparse.Namespace) -> int:
    estimate = compute_gamma(args.ratios, args.mesh, args.tol)
    extrapolants: List[Cell] = ["", *estimate.extrapolants.tolist()]
    rows = [
        [ratio, sample, extra]
        for ratio, sample, extra in zip(estimate.ratios, estimate.samples, extrapolants)
    ]
    comments = [("gamma", estimate.gamma), ("uncertainty", estimate.uncertainty)]
    write_text(args.out, format_table(["ratio", "sample", "extrapolant"], rows, comments))
    return EXIT_OK


def _cmd_track_error(args: argparse.Namespace) -> int:
    record = read_trajectory(args.traj)
    series = read_vortex_series(args.vortices)
    n = record.degrees.size
    rows = []
    for t, detected in series.items():
        if len(detected) == 0 and n:
            logger.warning("t=%g: no vortices detected, distances are infinite", t)
        reference = record.state_at(t)
        distances = detected.match(reference)
        paired = detected.paired_configuration(reference)
        w11 = math.nan
        if paired is not None:
            try:
                w11 = dirac_w11_distance(reference, paired)
            except PairingInvalidError as exc:
                logger.debug("t=%g: %s", t, exc)
        worst = float(np.max(distances)) if n else 0.0
        rows.append([t, *distances.tolist(), worst, w11])
    header = ["t", *(f"d{j}" for j in range(1, n + 1)), "max_distance", "w11"]
    write_text(args.out, format_table(header, rows))
    return EXIT_OK


# ── Parser ──────────────────────────────────────────────────────────────────


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1; status 2 is reserved for guard stops."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


Handler = Callable[[argparse.Namespace], int]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="vortexlab",
        description="Point-vortex dynamics and Gross-Pitaevskii reference runs on the unit disk.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings only")
    sub = parser.add_subparsers(dest="command", required=True)
    handlers: Dict[str, Handler] = {}

    def command(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        handlers[name] = handler
        return sub.add_parser(name, help=help_text, description=help_text)

    p = command("profile", _cmd_profile, "Solve the radial core profile")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--r0", type=float, required=True)
    p.add_argument("--mesh", type=int, default=DEFAULT_PROFILE_MESH)
    p.add_argument("--tol", type=float, default=DEFAULT_PROFILE_TOL)
    p.add_argument("--out", default="-")

    p = command("evolve", _cmd_evolve, "Integrate the reduced point-vortex dynamics")
    p.add_argument("--config", required=True, help="Scenario JSON or shipped name (case1..case8)")
    p.add_argument("--out", default="-")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--n-modes", type=int, default=None)

    p = command("reconstruct", _cmd_reconstruct, "Smoothed wave function at a trajectory time")
    p.add_argument("--traj", required=True)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--r0", type=float, default=None)

    p = command("gp-run", _cmd_gp_run, "Run the reference Gross-Pitaevskii solver")
    p.add_argument("--config", required=True)
    p.add_argument("--out-prefix", required=True, help="Output directory")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--no-snapshots", action="store_true", help="Skip snap_<step>.gpf files")

    p = command("localize", _cmd_localize, "Detect vortices in a field file")
    p.add_argument("--field", required=True)
    p.add_argument("--out", default="-")

    p = command("compare", _cmd_compare, "Distance between two field files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--metric", choices=[m.value for m in Metric], default=Metric.L2.value)
    p.add_argument("--relative", action="store_true", help="Divide by the norm of --a")
    p.add_argument("--mod-phase", action="store_true", help="Remove the best global phase")
    p.add_argument("--out", default="-")

    p = command("sweep-dt", _cmd_sweep_dt, "Time-step convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--dts", type=_float_list, default=[1e-2, 7.5e-3, 5e-3, 2.5e-3, 1e-3])
    p.add_argument("--reference-dt", type=float, default=REFERENCE_DT)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--out", default="-")

    p = command("sweep-n", _cmd_sweep_n, "Spectral truncation convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--ns", type=_int_list, default=[4, 8, 16, 32, 64])
    p.add_argument("--reference-n", type=int, default=REFERENCE_N_MODES)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--out", default="-")

    p = command("sweep-eps", _cmd_sweep_eps, "Error against epsilon with a power-law fit")
    p.add_argument("--config", required=True)
    p.add_argument("--eps", type=_float_list, default=[0.1, 0.07, 0.05, 0.03])
    p.add_argument("--against", choices=["canonical", "gp"], default="canonical")
    p.add_argument(
        "--times",
        type=_float_list,
        default=None,
        help="GP comparison times (default: the scenario t_max)",
    )
    p.add_argument(
        "--gamma",
        type=float,
        default=None,
        help="Core energy constant for the energy gap (default: computed)",
    )
    p.add_argument("--out", default="-")

    p = command("gamma", _cmd_gamma, "Extrapolate the core energy constant gamma")
    p.add_argument("--ratios", type=_float_list, default=list(DEFAULT_GAMMA_RATIOS))
    p.add_argument("--mesh", type=int, default=DEFAULT_PROFILE_MESH)
    p.add_argument("--tol", type=float, default=DEFAULT_PROFILE_TOL)
    p.add_argument("--out", default="-")

    p = command("track-error", _cmd_track_error, "Distance of detected vortices to a trajectory")
    p.add_argument("--traj", required=True)
    p.add_argument("--vortices", required=True)
    p.add_argument("--out", default="-")

    parser.set_defaults(handlers=handlers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point: ``vortexlab <command> [options]``."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG)
    elif args.quiet:
        set_level(logging.WARNING)

    handler = args.handlers[args.command]
    try:
        return handler(args)
    except GuardTriggeredError as exc:
        logger.warning("Stopped early: %s", exc)
        return EXIT_GUARD
    except VortexLabError as exc:
        logger.error("%s", exc)
        return EXIT_ERROR
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
