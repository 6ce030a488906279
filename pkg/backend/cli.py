"""
Command-line front end for the Bell-function decay simulator
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional

import pandas as pd

from backend import services
from components.analysis import time_sweep
from components.errors import SimulationError, UsageError
from components.qstate import density_matrix_to_dict, ewl_state, to_dense, xstate_to_dict
from config.settings import APP_CONFIG, EXIT_CODES, ORACLE_CONFIG, SWEEP_CONFIG
from utils.output import write_csv, write_json
from utils.performance import get_execution_summary, measure_execution_time
from utils.run_logger import RunLogger

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", required=True, help="output file")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=None)
    common.add_argument("--log-file", default=None)
    return common


def _noise_parser() -> argparse.ArgumentParser:
    noise = argparse.ArgumentParser(add_help=False)
    noise.add_argument("--config", default=None, help="key=value file; flags override its values")
    for flag in ("--omega", "--sigma", "--sigma-ratio", "--a1f", "--gamma-m", "--sf", "--temperature"):
        noise.add_argument(flag, default=None)
    noise.add_argument("--gamma-M", dest="gamma_M", default=None)
    return noise


def _state_parser() -> argparse.ArgumentParser:
    state = argparse.ArgumentParser(add_help=False)
    for flag in ("--family", "--r", "--a2", "--phase", "--mode", "--t-max", "--n-steps", "--scan-resolution"):
        state.add_argument(flag, default=None)
    return state


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=APP_CONFIG["name"],
        description="CHSH Bell-function and concurrence decay of two qubits under 1/f and quantum noise",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_CONFIG['version']}")
    commands = parser.add_subparsers(dest="command", required=True)
    common, noise, state = _common_parser(), _noise_parser(), _state_parser()

    fig1 = commands.add_parser("fig1", parents=[common], help="B over time and |a|^2 or r (adiabatic noise)")
    fig1.add_argument("--panel", choices=["a", "b"], default="a")

    fig2 = commands.add_parser("fig2", parents=[common], help="VSD time against purity for all noise modes")
    fig2.add_argument("--family", choices=["phi", "psi"], default="phi")
    fig2.add_argument("--inset", action="store_true", help="zoom on r close to 1")

    commands.add_parser("fig3", parents=[common], help="B against concurrence for the two Bell states")
    commands.add_parser("sweep", parents=[common, noise, state], help="tabulate B and C over a time grid")
    commands.add_parser("vsd", parents=[common, noise, state], help="locate the violation sudden death time")

    defocus = commands.add_parser("defocus-check", parents=[common, noise],
                                  help="Monte-Carlo check of the static-noise defocusing factor")
    defocus.add_argument("--points", default=None, help="comma-separated Omega t values")
    defocus.add_argument("--n-samples", default=None)
    defocus.add_argument("--seed", default=None)
    return parser


def _flag_values(args: argparse.Namespace, keys) -> Dict:
    return {key: getattr(args, key, None) for key in keys}


def _resolve(args: argparse.Namespace, defaults: Dict) -> Dict:
    file_values = services.load_config_file(args.config) if args.config else {}
    flags = _flag_values(args, services.PARAMETER_TYPES)
    return services.resolve_parameters(file_values, flags, defaults)


def _emit(args: argparse.Namespace, frame: pd.DataFrame, records: Optional[List[Dict]],
          parameters: Dict, rng: Optional[Dict] = None) -> Dict:
    if args.format == "json":
        if records is None:
            records = frame.to_dict(orient="records")
        return write_json(records, args.out, args.command, parameters, rng)
    return write_csv(frame, args.out, args.command, parameters, rng)


def cmd_fig1(args, run_logger: RunLogger) -> Dict:
    frame, parameters = services.fig1_frame(args.panel)
    run_logger.log_command_start(args.command, parameters)
    return _emit(args, frame, None, parameters)


def cmd_fig2(args, run_logger: RunLogger) -> Dict:
    frame, parameters = services.fig2_frame(args.family, args.inset)
    run_logger.log_command_start(args.command, parameters)
    for row in frame[frame["point"] == "experimental"].itertuples():
        run_logger.log_crossing(f"{row.mode} r={row.r}", row.omega_t_vsd, row.flag)
    return _emit(args, frame, None, parameters)


def cmd_fig3(args, run_logger: RunLogger) -> Dict:
    frame, parameters = services.fig3_frame()
    run_logger.log_command_start(args.command, parameters)
    return _emit(args, frame, None, parameters)


def cmd_sweep(args, run_logger: RunLogger) -> Dict:
    params = _resolve(args, services.sweep_defaults(SWEEP_CONFIG["t_max"]))
    cfg = services.build_sweep_config(params)
    parameters = cfg.to_dict()
    initial = ewl_state(cfg.ewl)
    parameters["initial_state"] = xstate_to_dict(initial)
    run_logger.log_command_start(args.command, parameters)
    parameters["initial_density_matrix"] = density_matrix_to_dict(to_dense(initial))
    series = time_sweep(cfg)
    return _emit(args, series.to_frame(), series.records(), parameters)


def cmd_vsd(args, run_logger: RunLogger) -> Dict:
    params = _resolve(args, services.sweep_defaults(SWEEP_CONFIG["vsd_t_max"]))
    cfg = services.build_sweep_config(params)
    parameters = cfg.to_dict()
    run_logger.log_command_start(args.command, parameters)
    record = services.vsd_record(cfg)
    run_logger.log_crossing("VSD", record["omega_t_vsd"], record["flag"])
    run_logger.log_crossing("ESD", record["omega_t_esd"], record["esd_flag"])
    return _emit(args, services.vsd_frame(record), [record], parameters)


def _parse_points(raw: Optional[str]) -> List[float]:
    if raw is None:
        return list(ORACLE_CONFIG["points"])
    try:
        points = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"points: cannot parse {raw!r} as comma-separated numbers")
    if not points or any(p < 0 for p in points):
        raise UsageError("points: need at least one nonnegative Omega t")
    return points


def cmd_defocus_check(args, run_logger: RunLogger) -> Dict:
    defaults = services.sweep_defaults(SWEEP_CONFIG["t_max"])
    defaults.update({"seed": ORACLE_CONFIG["seed"], "n_samples": ORACLE_CONFIG["n_samples"]})
    params = _resolve(args, defaults)
    noise = services.build_noise(params)
    points = _parse_points(args.points)
    parameters = {
        "omega": noise.omega,
        "sigma": noise.sigma,
        "points": points,
    }
    run_logger.log_command_start(args.command, parameters)
    frame, rng = services.defocus_check_frame(noise, points, params["n_samples"], params["seed"])
    return _emit(args, frame, None, parameters, rng)


COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "sweep": cmd_sweep,
    "vsd": cmd_vsd,
    "defocus-check": cmd_defocus_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version exit cleanly; anything else is a usage error
        return EXIT_CODES["success"] if exc.code in (0, None) else EXIT_CODES["usage_error"]

    run_logger = None
    try:
        run_logger = RunLogger(args.log_level, args.log_file)
        manifest = measure_execution_time(COMMANDS[args.command])(args, run_logger)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        if run_logger:
            run_logger.log_failure(args.command, e)
        return EXIT_CODES["usage_error"]
    except (SimulationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        if run_logger:
            run_logger.log_failure(args.command, e)
        return EXIT_CODES["runtime_error"]

    run_logger.log_output_written(args.out, manifest["checksum"])
    logger.debug(f"Execution summary: {get_execution_summary()}")
    return EXIT_CODES["success"]
