"""主程式: absorbmap 命令列介面"""
import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np
from numpy.linalg import LinAlgError

from src.config import setup_logging, resolve_seed
from src.config.catalog import EXPERIMENT_CONFIGS, TransitionKind
from src.config.errors import AbsorbMapError
from src.config.richer import console, rich_print, DisplayManager
from src.config.settings import DEFAULT_RESTARTS, IDENTITY_TOL
from src.graph.io import read_edge_list, read_node_attributes, read_node_values
from src.markov import build_transition, stationary
from src.mapfunction import map_function, write_partition
from src.infomap import OptimizerConfig, algorithm1, algorithm2, markov_time_sweep
from src.absinv import check_identities
from src.experiments import ExperimentDescriptor, coerce_param, execute


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2
RUNTIME_ERRORS = (AbsorbMapError, ArithmeticError, LinAlgError, ValueError, OSError)


def parse_overrides(name: str, pairs: list[str]) -> dict:
    """`--param key=value` 依實驗預設值的型別轉換"""
    defaults = EXPERIMENT_CONFIGS[name].defaults
    overrides = {}
    for pair in pairs:
        key, sep, raw = pair.partition('=')
        if not sep:
            raise ValueError(f"Expected key=value, got '{pair}'")
        if key not in defaults:
            raise ValueError(f"Unknown parameter '{key}' for '{name}', expected one of {sorted(defaults)}")
        overrides[key] = coerce_param(raw, defaults[key])
    return overrides


def parse_times(raw: str) -> np.ndarray:
    """`t` 或 `start:stop:count`"""
    parts = raw.split(':')
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) == 3:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"Range '{raw}' needs a positive count")
        return np.linspace(start, stop, count)
    raise ValueError(f"Expected a Markov time or start:stop:count, got '{raw}'")


def load_inputs(args):
    g = read_edge_list(args.input)
    cfg = read_node_attributes(args.delta, n=g.n)
    h = getattr(args, 'h', None)
    if h is not None:
        cfg = cfg.with_h(read_node_values(h, g.n) if Path(h).exists() else float(h))
    return g, cfg


def run_command(args, parser: argparse.ArgumentParser) -> int:
    """執行實驗的工作流程"""
    try:
        if args.from_sidecar:
            descriptor = ExperimentDescriptor.from_sidecar(args.from_sidecar, args.output)
        else:
            if args.name is None:
                raise ValueError("Either an experiment name or --from-sidecar is required")
            descriptor = ExperimentDescriptor.create(args.name, parse_overrides(args.name, args.param),
                                                     args.seed, args.output)
    except (ValueError, OSError) as e:
        parser.error(str(e))

    config = EXPERIMENT_CONFIGS[descriptor.name]
    rich_print(f"正在執行 {config.display_name} (seed = {descriptor.seed}) ...")
    outcome = execute(descriptor, progress=True)

    display = DisplayManager()
    for name, frame in outcome.tables.items():
        if {'t', 'num_communities', 'codelength'} <= set(frame.columns):
            display.display_sweep(frame, name)
        elif 'mean_duration' in frame.columns:
            display.display_stage_summary(frame, every=max(1, len(frame) // 20))
    if descriptor.name == 'identities':
        display.display_identities(outcome.summary['max_residuals'], IDENTITY_TOL)

    rich_print(f"完成！輸出於 {outcome.run_dir}")
    return EXIT_OK


def partition_command(args, parser: argparse.ArgumentParser) -> int:
    """單一 Markov time 求分割，或對時間範圍掃描"""
    try:
        times = parse_times(args.t)
    except ValueError as e:
        parser.error(str(e))

    seed = resolve_seed(args.seed)
    g, cfg = load_inputs(args)
    opt = OptimizerConfig(restarts=args.restarts, rng_seed=seed)
    display = DisplayManager()
    out_dir = None if args.output is None else Path(args.output)
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    if times.size > 1:
        sweep = markov_time_sweep(g, cfg, args.kind, times, opt, progress=True)
        frame = sweep.to_frame()
        display.display_sweep(frame, f"{args.kind} sweep")
        if out_dir is not None:
            frame.to_csv(out_dir / 'sweep.csv', index=False)
        return EXIT_OK

    t = float(times[0])
    algorithm = algorithm1 if args.kind == TransitionKind.LINEAR.value else algorithm2
    partition = algorithm(g, cfg, t, opt)
    P = build_transition(g, cfg, args.kind, t)
    codelength = map_function(partition, P, stationary(P)).total
    display.display_partition(partition, codelength, f"{args.kind} input, t = {t:g}")
    if out_dir is not None:
        write_partition(partition, out_dir / 'partition.csv')
    return EXIT_OK


def identities_command(args, parser: argparse.ArgumentParser) -> int:
    """輸出各恆等式殘差 (JSON)"""
    g, cfg = load_inputs(args)
    residuals = check_identities(g, cfg.delta)
    console.print_json(json.dumps(residuals))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='absorbmap',
                                     description='InfoMap for absorbing random walks and related experiments')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run a registered experiment')
    run.add_argument('name', nargs='?', choices=sorted(EXPERIMENT_CONFIGS))
    run.add_argument('--param', action='append', default=[], metavar='KEY=VALUE',
                     help='override a registry parameter (repeatable)')
    run.add_argument('--from-sidecar', type=Path, help='re-run the experiment described by a JSON sidecar')
    run.add_argument('--seed', type=int)
    run.add_argument('--output', type=Path, help='output directory (default: ABSORBMAP_HOME/output)')
    run.set_defaults(handler=run_command)

    part = commands.add_parser('partition', help='minimize the map function on a user graph')
    part.add_argument('--input', required=True, help='edge list: src dst weight')
    part.add_argument('--delta', required=True, help='node attributes: node delta [h]')
    part.add_argument('--h', help='scalar h or a `node value` file')
    part.add_argument('--kind', choices=['linear', 'exponential'], default='exponential')
    part.add_argument('--t', required=True, help='Markov time or start:stop:count')
    part.add_argument('--restarts', type=int, default=DEFAULT_RESTARTS)
    part.add_argument('--seed', type=int)
    part.add_argument('--output', type=Path)
    part.set_defaults(handler=partition_command)

    ident = commands.add_parser('identities', help='residuals of the absorption-inverse identities')
    ident.add_argument('--input', required=True)
    ident.add_argument('--delta', required=True)
    ident.set_defaults(handler=identities_command)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != 'run':
        setup_logging()

    try:
        return args.handler(args, parser)
    except RUNTIME_ERRORS as e:
        error_message = f"{args.command} 失敗: {str(e)}"
        rich_print(error_message, style="bold red")
        logger.error(error_message)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
