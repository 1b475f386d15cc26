"""實驗執行器: 每個實驗產生 CSV 與 JSON sidecar，失敗時刪除本次寫出的檔案"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pandas as pd

from src.config import setup_directory_structure, resolve_seed
from src.config.catalog import EXPERIMENT_CONFIGS, ExperimentName
from src.config.settings import IDENTITY_TOL
from src.graph.digraph import AbsorptionConfig
from src.graph.examples import ExampleNetwork, three_node, four_clique, grid, random_strongly_connected
from src.graph.io import read_edge_list, read_node_attributes, read_node_values
from src.markov import feasibility_bound, transition_linear
from src.mapfunction import Partition, absorbing_map, standard_map
from src.infomap import OptimizerConfig, SweepResult, algorithm1, algorithm2, markov_time_sweep, subcommunities
from src.absinv import identity_suite
from src.epidemic import (RingLatticeSpec, StageParams, build_network, stage_schedule, run_experiment,
                          moving_average)
from src.experiments.artifacts import ArtifactWriter, write_sidecar, read_sidecar


logger = logging.getLogger(__name__)

Runner = Callable[[dict[str, Any], int, ArtifactWriter, bool], dict[str, Any]]
RUNNERS: dict[str, Runner] = {}


def register(name: ExperimentName):
    def decorator(func: Runner) -> Runner:
        RUNNERS[name] = func
        return func
    return decorator


def coerce_param(raw: str, default: Any) -> Any:
    """依預設值的型別解析命令列的 `key=value`"""
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered not in ('1', '0', 'true', 'false', 'yes', 'no'):
            raise ValueError(f"Expected a boolean, got '{raw}'")
        return lowered in ('1', 'true', 'yes')
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        item = type(default[0]) if default else float
        return tuple(item(x) for x in raw.split(',') if x.strip())
    return raw


def _normalize(value: Any, default: Any) -> Any:
    """JSON 讀回的 list 還原為 tuple"""
    if isinstance(default, tuple) and isinstance(value, list):
        return tuple(value)
    return value


@dataclass(frozen=True)
class ExperimentDescriptor:
    name: ExperimentName
    params: dict[str, Any]
    seed: int
    output_dir: Path | None = None

    @classmethod
    def create(cls,
               name: str,
               overrides: dict[str, Any] | None = None,
               seed: int | None = None,
               output_dir: str | Path | None = None) -> 'ExperimentDescriptor':
        """合併預設參數與覆寫值，未知的實驗或參數名稱會引發 ValueError"""
        if name not in EXPERIMENT_CONFIGS:
            raise ValueError(f"Unknown experiment '{name}', expected one of {sorted(EXPERIMENT_CONFIGS)}")
        defaults = EXPERIMENT_CONFIGS[name].defaults
        overrides = overrides or {}
        unknown = set(overrides) - set(defaults)
        if unknown:
            raise ValueError(f"Unknown parameters {sorted(unknown)} for '{name}', expected {sorted(defaults)}")

        params = {key: _normalize(overrides.get(key, value), value) for key, value in defaults.items()}
        return cls(name, params, resolve_seed(seed), None if output_dir is None else Path(output_dir))

    @classmethod
    def from_sidecar(cls, path: str | Path, output_dir: str | Path | None = None) -> 'ExperimentDescriptor':
        data = read_sidecar(path)
        return cls.create(data['experiment'], data['params'], data['seed'], output_dir)


@dataclass(frozen=True)
class ExperimentOutcome:
    descriptor: ExperimentDescriptor
    run_dir: Path
    outputs: tuple[Path, ...]
    summary: dict[str, Any]
    tables: dict[str, pd.DataFrame] = field(default_factory=dict)


def execute(descriptor: ExperimentDescriptor, progress: bool = False) -> ExperimentOutcome:
    """執行實驗並寫出 sidecar；任何錯誤都會先刪除已寫出的檔案再重新引發"""
    config = EXPERIMENT_CONFIGS[descriptor.name]
    run_dir = setup_directory_structure(descriptor.name, descriptor.seed, descriptor.output_dir)
    writer = ArtifactWriter(run_dir)

    logger.info(f"開始執行 {config.display_name} (seed={descriptor.seed})")
    try:
        summary = RUNNERS[descriptor.name](descriptor.params, descriptor.seed, writer, progress)
        write_sidecar(writer, f"{Path(config.outputs[0]).stem}.json", descriptor.name, descriptor.seed,
                      descriptor.params, summary)
    except Exception as e:
        logger.error(f"{descriptor.name} 執行失敗: {e}")
        writer.cleanup()
        raise

    logger.info(f"{descriptor.name} 完成，輸出於 {run_dir}")
    return ExperimentOutcome(descriptor, run_dir, tuple(writer.written), summary, dict(writer.tables))


def _optimizer(params: dict, seed: int) -> OptimizerConfig:
    return OptimizerConfig(restarts=int(params['restarts']), rng_seed=seed)


def _sweep_frame(sweep: SweepResult, target: Partition | None = None, **columns) -> pd.DataFrame:
    frame = sweep.to_frame()
    for offset, (name, value) in enumerate(columns.items()):
        frame.insert(offset, name, value)
    if target is not None:
        frame['matches_planted'] = [p == target for p in sweep.partitions]
    return frame


def _interval(times: np.ndarray) -> list[float] | None:
    return [float(times.min()), float(times.max())] if times.size else None


def _threenode_table(params: dict, score: Callable[[Partition, ExampleNetwork], float]) -> pd.DataFrame:
    rows = []
    for delta_2 in np.linspace(params['delta2_min'], params['delta2_max'], int(params['points'])):
        example = three_node((params['delta_1'], delta_2, params['delta_3']))
        values = {name: score(Partition(labels), example) for name, labels in example.planted.items()}
        rows.append({'delta_2': delta_2, **values, 'argmin': min(values, key=values.get)})
    return pd.DataFrame(rows)


@register('threenode-la')
def run_threenode_la(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """L^(a)(M, A, delta, pi_0) 對五個分割，pi_0 均勻"""
    frame = _threenode_table(params, lambda M, ex: absorbing_map(M, ex.graph, ex.absorption).total)
    writer.csv('threenode_la.csv', frame)
    return {'argmin_counts': frame['argmin'].value_counts().to_dict()}


@register('threenode-l')
def run_threenode_l(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """L(M, P_l(D_delta, 0, t)) 對五個分割"""
    t = params['t']
    frame = _threenode_table(params, lambda M, ex: standard_map(M, transition_linear(ex.graph, ex.absorption, t)).total)
    writer.csv('threenode_l.csv', frame)
    gap = (frame['one_community'] - frame['isolated_middle']).abs().max()
    return {'argmin_counts': frame['argmin'].value_counts().to_dict(), 'max_tie_gap': float(gap)}


@register('fourclique-sweep')
def run_fourclique_sweep(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """P_l 與 P_e 在 H = h I 下的社群數，線性掃描取到可行上界為止"""
    opt = _optimizer(params, seed)
    frames, summary = [], {}
    for h in params['h_values']:
        example = four_clique(params['delta_high'], params['delta_low'], h)
        g, cfg = example.graph, example.absorption
        target = Partition(example.planted['M*'])

        points = int(params['linear_points'])
        linear_times = feasibility_bound(g, cfg) * np.arange(1, points + 1) / points
        exp_times = np.linspace(params['exp_t_min'], params['exp_t_max'], int(params['exp_points']))

        for kind, times in (('linear', linear_times), ('exponential', exp_times)):
            sweep = markov_time_sweep(g, cfg, kind, times, opt, progress)
            frames.append(_sweep_frame(sweep, target, kind=kind, h=h))
            summary[f"{kind}_h{h:g}_planted_interval"] = _interval(sweep.times_with(target))

    writer.csv('fourclique_sweep.csv', pd.concat(frames, ignore_index=True))
    return summary


@register('grid-sweep')
def run_grid_sweep(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """網格上 P_l(D_delta, 0, t) 與 P_e(D_delta, h I, t) 的掃描"""
    opt = _optimizer(params, seed)
    example = grid(tuple(params['rates']))
    g = example.graph
    sweeps = [
        ('linear', 0.0, np.linspace(params['linear_t_min'], params['linear_t_max'], int(params['linear_points']))),
        ('exponential', params['exp_h'], np.linspace(params['exp_t_min'], params['exp_t_max'], int(params['exp_points']))),
    ]

    frames, summary = [], {}
    for kind, h, times in sweeps:
        sweep = markov_time_sweep(g, example.absorption.with_h(h), kind, times, opt, progress)
        frames.append(_sweep_frame(sweep, kind=kind, h=h))
        summary[f"{kind}_plateaus"] = [[p.num_communities, p.lower, p.upper] for p in sweep.plateaus()]

    writer.csv('grid_sweep.csv', pd.concat(frames, ignore_index=True))
    return summary


@register('grid-partition')
def run_grid_partition(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """線性輸入 (H = 0) 與指數輸入 (H = h I) 下的網格分割"""
    opt = _optimizer(params, seed)
    example = grid(tuple(params['rates']))
    g, cfg = example.graph, example.absorption
    side = int(round(np.sqrt(g.n)))

    linear = algorithm1(g, cfg.with_h(0.0), params['linear_t'], opt)
    exponential = algorithm2(g, cfg.with_h(params['exp_h']), params['exp_t'], opt)

    rows, cols = np.divmod(np.arange(g.n), side)
    frame = pd.DataFrame({
        'node': np.arange(g.n),
        'row': rows,
        'col': cols,
        'quadrant': np.asarray(example.planted['quadrants']) + 1,
        'linear_community': linear.array,
        'exponential_community': exponential.array,
    })
    writer.csv('grid_partition.csv', frame)
    return {
        'linear_communities': linear.m,
        'linear_is_B1_only': linear == Partition(example.planted['B1_only']),
        'exponential_communities': exponential.m,
        'exponential_is_quadrants': exponential == Partition(example.planted['quadrants']),
    }


def _ring_inputs(params: dict, seed: int) -> tuple[RingLatticeSpec, StageParams]:
    spec = RingLatticeSpec(int(params['n_ws']), int(params['N_ws']), int(params['k_ws']), seed=seed)
    stage_params = StageParams(params['beta_star'], params['delta_star'], params['delta_sstar'], params['alpha'])
    return spec, stage_params


@register('sir-stages')
def run_sir_stages(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """各階段 N_sim 次 Gillespie 模擬的平均疫情長度、最終規模與高峰"""
    spec, stage_params = _ring_inputs(params, seed)
    result = run_experiment(spec, stage_params, int(params['N_s']), int(params['n_sim']), seed,
                            per_run=bool(params['per_run']), progress=progress)

    writer.csv('sir_stages.csv', result.summary)
    if result.runs is not None:
        writer.csv('sir_runs.csv', result.runs)
    writer.edge_list('network.edges', result.network.graph)
    writer.json('schedule.json', {
        'beta_sstar': stage_params.beta_sstar,
        'network_bridges': result.network.bridges,
        **result.schedule[-1].to_dict(),
    })

    summary = result.summary
    window = min(5, len(summary))
    smoothed = moving_average(summary['mean_duration'].to_numpy(), window)
    return {
        'beta_sstar': stage_params.beta_sstar,
        'peak_duration_stage': int(summary['stage'].iloc[int(np.argmax(smoothed)) + window // 2]),
        'final_size_ratio': float(summary['mean_final_size'].iloc[-1] / summary['mean_final_size'].iloc[0]),
        'peak_ratio': float(summary['mean_peak'].iloc[-1] / summary['mean_peak'].iloc[0]),
    }


@register('sir-communities')
def run_sir_communities(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """選定階段下 P_e(D_delta, 0, t) 的社群數與一個晶格被切成的子社群數"""
    spec, stage_params = _ring_inputs(params, seed)
    N_s = int(params['N_s'])
    stages = [int(s) for s in params['stages']]
    if any(s < 1 or s > N_s for s in stages):
        raise ValueError(f"Stages must lie in 1..{N_s}, got {stages}")
    planted = int(params['planted'])
    if not 0 <= planted < spec.N_ws:
        raise ValueError(f"Planted lattice must lie in 0..{spec.N_ws - 1}, got {planted}")

    network = build_network(spec)
    schedule = stage_schedule(network, stage_params, N_s, seed)
    members = network.members(planted)
    times = np.linspace(params['t_min'], params['t_max'], int(params['points']))
    opt = _optimizer(params, seed)

    frames, summary = [], {}
    for s in stages:
        cfg = AbsorptionConfig(schedule[s - 1].delta, 0.0)
        sweep = markov_time_sweep(network.graph, cfg, 'exponential', times, opt, progress)
        pieces = [len(subcommunities(p, members)) if p is not None else -1 for p in sweep.partitions]
        frames.append(pd.DataFrame({
            'stage': s,
            't': sweep.times,
            'num_communities': sweep.community_counts,
            'num_subcommunities': pieces,
        }))
        summary[f"stage_{s}_max_subcommunities"] = int(max(pieces))

    writer.csv('sir_communities.csv', pd.concat(frames, ignore_index=True))
    return summary


@register('identities')
def run_identities(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """隨機強連通圖上的恆等式殘差，第 k 個試驗使用 default_rng((seed, k))"""
    n_min, n_max = int(params['n_min']), int(params['n_max'])
    if not 2 <= n_min <= n_max:
        raise ValueError(f"Expected 2 <= n_min <= n_max, got {n_min}, {n_max}")
    low, high = np.log10(params['delta_min']), np.log10(params['delta_max'])

    graphs, deltas = [], []
    for trial in range(int(params['trials'])):
        rng = np.random.default_rng((seed, trial))
        n = int(rng.integers(n_min, n_max + 1))
        graphs.append(random_strongly_connected(n, rng))
        deltas.append(10 ** rng.uniform(low, high, n))

    frame = identity_suite(graphs, deltas)
    writer.csv('identities.csv', frame)
    worst = frame.drop(columns=['trial', 'n']).max()
    return {
        'max_residuals': worst.to_dict(),
        'tolerance': IDENTITY_TOL,
        'passed': bool((worst <= IDENTITY_TOL).all()),
    }


def _scale_vector(h: Any, n: int) -> float | np.ndarray:
    """h 可以是數值或 `node value` 檔案"""
    try:
        return float(h)
    except (TypeError, ValueError):
        return read_node_values(h, n)


@register('custom')
def run_custom(params: dict, seed: int, writer: ArtifactWriter, progress: bool) -> dict:
    """使用者提供的邊列表與吸收率檔案上的 Markov time 掃描"""
    if not params['input'] or not params['delta']:
        raise ValueError("The custom experiment needs both 'input' and 'delta' files")
    g = read_edge_list(params['input'])
    cfg = read_node_attributes(params['delta'], n=g.n)
    cfg = cfg.with_h(_scale_vector(params['h'], g.n))

    times = np.linspace(params['t_min'], params['t_max'], int(params['points']))
    sweep = markov_time_sweep(g, cfg, params['kind'], times, _optimizer(params, seed), progress)
    writer.csv('custom_sweep.csv', sweep.to_frame())
    return {
        'failed_times': [float(t) for t, e in zip(sweep.times, sweep.errors) if e is not None],
        'plateaus': [[p.num_communities, p.lower, p.upper] for p in sweep.plateaus()],
    }
