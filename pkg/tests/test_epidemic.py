from functools import lru_cache

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pandas.testing import assert_frame_equal

from src.config.errors import ExhaustedBridges
from src.graph import WeightedDigraph
from src.epidemic import (
    RingLatticeSpec,
    StageParams,
    StageConfig,
    beta_balancing,
    build_network,
    stage_schedule,
    gillespie_sir,
    run_experiment,
    moving_average,
)


SMALL = RingLatticeSpec(n_ws=12, N_ws=4, k_ws=4, seed=3)


@pytest.fixture(scope='module')
def network():
    return build_network(SMALL)


def test_beta_balancing_default_parameters():
    assert beta_balancing(0.125, 0.2, 1.0, 0.1) == pytest.approx(0.135)
    assert StageParams().beta_sstar == pytest.approx(0.135)
    # alpha = 0 或 delta** = delta* 時不需補償
    assert beta_balancing(0.125, 0.2, 1.0, 0.0) == pytest.approx(0.125)
    assert beta_balancing(0.125, 0.2, 0.2, 0.1) == pytest.approx(0.125)
    with pytest.raises(ValueError):
        beta_balancing(0.125, 1.0, 0.2, 0.1)


def test_ring_lattice_spec_validation():
    with pytest.raises(ValueError, match="even"):
        RingLatticeSpec(k_ws=5)
    with pytest.raises(ValueError, match="smaller than n_ws"):
        RingLatticeSpec(n_ws=6, k_ws=6)
    with pytest.raises(ValueError, match="N_ws"):
        RingLatticeSpec(N_ws=0)
    assert RingLatticeSpec().n == 240


def test_network_structure(network):
    A = network.graph.adjacency
    assert network.graph.n == 48
    assert_allclose(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert len(network.bridges) == 48
    assert len(set(network.bridges)) == 48
    # 晶格邊 48 * 4 / 2 加上橋接邊
    assert A.sum() / 2 == 96 + 48
    assert np.all(A.sum(axis=0) >= 4)
    assert network.lattice_of[13] == 1


def test_lattice_neighbors(network):
    assert network.lattice_neighbors(0) == {1, 2, 10, 11}
    assert network.lattice_neighbors(13) == {12, 14, 15, 23}
    assert network.lattice_neighbors(0) <= network.neighbors(0)
    assert network.members(2).tolist() == list(range(24, 36))


def test_network_is_reproducible(network):
    again = build_network(SMALL)
    assert again.bridges == network.bridges
    assert_allclose(again.graph.adjacency, network.graph.adjacency)


def test_stage_schedule(network):
    params = StageParams()
    schedule = stage_schedule(network, params, N_s=6, seed=3)
    assert [s.stage_index for s in schedule] == [1, 2, 3, 4, 5, 6]
    assert_allclose(schedule[0].beta, params.beta_star)
    assert_allclose(schedule[0].delta, params.delta_star)

    for previous, stage in zip(schedule, schedule[1:]):
        upgrade = stage.bridge_log[-1]
        i1, i2 = upgrade.bridge
        l1, l2 = upgrade.balancing
        assert network.lattice_of[i1] != network.lattice_of[i2]
        assert previous.delta[i1] == previous.delta[i2] == params.delta_star
        assert stage.delta[i1] == stage.delta[i2] == params.delta_sstar
        assert np.count_nonzero(stage.delta != previous.delta) == 2

        for bridging, balancing in ((i1, l1), (i2, l2)):
            assert network.lattice_of[balancing] == network.lattice_of[bridging]
            assert balancing != bridging
            assert balancing not in network.neighbors(bridging)
            assert stage.beta[balancing] == pytest.approx(params.beta_sstar)

    assert np.count_nonzero(schedule[-1].delta == params.delta_sstar) == 10
    assert len(schedule[-1].to_dict()['bridges']) == 5


def test_stage_schedule_is_reproducible(network):
    first = stage_schedule(network, StageParams(), N_s=4, seed=11)
    second = stage_schedule(network, StageParams(), N_s=4, seed=11)
    assert [s.to_dict() for s in first] == [s.to_dict() for s in second]


def test_stage_schedule_runs_out_of_bridges(network):
    with pytest.raises(ExhaustedBridges):
        stage_schedule(network, StageParams(), N_s=500, seed=3)


def test_stage_config_is_frozen():
    stage = StageConfig(1, np.ones(3), np.ones(3))
    with pytest.raises(ValueError):
        stage.beta[0] = 2.0


def test_gillespie_event_log_is_consistent(network):
    stage = StageConfig(1, np.full(48, 0.6), np.full(48, 0.2))
    stats, log = gillespie_sir(network.graph, stage, seed=(1, 2), initial=5, record=True)
    assert log.nodes[0] == 5
    assert np.all(np.diff(log.times) >= 0)
    assert np.all(log.S + log.I + log.R == 48)
    assert log.I[-1] == 0
    assert len(log.times) == 2 * stats.final_size
    assert stats.peak == log.I.max()
    assert stats.final_size == 48 - log.S[-1]
    assert stats.duration == pytest.approx(log.times[-1])
    assert 1 <= stats.peak <= stats.final_size <= 48


def test_gillespie_is_reproducible(network):
    stage = StageConfig(1, np.full(48, 0.3), np.full(48, 0.2))
    first, _ = gillespie_sir(network.graph, stage, seed=(9, 1, 4))
    second, _ = gillespie_sir(network.graph, stage, seed=(9, 1, 4))
    assert first == second


def test_without_transmission_only_the_seed_recovers(network):
    delta = 0.5
    stage = StageConfig(1, np.zeros(48), np.full(48, delta))
    durations = []
    for r in range(2000):
        stats, _ = gillespie_sir(network.graph, stage, seed=(5, r))
        assert stats.final_size == 1 and stats.peak == 1
        durations.append(stats.duration)
    durations = np.asarray(durations)
    # 恢復時間 ~ Exp(delta)，3 個標準誤差內
    assert abs(durations.mean() - 1 / delta) < 3 * (1 / delta) / np.sqrt(durations.size)


def test_gillespie_rejects_mismatched_stage(network):
    with pytest.raises(ValueError, match="entries for 48 nodes"):
        gillespie_sir(network.graph, StageConfig(1, np.ones(3), np.ones(3)), seed=0)


def test_run_experiment_tables():
    params = StageParams()
    result = run_experiment(SMALL, params, N_s=3, N_sim=5, seed=3, per_run=True)
    assert result.summary.columns.tolist() == ['stage', 'mean_duration', 'mean_final_size', 'mean_peak', 'n_sim']
    assert result.summary['stage'].tolist() == [1, 2, 3]
    assert result.runs.shape == (15, 5)
    assert_allclose(result.summary['mean_final_size'],
                    result.runs.groupby('stage')['final_size'].mean().to_numpy())

    again = run_experiment(SMALL, params, N_s=3, N_sim=5, seed=3)
    assert again.runs is None
    assert_frame_equal(again.summary, result.summary)


def test_run_experiment_needs_simulations():
    with pytest.raises(ValueError, match="N_sim"):
        run_experiment(SMALL, StageParams(), N_s=2, N_sim=0, seed=1)


def test_moving_average():
    assert_allclose(moving_average(np.arange(1.0, 6.0), 3), [2.0, 3.0, 4.0])
    assert moving_average(np.ones(10)).size == 6


def _final_size_distribution(A: np.ndarray, beta: np.ndarray, delta: np.ndarray, initial: int) -> dict[int, float]:
    """連續時間馬可夫鏈的嵌入跳躍鏈，列舉所有狀態求最終規模的分佈"""
    @lru_cache(maxsize=None)
    def outcome(state: tuple[int, ...]) -> tuple[tuple[int, float], ...]:
        infectious = [i for i, s in enumerate(state) if s == 1]
        if not infectious:
            return ((sum(s == 2 for s in state), 1.0),)

        moves = [(delta[i], i, 2) for i in infectious]
        moves += [(sum(beta[i] * A[k, i] for i in infectious), k, 1) for k, s in enumerate(state) if s == 0]
        total = sum(rate for rate, _, _ in moves)
        result: dict[int, float] = {}
        for rate, node, status in moves:
            if rate == 0:
                continue
            following = list(state)
            following[node] = status
            for size, p in outcome(tuple(following)):
                result[size] = result.get(size, 0.0) + rate / total * p
        return tuple(result.items())

    start = [0] * len(beta)
    start[initial] = 1
    return dict(outcome(tuple(start)))


@pytest.mark.slow
def test_final_size_on_a_line_matches_the_exact_chain():
    line = WeightedDigraph.undirected([(0, 1), (1, 2)], n=3)
    beta, delta = np.array([0.5, 0.8, 0.3]), np.array([0.4, 0.6, 0.5])
    expected = _final_size_distribution(line.adjacency, beta, delta, initial=0)
    assert sum(expected.values()) == pytest.approx(1.0)

    runs = 100_000
    stage = StageConfig(1, beta, delta)
    sizes = np.array([gillespie_sir(line, stage, seed=(12, r), initial=0)[0].final_size for r in range(runs)])
    for size in (1, 2, 3):
        p = expected.get(size, 0.0)
        assert abs(np.mean(sizes == size) - p) < 3 * np.sqrt(p * (1 - p) / runs) + 1e-12
