import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.graph import AbsorptionConfig
from src.graph.examples import three_node
from src.markov import StationaryDistribution, transition_exponential, transition_linear, raw_transition, p_delta, \
    stationary
from src.mapfunction import (
    Partition,
    CodelengthBreakdown,
    canonicalize,
    all_partitions,
    write_partition,
    read_partition,
    plogp,
    entropy,
    community_flows,
    flow_matrix,
    map_function,
    standard_map,
    adjacency_map,
    absorbing_map,
    pi0_for_equivalence,
)


def test_plogp_and_entropy():
    assert plogp(0.0) == 0.0
    assert plogp(0.5) == pytest.approx(-0.5)
    assert_allclose(plogp(np.array([0.0, 1.0, 0.25])), [0.0, 0.0, -0.5])
    assert entropy(np.full(4, 0.25)) == pytest.approx(2.0)
    assert entropy(np.array([1.0, 0.0])) == 0.0
    with pytest.raises(ValueError, match="negative"):
        entropy(np.array([1.2, -0.2]))
    with pytest.raises(ValueError, match="> 1"):
        entropy(np.array([0.7, 0.7]))


def test_canonicalize_and_partition():
    assert canonicalize((3, 3, 1, 0, 1)) == (0, 0, 1, 2, 1)
    M = Partition((5, 5, 2))
    assert M == Partition((0, 0, 1))
    assert M.m == 2 and M.n == 3
    assert M.communities() == [frozenset({0, 1}), frozenset({2})]
    assert str(M) == '{{1, 2}, {3}}'
    assert_allclose(M.membership(), [[1, 0], [1, 0], [0, 1]])


def test_partition_constructors():
    assert Partition.from_communities([[2], [0, 1]], n=3) == Partition((1, 1, 0))
    assert Partition.one_community(4).m == 1
    assert Partition.singletons(4).m == 4
    with pytest.raises(ValueError, match="overlap"):
        Partition.from_communities([[0, 1], [1]], n=2)
    with pytest.raises(ValueError, match="not assigned"):
        Partition.from_communities([[0]], n=2)
    with pytest.raises(ValueError):
        Partition(())


@pytest.mark.parametrize("n, bell", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_all_partitions_counts_bell_numbers(n, bell):
    partitions = list(all_partitions(n))
    assert len(partitions) == bell
    assert len(set(partitions)) == bell


def test_partition_csv(tmp_path):
    M = Partition((0, 1, 1, 2, 0))
    write_partition(M, tmp_path / 'partition.csv')
    assert read_partition(tmp_path / 'partition.csv') == M
    (tmp_path / 'bad.csv').write_text("id,label\n0,0\n")
    with pytest.raises(ValueError, match="node,community"):
        read_partition(tmp_path / 'bad.csv')


def test_community_flows_exclude_internal_flow():
    F = np.array([[0.1, 0.2, 0.0],
                  [0.3, 0.0, 0.1],
                  [0.0, 0.1, 0.2]])
    q_exit, q_enter = community_flows(F, np.array([0, 0, 1]))
    # F_kj: j -> k；社群 0 = {0, 1}
    assert_allclose(q_exit, [0.1, 0.1])
    assert_allclose(q_enter, [0.1, 0.1])


def test_one_community_codes_the_stationary_entropy(clique):
    P = transition_exponential(clique.graph, clique.absorption, 1.0)
    pi = stationary(P)
    breakdown = map_function(Partition.one_community(16), P, pi)
    assert breakdown.q_enter_total == pytest.approx(0.0, abs=1e-12)
    assert breakdown.total == pytest.approx(entropy(pi.pi))


def test_singletons_on_a_walk_without_self_loops(two_triangles):
    # 每一步都離開單點社群: L = H(pi) + sum_i 2 pi_i H(1/2, 1/2) = H(pi) + 2
    P = raw_transition(two_triangles)
    pi = stationary(P)
    assert standard_map(Partition.singletons(6), P).total == pytest.approx(entropy(pi.pi) + 2.0)


def test_two_triangles_prefer_the_planted_split(two_triangles):
    planted = Partition((0, 0, 0, 1, 1, 1))
    values = {M: adjacency_map(M, two_triangles).total for M in all_partitions(6)}
    assert values[planted] == pytest.approx(2.3210, abs=1e-3)
    assert values[planted] < values[Partition.one_community(6)]
    assert values[planted] < values[Partition.singletons(6)]


def test_breakdown_sums_to_total(random_graph):
    g = random_graph(6, seed=4)
    P = raw_transition(g)
    breakdown = standard_map(Partition((0, 0, 1, 1, 2, 2)), P)
    assert breakdown.total == pytest.approx(
        breakdown.q_enter_total * breakdown.index_entropy + breakdown.p_circ @ breakdown.module_entropies)
    assert_allclose(breakdown.p_circ, breakdown.q_exit + np.bincount([0, 0, 1, 1, 2, 2], weights=stationary(P).pi))


@pytest.mark.parametrize("seed", [5, 6, 7])
def test_map_function_is_invariant_under_node_relabeling(random_graph, random_rates, seed):
    g = random_graph(7, seed=seed)
    P = transition_exponential(g, AbsorptionConfig(random_rates(7, seed=seed)), 1.5)
    pi = stationary(P)
    labels = np.random.default_rng(seed).integers(0, 3, 7)
    order = np.random.default_rng((seed, 1)).permutation(7)

    relabeled = map_function(Partition(tuple(labels[order])), P.matrix[np.ix_(order, order)], pi.pi[order])
    original = map_function(Partition(tuple(labels)), P, pi)
    assert relabeled.total == pytest.approx(original.total, abs=1e-12)
    assert sorted(relabeled.q_exit) == pytest.approx(sorted(original.q_exit), abs=1e-12)


def test_breakdown_json(tmp_path, clique):
    breakdown = standard_map(Partition(clique.planted['M*']), raw_transition(clique.graph))
    breakdown.to_json(tmp_path / 'breakdown.json')
    loaded = CodelengthBreakdown.from_json(tmp_path / 'breakdown.json')
    assert loaded.total == pytest.approx(breakdown.total)
    assert_allclose(loaded.q_exit, breakdown.q_exit)


def test_map_function_dimension_mismatch(clique):
    P = raw_transition(clique.graph)
    with pytest.raises(ValueError, match="Dimension mismatch"):
        map_function(Partition.singletons(3), P, StationaryDistribution.uniform(16))


def test_flow_matrix_scales_columns(random_graph):
    g = random_graph(4, seed=1)
    P = raw_transition(g)
    pi = stationary(P)
    assert_allclose(flow_matrix(P, pi).sum(axis=0), pi.pi)


def test_absorbing_map_matches_standard_map_under_equivalent_pi0(random_graph, random_rates):
    g = random_graph(5, seed=6)
    delta = random_rates(5, seed=6)
    pi0 = pi0_for_equivalence(g, delta)
    P = p_delta(g, delta)
    for M in all_partitions(5):
        assert absorbing_map(M, g, delta, pi0).total == pytest.approx(standard_map(M, P).total, abs=1e-10)


def test_three_node_absorbing_map_isolates_the_source_node():
    for delta_2 in np.linspace(0.1, 10.0, 12):
        example = three_node((0.1, delta_2, 0.1))
        values = {name: absorbing_map(Partition(labels), example.graph, example.absorption).total
                  for name, labels in example.planted.items()}
        assert min(values, key=values.get) == 'isolated_middle'


def test_three_node_linear_input_ties_the_source_node():
    example = three_node((0.1, 0.1, 0.1))
    P = transition_linear(example.graph, example.absorption, 0.05)
    one = standard_map(Partition(example.planted['one_community']), P).total
    isolated = standard_map(Partition(example.planted['isolated_middle']), P).total
    assert one == pytest.approx(isolated, abs=1e-10)
