import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.config.errors import NotStronglyConnected, RankDeficiencyMismatch, SpectralRadiusTooLarge
from src.config.settings import IDENTITY_TOL
from src.graph.examples import random_strongly_connected
from src.absinv import (
    rank,
    group_inverse,
    kernel_vector,
    absorption_inverse,
    fundamental_from_absinv,
    series_fundamental,
    absinv_first_order_error,
    z1_from_z0,
    z1_direct,
    sherman_morrison_chain,
    l1_absinv_relation,
    dprime_absinv_relation,
    group_inverse_relation,
    check_identities,
    identity_suite,
    IdentityCheck,
)


def test_rank():
    assert rank(np.diag([1.0, 0.0, 2.0])) == 2
    assert rank(np.zeros((3, 3))) == 0
    assert rank(np.ones((4, 4))) == 1


def test_group_inverse_of_invertible_matrix():
    X = np.array([[2.0, 1.0], [0.5, 3.0]])
    assert_allclose(group_inverse(X), np.linalg.inv(X))


def test_group_inverse_properties_on_a_laplacian(random_graph):
    L = random_graph(7, seed=9).laplacian
    G = group_inverse(L)
    assert_allclose(L @ G @ L, L, atol=1e-10)
    assert_allclose(G @ L @ G, G, atol=1e-10)
    assert_allclose(L @ G, G @ L, atol=1e-10)


def test_group_inverse_of_idempotent_is_itself():
    E = np.array([[1.0, 1.0], [0.0, 0.0]])
    assert_allclose(group_inverse(E), E, atol=1e-12)
    assert_allclose(group_inverse(np.zeros((2, 2))), 0.0)


def test_group_inverse_does_not_exist_for_nilpotent():
    with pytest.raises(RankDeficiencyMismatch):
        group_inverse(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_kernel_vector(random_graph, three):
    g = random_graph(8, seed=12)
    u = kernel_vector(g).u
    assert np.all(u > 0)
    assert u.sum() == pytest.approx(1.0)
    assert_allclose(g.laplacian @ u, 0.0, atol=1e-12)
    with pytest.raises(NotStronglyConnected):
        kernel_vector(three.graph)


def test_absorption_inverse_defining_properties(random_graph, random_rates):
    for seed in range(5):
        g = random_graph(6, seed=seed)
        absinv = absorption_inverse(g, random_rates(6, seed=seed))
        on_null, on_range = absinv.defining_residuals()
        assert on_null < IDENTITY_TOL
        assert on_range < IDENTITY_TOL


def test_absorption_inverse_rejects_non_positive_rates(pair):
    with pytest.raises(ValueError, match="strictly positive"):
        absorption_inverse(pair.graph, np.array([1.0, 0.0]))


def test_two_node_absorption_inverse_is_rate_independent(pair):
    expected = 0.25 * np.array([[1.0, -1.0], [-1.0, 1.0]])
    for delta in (0.01, 1.0, 5.0):
        assert_allclose(absorption_inverse(pair.graph, np.full(2, delta)).matrix, expected, atol=1e-12)


def test_fundamental_from_absorption_inverse(random_graph, random_rates):
    g = random_graph(7, seed=4)
    delta = random_rates(7, seed=4)
    assert_allclose(fundamental_from_absinv(g, delta), np.linalg.inv(g.laplacian + np.diag(delta)), rtol=1e-8)


def test_series_converges_for_small_rates(random_graph):
    g = random_graph(6, seed=15)
    delta = np.full(6, 1e-3)
    exact = np.linalg.inv(g.laplacian + np.diag(delta))
    assert_allclose(series_fundamental(g, delta, 60), exact, rtol=1e-7)


def test_series_requires_small_spectral_radius(pair):
    # 兩節點時 rho(L^delta D) = delta / 2
    with pytest.raises(SpectralRadiusTooLarge):
        series_fundamental(pair.graph, np.full(2, 3.0), 10)


def test_first_order_error_on_two_nodes(pair):
    delta = 0.01
    result = absinv_first_order_error(pair.graph, np.full(2, delta))
    assert result.error == pytest.approx(delta / (2 * (2 + delta)), rel=1e-6)
    assert result.epsilon == pytest.approx(delta / 2)
    assert result.decade_ratio == pytest.approx(0.1 * (2 + delta) / (2 + delta / 10), rel=1e-6)


def test_z1_from_z0(random_graph, random_rates):
    g = random_graph(6, seed=31)
    delta = random_rates(6, seed=31)
    assert_allclose(z1_from_z0(g, delta), z1_direct(g, delta), atol=1e-9)


def test_sherman_morrison_chain(random_graph, random_rates):
    g = random_graph(7, seed=2)
    steps = sherman_morrison_chain(g, random_rates(7, seed=2))
    assert [step.name for step in steps] == ['F0', 'F1', 'F2', 'F3']
    for step in steps:
        assert step.residual < IDENTITY_TOL


def test_scaled_laplacian_relations(random_graph, random_rates):
    g = random_graph(6, seed=17)
    delta = random_rates(6, seed=17)
    relation, factored = l1_absinv_relation(g, delta)
    assert relation.residual < IDENTITY_TOL
    assert factored.residual < IDENTITY_TOL
    assert dprime_absinv_relation(g, delta).residual < IDENTITY_TOL
    assert group_inverse_relation(g, delta).residual < IDENTITY_TOL


def test_identity_check_residual_is_relative():
    check = IdentityCheck('scaled', np.full((2, 2), 100.0 + 1e-6), np.full((2, 2), 100.0))
    assert check.residual == pytest.approx(1e-8, rel=1e-3)


def test_check_identities_on_random_graphs(random_graph, random_rates):
    for seed in range(4):
        n = 3 + seed
        residuals = check_identities(random_graph(n, seed=seed), random_rates(n, seed=seed))
        assert set(residuals) == {'fundamental_z1', 'group_inverse', 'fundamental_absinv', 'absinv_scaled_laplacian',
                                  'fundamental_factored', 'absinv_null_space', 'absinv_range',
                                  'absinv_shifted_rates', 'sherman_morrison'}
        assert max(residuals.values()) < IDENTITY_TOL


def test_identity_suite_table(random_graph, random_rates):
    graphs = [random_graph(n, seed=n) for n in (3, 4, 5)]
    deltas = [random_rates(g.n, seed=g.n) for g in graphs]
    frame = identity_suite(graphs, deltas, max_workers=2)
    assert list(frame.columns[:2]) == ['trial', 'n']
    assert frame['n'].tolist() == [3, 4, 5]
    assert frame.drop(columns=['trial', 'n']).to_numpy().max() < IDENTITY_TOL
    with pytest.raises(ValueError, match="rate vectors"):
        identity_suite(graphs, deltas[:2])


@pytest.mark.slow
def test_identity_suite_on_a_hundred_random_graphs():
    graphs, deltas = [], []
    for trial in range(100):
        rng = np.random.default_rng((17, trial))
        n = int(rng.integers(3, 11))
        graphs.append(random_strongly_connected(n, rng))
        deltas.append(10 ** rng.uniform(-3, 1, n))

    frame = identity_suite(graphs, deltas)
    assert len(frame) == 100
    residuals = frame.drop(columns=['trial', 'n'])
    worst = residuals.max()
    assert (worst < IDENTITY_TOL).all(), worst[worst >= IDENTITY_TOL].to_dict()
