import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.config.errors import GraphFormatError
from src.graph import (
    WeightedDigraph,
    AbsorptionConfig,
    out_degrees,
    scaled_rate_vector,
    absorption_scaled_graph,
    scaled_laplacian,
    absorption_leak,
    is_strongly_connected,
)
from src.graph.examples import four_clique, grid_quadrants
from src.graph.io import (
    read_edge_list,
    read_node_attributes,
    read_node_values,
    write_edge_list,
    write_node_attributes,
    read_matrix,
    write_matrix,
)


def test_from_edges_uses_column_convention():
    g = WeightedDigraph.from_edges([(0, 1, 2.0), (1, 2, 0.5)], n=3)
    assert g.adjacency[1, 0] == 2.0
    assert g.adjacency[2, 1] == 0.5
    assert_allclose(g.out_degrees, [2.0, 0.5, 0.0])


def test_invalid_adjacency_rejected():
    with pytest.raises(ValueError, match="Self-edges"):
        WeightedDigraph(np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="negative"):
        WeightedDigraph(np.array([[0.0, -1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="square"):
        WeightedDigraph(np.zeros((2, 3)))


def test_adjacency_is_read_only(three):
    with pytest.raises(ValueError):
        three.graph.adjacency[0, 1] = 5.0


def test_laplacian_columns_sum_to_zero(random_graph):
    g = random_graph(7, seed=3)
    assert_allclose(np.ones(7) @ g.laplacian, 0.0, atol=1e-12)


def test_four_clique_degrees_and_scaled_rates():
    example = four_clique(h=1.5)
    omega = out_degrees(example.graph)
    bridge_ends = [0, 3, 4, 7, 8, 11, 12, 15]
    assert_allclose(omega[bridge_ends], 4.0)
    assert_allclose(np.delete(omega, bridge_ends), 3.0)
    assert example.graph.adjacency.sum() == 2 * (4 * 6 + 4)

    d_s = scaled_rate_vector(example.graph, example.absorption).d_s
    # 橋端點: 1.5 * 4 + delta；其餘: 1.5 * 3 + delta
    assert_allclose(d_s[:4], [13.0, 11.5, 11.5, 13.0])
    assert_allclose(d_s[4:8], [7.0, 5.5, 5.5, 7.0])
    assert_allclose(d_s[8:12], d_s[:4])
    assert_allclose(d_s[12:], d_s[4:8])


def test_absorption_scaled_graph_divides_columns(clique):
    scaled = absorption_scaled_graph(clique.graph, clique.absorption)
    assert_allclose(scaled.adjacency, clique.graph.adjacency / clique.absorption.delta[np.newaxis, :])
    assert_allclose(scaled.laplacian, scaled_laplacian(clique.graph, clique.absorption))
    assert_allclose(np.ones(16) @ scaled.laplacian, 0.0, atol=1e-12)


def test_absorption_leak_is_column_sum():
    example = four_clique(h=1.5)
    g, cfg = example.graph, example.absorption
    d_s = scaled_rate_vector(g, cfg).d_s
    columns = np.ones(g.n) @ (scaled_laplacian(g, cfg) + np.diag(cfg.delta / d_s))
    assert_allclose(absorption_leak(g, cfg), columns)
    assert_allclose(absorption_leak(g, cfg.with_h(0.0)), 1.0)


def test_absorption_config_validation():
    with pytest.raises(ValueError, match="strictly positive"):
        AbsorptionConfig(np.array([1.0, 0.0]))
    with pytest.raises(ValueError, match="non-negative"):
        AbsorptionConfig(np.array([1.0, 1.0]), np.array([0.0, -1.0]))
    with pytest.raises(ValueError, match="same length"):
        AbsorptionConfig(np.array([1.0, 1.0]), np.array([0.0, 1.0, 2.0]))

    cfg = AbsorptionConfig(np.array([1.0, 2.0]), 0.5)
    assert_allclose(cfg.h, [0.5, 0.5])
    assert_allclose(cfg.scaled(2.0).delta, [2.0, 4.0])
    assert_allclose(cfg.with_h(0.0).H, np.zeros((2, 2)))


def test_dimension_mismatch_rejected(clique):
    with pytest.raises(ValueError, match="16 nodes"):
        scaled_rate_vector(clique.graph, AbsorptionConfig(np.ones(3)))


def test_strong_connectivity(three, clique, grid_example):
    assert not is_strongly_connected(three.graph)
    assert is_strongly_connected(clique.graph)
    assert is_strongly_connected(grid_example.graph)


def test_grid_quadrants_and_rates(grid_example):
    quadrant = grid_quadrants()
    assert np.bincount(quadrant).tolist() == [9, 9, 9, 9]
    assert quadrant[0] == 0 and quadrant[5] == 1 and quadrant[30] == 2 and quadrant[35] == 3
    assert_allclose(grid_example.absorption.delta, np.array([0.2, 0.7, 1.5, 1.7])[quadrant])
    # 角落、邊與內部節點
    assert grid_example.graph.out_degrees[0] == 2
    assert grid_example.graph.out_degrees[1] == 3
    assert grid_example.graph.out_degrees[7] == 4


def test_edge_list_written_and_read_back(tmp_path, random_graph):
    g = random_graph(6, seed=11)
    path = tmp_path / 'graph.edges'
    write_edge_list(g, path)
    assert_allclose(read_edge_list(path).adjacency, g.adjacency)


def test_edge_list_format_errors(tmp_path):
    path = tmp_path / 'bad.edges'
    path.write_text("0 0 1.0\n")
    with pytest.raises(GraphFormatError, match="self-edges"):
        read_edge_list(path)

    path.write_text("0 1\n")
    with pytest.raises(GraphFormatError, match="columns"):
        read_edge_list(path)

    path.write_text("# only a comment\n")
    with pytest.raises(GraphFormatError):
        read_edge_list(path)

    with pytest.raises(FileNotFoundError):
        read_edge_list(tmp_path / 'missing.edges')


def test_node_attributes(tmp_path):
    path = tmp_path / 'nodes.txt'
    path.write_text("# node delta h\n1 0.5 2.0\n0 0.25 1.0\n")
    cfg = read_node_attributes(path)
    assert_allclose(cfg.delta, [0.25, 0.5])
    assert_allclose(cfg.h, [1.0, 2.0])
    assert_allclose(read_node_attributes(path, h=0.0).h, [0.0, 0.0])

    out = tmp_path / 'written.txt'
    write_node_attributes(cfg, out)
    assert_allclose(read_node_attributes(out).delta, cfg.delta)


def test_node_attributes_errors(tmp_path):
    path = tmp_path / 'nodes.txt'
    path.write_text("0 0.5\n2 0.5\n")
    with pytest.raises(GraphFormatError, match="one row for each node"):
        read_node_attributes(path, n=3)

    path.write_text("0 0.5\n1 -1.0\n")
    with pytest.raises(GraphFormatError, match="strictly positive"):
        read_node_attributes(path)


def test_node_values(tmp_path):
    path = tmp_path / 'h.txt'
    path.write_text("0 1.5\n1 0.0\n2 3.0\n")
    assert_allclose(read_node_values(path, n=3), [1.5, 0.0, 3.0])


def test_matrix_csv(tmp_path):
    matrix = np.array([[0.1, 1 / 3], [2.0, np.pi]])
    write_matrix(matrix, tmp_path / 'm.csv')
    assert_allclose(read_matrix(tmp_path / 'm.csv'), matrix, rtol=1e-15)
