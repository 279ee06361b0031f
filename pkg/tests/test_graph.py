import logging

import numpy as np
import pytest

from chancepareto.graph import (
    EdgeListFormatError,
    Graph,
    generate_synthetic,
    load_edge_list,
    save_edge_list,
)


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_one_based(tmp_path):
    g = load_edge_list(write(tmp_path, "% comment\n1 2\n2 3\n"))
    assert g.node_count == 3 and g.edge_count == 2
    assert g.neighbors(1).tolist() == [0, 2]


def test_load_zero_based(tmp_path):
    g = load_edge_list(write(tmp_path, "0 1\n1 2\n"), one_based=False)
    assert g.node_count == 3


def test_duplicates_and_self_loops_dropped(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        g = load_edge_list(write(tmp_path, "1 2\n2 1\n3 3\n1 3\n"))
    assert g.edge_count == 2
    assert g.dropped_duplicates == 1 and g.dropped_self_loops == 1
    assert caplog.records


def test_declared_node_count_keeps_isolated(tmp_path):
    g = load_edge_list(write(tmp_path, "# n=5\n1 2\n"))
    assert g.node_count == 5
    assert g.degrees.tolist() == [1, 1, 0, 0, 0]


def test_matrix_market_header(tmp_path):
    text = "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 2\n2 1\n4 3\n"
    g = load_edge_list(write(tmp_path, text))
    assert g.node_count == 4 and g.edge_count == 2


def test_extra_columns_ignored(tmp_path):
    g = load_edge_list(write(tmp_path, "1 2 0.5\n2 3 7\n"))
    assert g.edge_count == 2


@pytest.mark.parametrize("text,line", [("1 2\nfoo\n", 2), ("1\n", 1), ("0 1\n", 1)])
def test_malformed_names_line(tmp_path, text, line):
    with pytest.raises(EdgeListFormatError) as err:
        load_edge_list(write(tmp_path, text))
    assert err.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_edge_list(tmp_path / "nope.txt")


def test_round_trip(tmp_path):
    g = generate_synthetic("random-regular", 30, np.random.default_rng(0), d=3)
    path = tmp_path / "rt.txt"
    save_edge_list(g, path)
    assert load_edge_list(path) == g


def test_random_regular_degrees():
    g = generate_synthetic("random-regular", 200, np.random.default_rng(1), d=4)
    assert g.node_count == 200 and np.all(g.degrees == 4)
    assert g.edge_count == 400


def test_erdos_renyi_seeded():
    a = generate_synthetic("erdos-renyi", 50, np.random.default_rng(2), p=0.1)
    b = generate_synthetic("erdos-renyi", 50, np.random.default_rng(2), p=0.1)
    assert a == b


def test_bad_generator_params():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        generate_synthetic("random-regular", 5, rng, d=3)  # n*d odd
    with pytest.raises(ValueError):
        generate_synthetic("erdos-renyi", 5, rng, p=1.5)
    with pytest.raises(ValueError):
        generate_synthetic("smallworld", 5, rng)


def test_summary():
    g = Graph.from_edges(3, [(0, 1)])
    s = g.summary()
    assert s == {"n": 3, "m": 1, "degree_histogram": {0: 1, 1: 2}}
