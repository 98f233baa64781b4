import os

import pytest

import aqicert

DATA = os.environ.get("AQICERT_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_generated_graph_is_cubic_with_girth():
    edges = aqicert.generate_graph(3, 9, 200, 77)
    assert len(edges) == 300
    assert aqicert.girth(200, edges) >= 9


def test_girth_of_forest_is_none():
    assert aqicert.girth(3, [(0, 1), (1, 2)]) is None


def test_moore_bound():
    assert aqicert.moore_bound(3, 16) == 510


def test_localized_gap_of_petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    value = aqicert.localized_min_rayleigh(10, outer + inner + spokes, "1", "0")
    assert value == pytest.approx(3.0)


def test_mr1_pipeline():
    config = {
        "seed": 3,
        "family": {"path": os.path.join(DATA, "small_family.txt")},
        "S": [1],
    }
    code, bundle, files = aqicert.run(config, "mr1")
    assert code == 0, bundle
    assert {c["name"] for c in bundle["certificates"]} >= {"compressed_laplacian", "ghost_profile"}
    assert "ghost.csv" in files


def test_errors_map_to_exit_two():
    code, bundle, _ = aqicert.run({"family": {"path": "/nonexistent"}}, "mr2")
    assert code == 2
    assert bundle["error"]["kind"] == "io"
