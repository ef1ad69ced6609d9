import json
import math
import pathlib

import pytest

import nestnorm

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def two_clusters():
    return nestnorm.Metric.planar(
        [(0, 0), (1, 0), (0, 1), (10, 10), (11, 10)], [(0.3, 0.3), (10.5, 10)]
    )


def test_norms():
    assert nestnorm.top_ell([3, 1, 2], 2) == 5
    assert nestnorm.ordered_norm([2, 1], [1, 3, 5]) == 13
    assert nestnorm.proxy_topl(2, [3, 1, 2], 2) == pytest.approx(5)
    assert nestnorm.proxy_ordered([1, 3], [2, 1], [3, 1]) == pytest.approx(7)
    assert nestnorm.sparsify_weights([1, 0.5, 0.25, 0.125], 1.0) == [1, 0.5, 0.25, 0]
    with pytest.raises(ValueError):
        nestnorm.top_ell([1], 2)


def test_metric():
    m = two_clusters()
    assert (m.num_points, m.num_facilities) == (5, 2)
    assert m.dist(1, 0) == pytest.approx(math.hypot(0.7, 0.3))
    assert m.validate() is None
    bad = nestnorm.Metric(1, [[0, 1], [2, 0]])
    assert bad.validate().startswith("asymmetric")


def test_knapsack():
    u, value, frac = nestnorm.solve_knapsack_lp([(6, 2), (2, 2)], 3)
    assert u == pytest.approx([1, 0.5])
    assert value == pytest.approx(7)
    assert frac == 1


def test_ball_kmedian_against_oracle():
    m = two_clusters()
    got = nestnorm.solve_ball_kmedian(m, 2, 1.0, 0.5)
    radius, opt = nestnorm.exact_ball_kmedian(m, 2, 1.0)
    assert len(got["radius"]) <= 2
    assert got["cost"] == pytest.approx(nestnorm.ball_kmedian_cost(m, 2, 1.0, got["radius"]))
    assert opt <= got["cost"] <= 17.25 * opt + 1e-9
    assert nestnorm.ball_kmedian_cost(m, 2, 1.0, radius) == pytest.approx(opt)


def test_covers():
    m = two_clusters()
    r = nestnorm.solve_linf_ord(m, 2, [1.0, 1.0], 1.0)
    _, opt = nestnorm.exact_cover_ord(m, 2, [1.0, 1.0])
    assert r["value"] <= 19 * opt + 1e-9
    ms = nestnorm.solve_msrdc(m, 2, [1.0], [0.0])
    assert ms["scaled_cost"] <= ms["cost"] + 1e-12


def test_solve_and_nested_cost():
    m = two_clusters()
    res = nestnorm.solve(m, 2, "topl:2", "l1")
    assert "ball k-median" in res["meta"]["route"]
    assert res["cost"] == pytest.approx(
        nestnorm.nested_cost(m, 2, "topl:2", "l1", res["X"], res["assignment"])
    )
    with pytest.raises(ValueError):
        nestnorm.solve(m, 2, "l7")


def test_fixture_and_plot():
    inst = nestnorm.load_instance(FIXTURES / "small8.json")
    assert (inst["k"], inst["inner"], inst["outer"]) == (2, "topl:8", "l1")
    res = nestnorm.solve(inst["metric"], inst["k"], inst["inner"], inst["outer"])
    radius = {int(x): r for x, r in res["r"].items()}
    svg = nestnorm.render_svg(inst["metric"], res["X"], res["assignment"], radius, "small")
    assert svg.count('class="point"') == 8
    assert svg.count('class="ball"') == len(radius)
    with pytest.raises(nestnorm.InputError):
        nestnorm.load_instance(FIXTURES / "missing.json")


def test_generate_and_recovery():
    m, labels = nestnorm.generate(4, [(0, 0, 1, 5), (9, 9, 1, 5)])
    again, _ = nestnorm.generate(4, [(0, 0, 1, 5), (9, 9, 1, 5)])
    assert m.points == again.points
    assert labels == [0] * 5 + [1] * 5
    assert nestnorm.recovery_score([7] * 5 + [3] * 5, labels) == 1.0


def test_result_is_json_serializable():
    res = nestnorm.solve(two_clusters(), 1, "l1", "linf")
    assert res["meta"]["route"].startswith("factor O(k)")
    json.dumps(res)
