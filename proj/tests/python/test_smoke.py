import json
import math
from fractions import Fraction

import pytest

import latpois


def test_ball_volume():
    assert latpois.ball_volume_coeff(2) == pytest.approx(math.pi, rel=1e-14)
    assert latpois.ball_volume_coeff(24) == pytest.approx(math.pi**12 / math.factorial(12), rel=1e-13)
    assert latpois.length_to_volume(2, 1, 1) == pytest.approx(math.pi, rel=1e-14)


def test_exact_moments():
    assert latpois.pair_moment([1, 2]) == 1
    assert latpois.pair_moment([3]) == Fraction(3, 2)
    assert latpois.partition_form([1, 1, 1]) == Fraction(11, 8)
    assert latpois.matrix_form([1, 1, 1]) == 11
    assert latpois.touchard_poisson_moment(3, Fraction(1, 2)) == Fraction(11, 8)
    assert [latpois.bell_number(k) for k in range(1, 8)] == [1, 2, 5, 15, 52, 203, 877]
    with pytest.raises(ValueError):
        latpois.pair_moment([2, 1])


def test_verify():
    report = latpois.verify(4)
    assert report["ok"]
    assert [r["bell"] for r in report["per_k"]] == ["1", "2", "5", "15"]


def test_integer_lattice_census():
    z2 = [[1, 0], [0, 1]]
    census = latpois.enumerate_up_to_volume(z2, 2.5 * math.pi)
    assert census["raw_norm_sq"] == [1, 1, 2, 2]
    assert census["representatives"] == [[0, 1], [1, 0], [1, -1], [1, 1]]
    z3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert len(latpois.first_volumes(z3, 13)["volumes"]) == 13
    with pytest.raises(latpois.BudgetExceeded):
        latpois.enumerate_up_to_volume(z3, 1000.0, node_budget=5)


def test_goldstein_mayer_lattice():
    p = latpois.default_prime(3)
    rows = latpois.sample_gm_lattice(5, seed=3, trial=2)
    assert rows[0][0] == 1
    assert all(0 <= a < p for a in rows[0][1:])
    assert all(rows[i][i] == p for i in range(1, 5))
    assert rows == latpois.sample_gm_lattice(5, seed=3, trial=2)
    reduced = latpois.lll_reduce(rows)
    assert len(reduced) == 5
    census = latpois.first_volumes(rows, 3)
    assert census["volumes"] == sorted(census["volumes"])


def test_dual_basis():
    d = latpois.dual_basis([[1, 2], [0, 5]])
    for r, row in enumerate([[1, 2], [0, 5]]):
        for c, dual in enumerate(d):
            assert sum(a * b for a, b in zip(row, dual)) == (5 if r == c else 0)


def test_poisson_and_statistics():
    pts = latpois.sample_poisson(50.0, 7, 0)
    assert pts == sorted(pts)
    assert 0 < pts[0] and pts[-1] <= 50.0
    d = latpois.ks_statistic_exp2([2 * math.log(2)])
    assert d == pytest.approx(0.5)
    values = [2.0 * j for j in range(1, 301)]
    assert latpois.level_correlation(values, 600.0, 2, [(-2.0, 2.0)], 300.0) == pytest.approx(2 * 148 / 300)


def test_simulate():
    run = latpois.simulate("poisson", 200, [1.0, 2.0], seed=4)
    assert run["nTrials"] == 200
    again = latpois.simulate("poisson", 200, [1.0, 2.0], seed=4)
    assert json.dumps(run, sort_keys=True) == json.dumps(again, sort_keys=True)
    lat = latpois.simulate("lattice", 20, [1.0], seed=1, dim=6, workers=2)
    assert lat["metadata"]["config"]["dim"] == 6


def test_cli():
    code, out, err = latpois.run_cli(["exact-moments", "--volumes", "1,2", "--form", "pair"])
    assert code == 0
    assert json.loads(out)["pairMoment"]["exact"] == "1"
    code, out, err = latpois.run_cli(["exact-moments", "--volumes", "2,1"])
    assert code == 2 and out == "" and err
