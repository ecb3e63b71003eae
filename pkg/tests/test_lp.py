import random

import numpy as np
import pytest

from oracles import rational_lp_max
from oef.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_lp


def test_single_variable():
    res = solve_lp([1.0], [([1.0], "<=", 1.0)])
    assert res.status == OPTIMAL
    assert res.value == pytest.approx(1.0) and res.x[0] == pytest.approx(1.0)


def test_degenerate_optimum_face():
    res = solve_lp([1.0, 1.0], [([1.0, 1.0], "<=", 1.0)])
    assert res.status == OPTIMAL and res.value == pytest.approx(1.0)
    assert res.x.sum() == pytest.approx(1.0) and (res.x >= -1e-12).all()


def test_infeasible():
    res = solve_lp([1.0], [([1.0], "<=", 0.0), ([1.0], ">=", 1.0)])
    assert res.status == INFEASIBLE


def test_unbounded():
    assert solve_lp([1.0, 0.0], [([0.0, 1.0], "<=", 3.0)]).status == UNBOUNDED


def test_equality_and_free_variable():
    # max -x - y  s.t. x - y = -2, y <= 5, x free
    res = solve_lp([-1.0, -1.0], [([1.0, -1.0], "=", -2.0)], bounds=[(None, None), (0.0, 5.0)])
    assert res.status == OPTIMAL
    np.testing.assert_allclose(res.x, [-2.0, 0.0], atol=1e-12)


def test_redundant_equalities():
    res = solve_lp([1.0, 2.0], [([1.0, 1.0], "=", 1.0), ([2.0, 2.0], "=", 2.0)])
    assert res.status == OPTIMAL and res.value == pytest.approx(2.0)


def test_simplex_distribution_constraint():
    # the shape used by the leader LP: phi on the simplex, one linear objective
    res = solve_lp([0.2, 0.7, 0.1], [([1, 1, 1], "=", 1.0)], bounds=[(0, 1)] * 3)
    assert res.value == pytest.approx(0.7)
    np.testing.assert_allclose(res.x, [0, 1, 0], atol=1e-12)


def test_cycling_prone_instance():
    # a classic degenerate example that cycles under the largest-coefficient rule
    c = [10.0, -57.0, -9.0, -24.0]
    A = [[0.5, -5.5, -2.5, 9.0], [0.5, -1.5, -0.5, 1.0], [1.0, 0.0, 0.0, 0.0]]
    b = [0.0, 0.0, 1.0]
    res = solve_lp(c, [(row, "<=", v) for row, v in zip(A, b)])
    assert res.status == OPTIMAL and res.value == pytest.approx(1.0)


def _random_lp(rng):
    n = rng.randint(1, 6)
    m = rng.randint(1, 4)
    cons = []
    for _ in range(m):
        coeffs = [rng.randint(-5, 5) for _ in range(n)]
        rel = rng.choice(["<=", "<=", ">=", "="])
        cons.append((coeffs, rel, rng.randint(-4, 8)))
    cons.append(([1] * n, "<=", rng.randint(1, 10)))  # keeps the region bounded
    return [rng.randint(-6, 6) for _ in range(n)], cons


@pytest.mark.parametrize("seed", range(50))
def test_matches_rational_vertex_enumeration(seed):
    rng = random.Random(1000 + seed)
    c, cons = _random_lp(rng)
    ref = rational_lp_max(c, cons)
    res = solve_lp(c, cons)
    if ref is None:
        assert res.status == INFEASIBLE
        return
    assert res.status == OPTIMAL
    assert round(res.value, 9) == round(float(ref[0]), 9)
    for coeffs, rel, b in cons:
        lhs = float(np.dot(coeffs, res.x))
        if rel == "<=":
            assert lhs <= b + 1e-9
        elif rel == ">=":
            assert lhs >= b - 1e-9
        else:
            assert abs(lhs - b) <= 1e-9
    assert (res.x >= -1e-9).all()
