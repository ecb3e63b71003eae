"""Independent reference computations used only by the tests."""

import itertools
import math
from fractions import Fraction

import numpy as np


def adaptive_simpson(f, a, b, tol=1e-10, max_depth=60):
    """Integrate a scalar- or vector-valued ``f`` over ``[a, b]`` to absolute ``tol``."""

    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth <= 0 or np.max(np.abs(delta)) <= 15.0 * tol:
            return left + right + delta / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    return recurse(a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, max_depth)


def piecewise_simpson(f, a, b, pieces=8, tol=1e-10):
    """Split ``[a, b]`` first so fast initial transients are not under-sampled."""
    edges = np.linspace(a, b, pieces + 1)
    return sum(adaptive_simpson(f, lo, hi, tol / pieces) for lo, hi in zip(edges[:-1], edges[1:]))


def literal_transient_prob(lam, mu, M, x, t):
    """Transient probability written with raw powers and factorials (small x only)."""
    K = lam + mu
    if x == 0:
        return mu / K + lam / K * math.exp(-K * t)
    if x < M:
        lead = -((lam / K) ** x) * mu / K
        mid = -sum(lam ** x * t ** y * mu / (math.factorial(y) * K ** (x - y + 1)) for y in range(1, x))
        top = lam ** (x + 1) * t ** x / (math.factorial(x) * K)
        return (lead + mid + top) * math.exp(-K * t) + (lam / K) ** x * mu / K
    return 1.0 - sum(literal_transient_prob(lam, mu, M, y, t) for y in range(M))


def poisson_cdf_literal(n, z):
    return sum(math.exp(-z) * z ** k / math.factorial(k) for k in range(n + 1))


def literal_integral(lam, mu, M, x, T):
    """Occupation time of state ``x`` in the expanded incomplete-gamma form."""
    K = lam + mu
    if x == 0:
        return mu * T / K + lam * (1.0 - math.exp(-K * T)) / K ** 2
    if x < M:
        r = lam ** x * mu / K ** (x + 1)
        val = r * T + lam ** x * mu / K ** (x + 2) * (math.exp(-K * T) - x)
        val += lam ** x * mu / K ** (x + 2) * sum(poisson_cdf_literal(y, K * T) for y in range(1, x))
        val += lam ** (x + 1) / K ** (x + 2) * (1.0 - poisson_cdf_literal(x, K * T))
        return val
    return T - sum(literal_integral(lam, mu, M, y, T) for y in range(M))


def _solve_exact(rows, rhs):
    n = len(rows)
    A = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def rational_lp_max(objective, constraints):
    """Exact optimum over ``x >= 0`` by vertex enumeration; the region must be bounded.

    Returns ``None`` when infeasible, else ``(value, x)`` as Fractions.
    """
    n = len(objective)
    c = [Fraction(v) for v in objective]
    rows = []
    for coeffs, rel, b in constraints:
        a = [Fraction(v) for v in coeffs]
        rows.append((a, rel, Fraction(b)))
    for j in range(n):
        rows.append(([Fraction(int(k == j)) for k in range(n)], ">=", Fraction(0)))
    eqs = [i for i, r in enumerate(rows) if r[1] == "="]
    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        if not set(eqs) <= set(subset) and len(eqs) <= n:
            continue
        x = _solve_exact([rows[i][0] for i in subset], [rows[i][2] for i in subset])
        if x is None:
            continue
        ok = True
        for a, rel, b in rows:
            lhs = sum(ai * xi for ai, xi in zip(a, x))
            if (rel == "<=" and lhs > b) or (rel == ">=" and lhs < b) or (rel == "=" and lhs != b):
                ok = False
                break
        if ok:
            val = sum(ci * xi for ci, xi in zip(c, x))
            if best is None or val > best[0]:
                best = (val, x)
    return best
