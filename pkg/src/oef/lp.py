"""Dense two-phase simplex with Bland's anti-cycling rule.

Small problems only (tens of variables); this backs the per-response LPs of
the Stackelberg solver. Infeasibility and unboundedness are reported through
``LPResult.status``, never raised.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-11
_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[np.ndarray] = None
    value: Optional[float] = None


def _pivot(tab, basis, r, c):
    tab[r] /= tab[r, c]
    col = tab[:, c].copy()
    col[r] = 0.0
    tab -= np.outer(col, tab[r])
    basis[r] = c


def _run(tab, basis, n_cols):
    """Maximize with the objective (reduced-cost) row stored last. Returns False if unbounded."""
    m = tab.shape[0] - 1
    while True:
        z = tab[-1, :n_cols]
        entering = next((j for j in range(n_cols) if z[j] < -_PIVOT_TOL), None)
        if entering is None:
            return True
        col = tab[:m, entering]
        best, leave = math.inf, None
        for i in range(m):
            if col[i] > _PIVOT_TOL:
                ratio = tab[i, -1] / col[i]
                if ratio < best - 1e-15 or (abs(ratio - best) <= 1e-15 and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        _pivot(tab, basis, leave, entering)


def _standardize(objective, constraints, bounds):
    """Rewrite in terms of non-negative variables ``y`` with ``x = shift + S y``."""
    n = len(objective)
    if bounds is None:
        bounds = [(0.0, math.inf)] * n
    cols = []  # per x: list of (y index, sign)
    shift = np.zeros(n)
    extra = []  # upper-bound rows (y index, bound)
    ny = 0
    for j, (lo, hi) in enumerate(bounds):
        lo = -math.inf if lo is None else float(lo)
        hi = math.inf if hi is None else float(hi)
        if lo > hi:
            return None
        if math.isfinite(lo):
            shift[j] = lo
            cols.append([(ny, 1.0)])
            if math.isfinite(hi):
                extra.append((ny, hi - lo))
            ny += 1
        elif math.isfinite(hi):
            shift[j] = hi
            cols.append([(ny, -1.0)])
            ny += 1
        else:
            cols.append([(ny, 1.0), (ny + 1, -1.0)])
            ny += 2
    S = np.zeros((n, ny))
    for j, entries in enumerate(cols):
        for k, sgn in entries:
            S[j, k] = sgn

    rows, rels, rhs = [], [], []
    for coeffs, rel, b in constraints:
        a = np.asarray(coeffs, dtype=float)
        rows.append(a @ S)
        rels.append(rel)
        rhs.append(float(b) - float(a @ shift))
    for k, ub in extra:
        a = np.zeros(ny)
        a[k] = 1.0
        rows.append(a)
        rels.append("<=")
        rhs.append(ub)
    c = np.asarray(objective, dtype=float) @ S
    return S, shift, np.array(rows).reshape(len(rows), ny), rels, np.array(rhs), c


def solve_lp(objective, constraints, bounds=None):
    """Maximize ``objective @ x`` subject to linear constraints and variable bounds.

    Parameters
    ----------
    objective : sequence of float
    constraints : iterable of ``(coeffs, relation, bound)``
        ``relation`` is one of ``"<="``, ``"="``, ``">="``.
    bounds : sequence of ``(lo, hi)``, optional
        ``None``/``inf`` for open ends; defaults to ``x >= 0``.
    """
    constraints = list(constraints)
    std = _standardize(objective, constraints, bounds)
    if std is None:
        return LPResult(INFEASIBLE)
    S, shift, A, rels, b, c = std
    m, ny = A.shape

    A = A.copy()
    b = b.copy()
    rels = list(rels)
    for i in range(m):
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]

    n_slack = sum(1 for r in rels if r in ("<=", ">="))
    n_art = sum(1 for r in rels if r in (">=", "="))
    n_cols = ny + n_slack + n_art
    tab = np.zeros((m + 1, n_cols + 1))
    tab[:m, :ny] = A
    tab[:m, -1] = b
    basis = [-1] * m
    s_idx, a_idx = ny, ny + n_slack
    art_cols = []
    for i, rel in enumerate(rels):
        if rel == "<=":
            tab[i, s_idx] = 1.0
            basis[i] = s_idx
            s_idx += 1
        else:
            if rel == ">=":
                tab[i, s_idx] = -1.0
                s_idx += 1
            elif rel != "=":
                raise ValueError(f"unknown relation {rel!r}")
            tab[i, a_idx] = 1.0
            basis[i] = a_idx
            art_cols.append(a_idx)
            a_idx += 1

    if art_cols:
        tab[-1, art_cols] = 1.0
        for i in range(m):
            if basis[i] in art_cols:
                tab[-1] -= tab[i]
        _run(tab, basis, n_cols)
        if tab[-1, -1] < -_FEAS_TOL:
            return LPResult(INFEASIBLE)
        # drive remaining artificials out of the basis, dropping redundant rows
        keep = []
        for i in range(m):
            if basis[i] in art_cols:
                nz = [j for j in range(ny + n_slack) if abs(tab[i, j]) > _PIVOT_TOL]
                if nz:
                    _pivot(tab, basis, i, nz[0])
                    keep.append(i)
            else:
                keep.append(i)
        tab = np.vstack([tab[keep], tab[-1:]])
        basis = [basis[i] for i in keep]
        tab = np.delete(tab, art_cols, axis=1)
        n_cols = ny + n_slack

    m = tab.shape[0] - 1
    tab[-1] = 0.0
    tab[-1, :ny] = -c
    for i in range(m):
        if basis[i] < ny and c[basis[i]] != 0.0:
            tab[-1] += c[basis[i]] * tab[i]
    if not _run(tab, basis, n_cols):
        return LPResult(UNBOUNDED)

    y = np.zeros(n_cols)
    for i, j in enumerate(basis):
        y[j] = tab[i, -1]
    x = shift + S @ y[:ny]
    return LPResult(OPTIMAL, x, float(np.dot(objective, x)))
