"""Instructor-leads, students-follow Stackelberg game over finite rate grids.

The leader's problem with pure follower responses is a MILP. It is solved
exactly by enumerating the joint follower responses and solving one LP over
the leader's mixed strategy for each; a response profile only survives if
every type's chosen column is a best response to the leader's mix, and ties
go to the leader.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError
from .lp import OPTIMAL, solve_lp
from .rewards import (
    ChainSpec,
    steady_reward_instructor,
    steady_reward_student,
    transient_integrals_closed,
    transient_reward_instructor,
    transient_reward_student,
)

TIE_TOL = 1e-9
STEADY = "steady"
TRANSIENT = "transient"


@dataclass(frozen=True)
class StrategyGrid:
    instructor_rates: tuple
    student_rates: tuple

    def __post_init__(self):
        ins = tuple(float(v) for v in self.instructor_rates)
        st = tuple(float(v) for v in self.student_rates)
        if not ins or not st:
            raise DomainError("strategy grids must be non-empty")
        for name, g in (("instructor", ins), ("student", st)):
            if list(g) != sorted(set(g)):
                raise DomainError(f"{name} rates must be sorted and distinct")
            if not np.all(np.isfinite(g)):
                raise DomainError(f"{name} rates must be finite")
        if ins[0] <= 0:
            raise DomainError("instructor rates must be positive")
        if st[0] < 0:
            raise DomainError("student rates must be non-negative")
        object.__setattr__(self, "instructor_rates", ins)
        object.__setattr__(self, "student_rates", st)

    @property
    def v(self):
        return len(self.instructor_rates)

    @property
    def w(self):
        return len(self.student_rates)


@dataclass(frozen=True)
class PayoffMatrices:
    """Per-type follower payoffs ``D``, bias-weighted leader payoffs ``Bm``, type shares ``p``."""

    D: tuple
    Bm: tuple
    p: tuple
    grid: StrategyGrid = None

    def __post_init__(self):
        D = tuple(np.asarray(d, dtype=float) for d in self.D)
        Bm = tuple(np.asarray(b, dtype=float) for b in self.Bm)
        p = tuple(float(v) for v in self.p)
        if not (len(D) == len(Bm) == len(p)) or not D:
            raise DomainError("need one D, Bm and p entry per type")
        shape = D[0].shape
        if len(shape) != 2 or any(d.shape != shape for d in D + Bm):
            raise DomainError("all payoff matrices must share one (v, w) shape")
        if any(not np.all(np.isfinite(d)) for d in D + Bm):
            raise NumericError("payoff matrices contain non-finite entries")
        if abs(sum(p) - 1.0) > 1e-9 or min(p) < 0:
            raise DomainError("type shares must form a distribution")
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "Bm", Bm)
        object.__setattr__(self, "p", p)

    @property
    def shape(self):
        return self.D[0].shape

    @property
    def n_types(self):
        return len(self.D)


@dataclass(frozen=True)
class StackelbergSolution:
    phi: np.ndarray
    psi: tuple
    leader_value: float
    follower_values: tuple
    method: str

    def instructor_rate(self, grid):
        """Rate with the largest leader weight (first on ties)."""
        return grid.instructor_rates[int(np.argmax(self.phi))]

    def student_rates(self, grid):
        return tuple(grid.student_rates[b] for b in self.psi)

    def to_dict(self, grid=None):
        out = {
            "method": self.method,
            "phi": [float(v) for v in self.phi],
            "psi": [int(b) for b in self.psi],
            "leader_value": float(self.leader_value),
            "follower_values": [float(v) for v in self.follower_values],
        }
        if grid is not None:
            out["instructor_rates"] = list(grid.instructor_rates)
            out["student_rates"] = [grid.student_rates[b] for b in self.psi]
        return out


@lru_cache(maxsize=4096)
def _occupation(lam, mu, M, T):
    occ = transient_integrals_closed(ChainSpec(lam, mu, M, T))
    occ.setflags(write=False)
    return occ


def build_payoff_matrices(grid, types, instr, M, T, mode=TRANSIENT):
    """Evaluate every (instructor rate, student rate) pair for every type.

    ``D[l][a, b]`` is the type-``l`` student's reward and ``Bm[l][a, b]`` the
    instructor's reward from one such student times its per-student bias,
    both at ``mu = instructor_rates[a]`` and ``lam = student_rates[b]``.
    """
    if not types:
        raise DomainError("need at least one student type")
    if mode not in (STEADY, TRANSIENT):
        raise DomainError(f"unknown mode {mode!r}")
    v, w = grid.v, grid.w
    D = [np.zeros((v, w)) for _ in types]
    Bm = [np.zeros((v, w)) for _ in types]
    for a, mu in enumerate(grid.instructor_rates):
        for b, lam in enumerate(grid.student_rates):
            spec = ChainSpec(lam, mu, M, T)
            if mode == STEADY:
                ins = steady_reward_instructor(spec, instr)
                for l, st in enumerate(types):
                    D[l][a, b] = steady_reward_student(spec, st, instr)
            else:
                occ = _occupation(lam, mu, M, float(T))
                ins = transient_reward_instructor(spec, instr, occ)
                for l, st in enumerate(types):
                    D[l][a, b] = transient_reward_student(spec, st, instr, occ)
            for l, st in enumerate(types):
                Bm[l][a, b] = st.bias_per_student * ins
    n = sum(t.count for t in types)
    p = [t.count / n for t in types]
    return PayoffMatrices(tuple(D), tuple(Bm), tuple(p), grid)


def follower_best_response(D, phi, tol=TIE_TOL):
    """Columns maximizing ``phi @ D`` (all ties within ``tol``) and the best value."""
    vals = np.asarray(phi, dtype=float) @ np.asarray(D, dtype=float)
    best = float(vals.max())
    ties = tuple(int(b) for b in np.flatnonzero(vals >= best - tol))
    return ties, best


def _solution(pm, phi, psi, method):
    leader = sum(p * float(phi @ B[:, b]) for p, B, b in zip(pm.p, pm.Bm, psi))
    followers = tuple(float(phi @ D[:, b]) for D, b in zip(pm.D, psi))
    return StackelbergSolution(phi, tuple(int(b) for b in psi), float(leader), followers, method)


def _response_lp(pm, combo):
    v = pm.shape[0]
    objective = sum(p * B[:, b] for p, B, b in zip(pm.p, pm.Bm, combo))
    constraints = [(np.ones(v), "=", 1.0)]
    for D, b in zip(pm.D, combo):
        for bp in range(D.shape[1]):
            if bp != b:
                constraints.append((D[:, bp] - D[:, b], "<=", 0.0))
    return solve_lp(objective, constraints, [(0.0, 1.0)] * v)


def solve_stackelberg(pm):
    """Exact optimistic Stackelberg solution with a mixed leader and pure followers."""
    v, w = pm.shape
    # a column survives only if it is a best response to some leader mix
    viable = []
    for l in range(pm.n_types):
        single = PayoffMatrices((pm.D[l],), (pm.Bm[l],), (1.0,))
        viable.append([b for b in range(w) if _response_lp(single, (b,)).status == OPTIMAL])
    if any(not cols for cols in viable):
        raise NumericError("a follower type has no viable response")

    def bound(combo):
        # leader value can never exceed the best row of the combined payoff column
        col = sum(p * B[:, b] for p, B, b in zip(pm.p, pm.Bm, combo))
        return float(col.max())

    combos = sorted(itertools.product(*viable), key=lambda c: (-bound(c), c))
    best = None
    for combo in combos:
        if best is not None and bound(combo) <= best.leader_value + 1e-12:
            break
        res = _response_lp(pm, combo)
        if res.status != OPTIMAL:
            continue
        phi = np.clip(res.x, 0.0, None)
        phi = phi / phi.sum()
        cand = _solution(pm, phi, combo, "milp-enumeration")
        if best is None or cand.leader_value > best.leader_value + 1e-12:
            best = cand
    # a pure leader strategy always admits some feasible response profile
    assert best is not None
    return best


def solve_pure_leader(pm):
    """Best pure instructor rate, followers breaking ties in the leader's favour."""
    v, w = pm.shape
    best = None
    for a in range(v):
        phi = np.zeros(v)
        phi[a] = 1.0
        psi = []
        for D, B in zip(pm.D, pm.Bm):
            ties, _ = follower_best_response(D, phi)
            psi.append(max(ties, key=lambda b: (B[a, b], -b)))
        cand = _solution(pm, phi, psi, "pure-leader")
        if best is None or cand.leader_value > best.leader_value:
            best = cand
    return best


def solve(pm, method="milp"):
    if method == "milp":
        return solve_stackelberg(pm)
    if method == "pure":
        return solve_pure_leader(pm)
    raise DomainError(f"unknown method {method!r}")

