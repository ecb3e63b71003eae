"""Closed-form probabilities and expected net-rewards of the lumped chain.

All power terms ``(lam/K)**x`` are built as running products of ratios
below 1, and every incomplete-gamma quantity goes through the stable Poisson
helpers, so the formulas stay finite at ``M = 100`` and ``K T`` in the
hundreds.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .markov import Distribution, FullCtmc, uniformize_integral, uniformize_transient, steady_state_solve
from .poisson import cdf_sf_arrays, poisson_cdf  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class StudentTypeParams:
    """One student type: cost per answer, rewardable answers, head count, bias mass."""

    alpha: float
    m: int
    count: int = 1
    bias_total: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"m must be a non-negative integer, got {self.m!r}")
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"count must be a positive integer, got {self.count!r}")
        if not 0.0 <= self.bias_total <= 1.0:
            raise DomainError(f"bias_total must lie in [0, 1], got {self.bias_total!r}")

    @property
    def bias_per_student(self):
        return self.bias_total / self.count


@dataclass(frozen=True)
class InstructorParams:
    beta: float
    delta: float
    budget: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta!r}")
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta!r}")

    @staticmethod
    def budget_for(types: Sequence[StudentTypeParams]):
        """Rewardable answers per question across the class: ``sum n_l m_l``."""
        return sum(t.count * t.m for t in types)


@dataclass(frozen=True)
class ChainSpec:
    """Rates and horizon of one lumped chain; ``rho`` and ``K`` are derived."""

    lam: float
    mu: float
    M: int
    T: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"instructor rate must be positive, got {self.mu!r}")
        if not self.lam >= 0:
            raise DomainError(f"student rate must be non-negative, got {self.lam!r}")
        if self.M < 1:
            raise DomainError("M must be at least 1")
        if not self.T > 0:
            raise DomainError(f"horizon must be positive, got {self.T!r}")

    @property
    def rho(self):
        return self.lam / self.mu

    @property
    def K(self):
        return self.lam + self.mu


@dataclass(frozen=True)
class RewardReport:
    student_steady: float
    instructor_steady: float
    student_transient_aggregate: float
    instructor_transient_aggregate: float
    normalized_error: Optional[float]


def discount(delta, mu):
    """Instructor's reward discount ``delta ** ln(mu)``."""
    if not mu > 0:
        raise DomainError(f"instructor rate must be positive, got {mu!r}")
    return math.exp(math.log(mu) * math.log(delta))


def _ratio_powers(r, n):
    """``[r**0, r**1, ..., r**n]`` as a running product."""
    out = np.empty(n + 1)
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = out[k - 1] * r
    return out


def steady_probs_closed(spec):
    """Stationary law of the lumped chain.

    ``Pi(x) = rho**x / (1+rho)**(x+1)`` for ``x < M`` and
    ``Pi(M) = (rho/(1+rho))**M``.
    """
    rho = spec.rho
    r = rho / (1.0 + rho)
    pw = _ratio_powers(r, spec.M)
    probs = pw / (1.0 + rho)
    probs[spec.M] = pw[spec.M]
    return Distribution(probs)


def transient_probs_closed(spec, t):
    """Vector of transient probabilities ``pi_t(0..M)`` started at state 0."""
    if t < 0:
        raise DomainError("t must be non-negative")
    M = spec.M
    out = np.zeros(M + 1)
    if t == 0:
        out[0] = 1.0
        return out
    lam, mu, K = spec.lam, spec.mu, spec.K
    z = K * t
    a = _ratio_powers(lam / K, M)  # (lam/K)**x
    cdf, sf = cdf_sf_arrays(M, z)
    out[0] = mu / K + (lam / K) * math.exp(-z)
    if M > 1:
        x = np.arange(1, M)
        log_pmf = -z + x * math.log(z) - np.array([math.lgamma(k + 1.0) for k in x])
        out[1:M] = a[1:M] * (mu / K) * sf[0 : M - 1] + a[2 : M + 1] * np.exp(log_pmf)
    out[M] = min(1.0, max(0.0, 1.0 - out[:M].sum()))
    return out


def transient_prob_closed(spec, x, t):
    """Probability of holding ``x`` answers at time ``t``, starting from none."""
    if not 0 <= x <= spec.M:
        raise DomainError(f"state {x} outside 0..{spec.M}")
    return float(transient_probs_closed(spec, t)[x])


def transient_integrals_closed(spec, T=None):
    """Expected time spent in each state over ``[0, T]``.

    Written with Poisson survival terms so that nothing cancels:
    ``(lam/K)**x (mu/K) [T - (1/K) sum_{y<x} P(N > y)] + (lam/K)**(x+1) P(N > x) / K``
    with ``N ~ Poisson(K T)``; this regroups the incomplete-gamma form term
    by term.
    """
    T = spec.T if T is None else T
    if not T > 0:
        raise DomainError("horizon must be positive")
    M = spec.M
    lam, mu, K = spec.lam, spec.mu, spec.K
    z = K * T
    a = _ratio_powers(lam / K, M)
    _, sf = cdf_sf_arrays(M, z)
    out = np.zeros(M + 1)
    out[0] = mu * T / K + lam * (-math.expm1(-z)) / K ** 2
    if M > 1:
        x = np.arange(1, M)
        cum_sf = np.cumsum(sf)  # cum_sf[x-1] = sum_{y=0}^{x-1} P(N > y)
        out[1:M] = a[1:M] * (mu / K) * (T - cum_sf[x - 1] / K) + a[2 : M + 1] * sf[1:M] / K
    out[M] = max(0.0, T - out[:M].sum())
    return out


def integral_transient_closed(spec, x, T=None):
    """``int_0^T pi_t(x) dt`` for one state."""
    if not 0 <= x <= spec.M:
        raise DomainError(f"state {x} outside 0..{spec.M}")
    return float(transient_integrals_closed(spec, T)[x])


def state_reward_student(x, stype, disc):
    """Net reward of a student holding ``x`` answers: capped reward minus cost."""
    return min(x, stype.m) * disc - stype.alpha * x


def state_reward_instructor(x, instr, disc):
    return x * disc - instr.beta


def _student_rewards_vec(M, stype, disc):
    x = np.arange(M + 1)
    return np.minimum(x, stype.m) * disc - stype.alpha * x


def steady_reward_student(spec, stype, instr):
    """Expected stationary net reward of one student."""
    rho = spec.rho
    r = rho / (1.0 + rho)
    disc = discount(instr.delta, spec.mu)
    return disc * rho * (1.0 - r ** stype.m) - stype.alpha * rho * (1.0 - r ** spec.M)


def steady_reward_instructor(spec, instr):
    """Instructor's expected stationary net reward from one student (unweighted)."""
    rho = spec.rho
    r = rho / (1.0 + rho)
    disc = discount(instr.delta, spec.mu)
    return disc * rho * (1.0 - r ** spec.M) - instr.beta


def transient_reward_student(spec, stype, instr, integrals=None):
    """Expected net reward of one student accumulated over ``[0, T]``."""
    occ = transient_integrals_closed(spec) if integrals is None else integrals
    disc = discount(instr.delta, spec.mu)
    # sum_{x<=m} (x-m) I(x) + m T == sum_x min(x, m) I(x) because the occupations add up to T
    x = np.arange(spec.M + 1)
    return disc * float(np.dot(np.minimum(x, stype.m), occ)) - stype.alpha * float(np.dot(x, occ))


def transient_reward_instructor(spec, instr, integrals=None):
    """Instructor's accumulated net reward from one student over ``[0, T]`` (unweighted)."""
    occ = transient_integrals_closed(spec) if integrals is None else integrals
    disc = discount(instr.delta, spec.mu)
    return disc * float(np.dot(np.arange(spec.M + 1), occ)) - instr.beta * spec.T


def normalized_error(steady_u, transient_u, T):
    """``|steady - transient/T| / |steady|``; ``None`` when the steady value is 0."""
    if steady_u == 0:
        return None
    return abs(steady_u - transient_u / T) / abs(steady_u)


def reward_report(spec, stype, instr):
    s_st = steady_reward_student(spec, stype, instr)
    t_st = transient_reward_student(spec, stype, instr)
    return RewardReport(
        student_steady=s_st,
        instructor_steady=steady_reward_instructor(spec, instr),
        student_transient_aggregate=t_st,
        instructor_transient_aggregate=transient_reward_instructor(spec, instr),
        normalized_error=normalized_error(s_st, t_st, spec.T),
    )


@dataclass(frozen=True)
class FullChainRewards:
    students: tuple
    instructor: float


def full_chain_rewards(ctmc: FullCtmc, types: Sequence[StudentTypeParams], instr, mode="steady", t=None):
    """Expected rewards evaluated directly on the full chain.

    ``types[i]`` is the type of student ``i``. ``mode`` is ``"steady"``,
    ``"instant"`` (expectation at time ``t``) or ``"transient"`` (accumulated
    over ``[0, t]``). Only meant as an oracle for the lumped formulas.
    """
    if len(types) != ctmc.n:
        raise DomainError(f"need one type per student ({ctmc.n}), got {len(types)}")
    if mode == "steady":
        weights = steady_state_solve(ctmc.Q).probs
    elif mode == "instant":
        weights = uniformize_transient(ctmc.Q, ctmc.origin(), t).probs
    elif mode == "transient":
        weights = uniformize_integral(ctmc.Q, ctmc.origin(), t)
    else:
        raise DomainError(f"unknown mode {mode!r}")
    disc = discount(instr.delta, ctmc.mu)
    X = ctmc.states
    students = []
    instructor_state = np.zeros(ctmc.n_states)
    for i, stype in enumerate(types):
        xi = X[:, i]
        r = np.minimum(xi, stype.m) * disc - stype.alpha * xi
        students.append(float(np.dot(r, weights)))
        instructor_state += stype.bias_per_student * (xi * disc - instr.beta)
    return FullChainRewards(tuple(students), float(np.dot(instructor_state, weights)))
