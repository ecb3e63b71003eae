"""Seeded discrete-event simulation of the question/answer protocol.

Each replication runs competing exponential clocks over ``[0, T]``: student
``i`` answers at rate ``lambdas[i]`` until it holds ``M`` answers, and the
instructor arrives at rate ``mu``, closing the question and resetting every
count. The default ``state-integral`` mode integrates the state reward along
the path, which is the Monte Carlo counterpart of the accumulated expected
rewards; ``per-question`` pays out at each instructor arrival instead.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rewards import InstructorParams, discount

STATE_INTEGRAL = "state-integral"
PER_QUESTION = "per-question"

_BLOCK = 512


@dataclass(frozen=True)
class SimConfig:
    M: int
    lambdas: tuple
    mu: float
    types: tuple  # StudentTypeParams of each student
    instructor: InstructorParams
    T: float
    replications: int = 1000
    seed: int = 0
    reward_mode: str = STATE_INTEGRAL

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        object.__setattr__(self, "types", tuple(self.types))
        if len(self.lambdas) != len(self.types) or not self.lambdas:
            raise DomainError("need one rate and one type per student")
        if not self.mu > 0:
            raise DomainError("instructor rate must be positive")
        if any(not lam >= 0 for lam in self.lambdas):
            raise DomainError("student rates must be non-negative")
        if not self.T > 0:
            raise DomainError("horizon must be positive")
        if self.replications < 1:
            raise DomainError("need at least one replication")
        if self.M < 1:
            raise DomainError("M must be at least 1")
        if self.reward_mode not in (STATE_INTEGRAL, PER_QUESTION):
            raise DomainError(f"unknown reward mode {self.reward_mode!r}")

    @property
    def n(self):
        return len(self.lambdas)


@dataclass(frozen=True)
class SimEstimate:
    mean: float
    std_error: float
    replications: int

    @classmethod
    def from_samples(cls, samples):
        samples = np.asarray(samples, dtype=float)
        r = samples.size
        mean = float(np.sum(samples) / r)
        if r < 2 or samples.min() == samples.max():
            return cls(float(samples[0]) if r else math.nan, 0.0, r)
        se = float(np.std(samples, ddof=1) / math.sqrt(r))
        return cls(mean, se, r)

    def sigmas(self, target):
        """Distance from ``target`` in standard errors (0 when both coincide exactly)."""
        gap = abs(self.mean - target)
        if self.std_error == 0.0:
            return 0.0 if gap == 0.0 else math.inf
        return gap / self.std_error


@dataclass(frozen=True)
class SimResult:
    students: tuple
    instructor: SimEstimate
    occupation: np.ndarray  # (n, M+1) mean time spent at each count
    occupation_se: np.ndarray


def replication_stream(seed, r):
    """Independent generator for replication ``r`` derived from the root seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(r),))))


class _Uniforms:
    def __init__(self, rng):
        self._rng = rng
        self._buf = rng.random(_BLOCK)
        self._i = 0

    def next(self):
        if self._i == _BLOCK:
            self._buf = self._rng.random(_BLOCK)
            self._i = 0
        u = self._buf[self._i]
        self._i += 1
        return u


def _replicate(cfg, rng, disc, out_students, out_occ):
    n, M, T = cfg.n, cfg.M, cfg.T
    lam = cfg.lambdas
    alpha = [t.alpha for t in cfg.types]
    cap = [t.m for t in cfg.types]
    bias = [t.bias_per_student for t in cfg.types]
    beta = cfg.instructor.beta
    integral = cfg.reward_mode == STATE_INTEGRAL
    u = _Uniforms(rng)

    x = [0] * n
    # state-integral mode keeps the areas under x_i and min(x_i, m_i); rewards are linear in them
    area = [0.0] * n
    area_cap = [0.0] * n
    student_total = [0.0] * n
    instr_total = 0.0
    t = 0.0
    while True:
        rate = cfg.mu
        for i in range(n):
            if x[i] < M:
                rate += lam[i]
        dt = -math.log1p(-u.next()) / rate
        hold = min(dt, T - t)
        for i in range(n):
            xi = x[i]
            out_occ[i, xi] += hold
            if xi:
                area[i] += hold * xi
                area_cap[i] += hold * min(xi, cap[i])
        t += dt
        if t >= T:
            break
        pick = u.next() * rate
        who = -1
        for i in range(n):
            if x[i] < M:
                pick -= lam[i]
                if pick < 0.0:
                    who = i
                    break
        if who >= 0:
            x[who] += 1
            continue
        if not integral:
            for i in range(n):
                xi = x[i]
                student_total[i] += min(xi, cap[i]) * disc - alpha[i] * xi
                instr_total += bias[i] * (xi * disc - beta)
        x = [0] * n
    if integral:
        student_total = [disc * area_cap[i] - alpha[i] * area[i] for i in range(n)]
        instr_total = 0.0
        for b, a in zip(bias, area):
            instr_total += b * (disc * a - beta * T)
    out_students[:] = student_total
    return instr_total


def simulate_forum(cfg: SimConfig):
    """Run ``cfg.replications`` independent paths and summarize the rewards."""
    disc = discount(cfg.instructor.delta, cfg.mu)
    R = cfg.replications
    students = np.zeros((R, cfg.n))
    instructor = np.zeros(R)
    occ = np.zeros((R, cfg.n, cfg.M + 1))
    for r in range(R):
        instructor[r] = _replicate(cfg, replication_stream(cfg.seed, r), disc, students[r], occ[r])
    est = tuple(SimEstimate.from_samples(students[:, i]) for i in range(cfg.n))
    occ_mean = np.sum(occ, axis=0) / R
    occ_se = np.std(occ, axis=0, ddof=1) / math.sqrt(R) if R > 1 else np.zeros_like(occ_mean)
    return SimResult(est, SimEstimate.from_samples(instructor), occ_mean, occ_se)

