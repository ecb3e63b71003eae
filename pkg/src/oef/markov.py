"""Full and lumped forum chains, lumpability checks and reference solvers.

The full chain tracks the answer count of every student for the open
question; it grows as ``(M+1)**n`` and is only ever built to verify the
per-student lumped chains against it.
"""

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, DomainError, NumericError
from .poisson import cdf_sf_arrays, pmf_terms, truncation_point

DEFAULT_STATE_CAP = 200_000

#: Safety margin on the uniformization rate so no row of P has a zero self-loop.
UNIFORMIZATION_MARGIN = 1.01


@dataclass(frozen=True)
class Distribution:
    """Probability vector over a chain's states, optionally stamped with a time."""

    probs: np.ndarray
    t: Optional[float] = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1:
            raise DomainError("distribution must be a vector")
        if not np.all(np.isfinite(p)):
            raise NumericError("distribution has non-finite entries")
        if np.any(p < -1e-12):
            raise DomainError(f"negative probability {p.min()!r}")
        if abs(p.sum() - 1.0) > 1e-9:
            raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    @classmethod
    def point_mass(cls, size, index=0):
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p, t=0.0)


@dataclass(frozen=True)
class FullCtmc:
    """Chain over answer-count vectors ``(x_1, ..., x_n)`` with ``x_i <= M``.

    ``states`` holds one row per state in lexicographic order and ``Q`` is
    indexed by that order.
    """

    n: int
    M: int
    lambdas: tuple
    mu: float
    states: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)

    @property
    def n_states(self):
        return self.states.shape[0]

    @property
    def rate_bound(self):
        """Upper bound on every |Q| entry: total student rate plus ``mu``."""
        return float(sum(self.lambdas) + self.mu)

    def index_of(self, state):
        """Position of a state vector in the lexicographic enumeration."""
        state = tuple(int(s) for s in state)
        if len(state) != self.n or any(s < 0 or s > self.M for s in state):
            raise DomainError(f"invalid state {state}")
        idx = 0
        for s in state:
            idx = idx * (self.M + 1) + s
        return idx

    def labels(self):
        return ["|".join(str(int(v)) for v in row) for row in self.states]

    def origin(self):
        return Distribution.point_mass(self.n_states, 0)


@dataclass(frozen=True)
class LumpedCtmc:
    """Per-student birth-with-reset chain on ``{0, ..., M}``."""

    M: int
    lam: float
    mu: float
    Q: np.ndarray = field(repr=False)

    @property
    def n_states(self):
        return self.M + 1

    def origin(self):
        return Distribution.point_mass(self.M + 1, 0)


@dataclass(frozen=True)
class Partition:
    """Disjoint covering blocks of state indices."""

    blocks: tuple
    block_of: np.ndarray = field(repr=False)

    @classmethod
    def from_blocks(cls, blocks, n_states):
        blocks = tuple(np.asarray(sorted(int(i) for i in b), dtype=int) for b in blocks)
        block_of = np.full(n_states, -1, dtype=int)
        for k, b in enumerate(blocks):
            if b.size == 0:
                raise DomainError(f"block {k} is empty")
            if b.min() < 0 or b.max() >= n_states:
                raise DomainError(f"block {k} has an index outside 0..{n_states - 1}")
            if np.any(block_of[b] != -1):
                raise DomainError(f"block {k} overlaps an earlier block")
            block_of[b] = k
        if np.any(block_of == -1):
            raise DomainError("blocks do not cover the state set")
        block_of.setflags(write=False)
        return cls(blocks, block_of)

    @classmethod
    def singletons(cls, n_states):
        return cls.from_blocks([[i] for i in range(n_states)], n_states)

    @property
    def n_blocks(self):
        return len(self.blocks)

    def indicator(self):
        """``(n_states, n_blocks)`` 0/1 membership matrix."""
        ind = np.zeros((len(self.block_of), self.n_blocks))
        ind[np.arange(len(self.block_of)), self.block_of] = 1.0
        return ind


@dataclass(frozen=True)
class LumpabilityResult:
    lumpable: bool
    quotient: Optional[np.ndarray] = None
    witness: Optional[tuple] = None  # (state x, state y, target block)


def _check_rates(lambdas, mu):
    if not mu > 0:
        raise DomainError(f"instructor rate must be positive, got {mu!r}")
    for lam in lambdas:
        if not lam >= 0:
            raise DomainError(f"student rate must be non-negative, got {lam!r}")
    if not np.all(np.isfinite(list(lambdas) + [mu])):
        raise DomainError("rates must be finite")


def build_full_ctmc(n, M, lambdas, mu, state_cap=DEFAULT_STATE_CAP):
    """Build the ``n``-student chain with answer cap ``M``.

    Student ``j`` moves the chain one answer up in coordinate ``j`` at rate
    ``lambdas[j]`` (unless saturated at ``M``); the instructor resets every
    non-origin state to the origin at rate ``mu``.
    """
    if n < 1 or M < 1:
        raise DomainError("need n >= 1 and M >= 1")
    lambdas = tuple(float(v) for v in lambdas)
    if len(lambdas) != n:
        raise DomainError(f"expected {n} student rates, got {len(lambdas)}")
    _check_rates(lambdas, mu)
    size = (M + 1) ** n
    if size > state_cap:
        raise CapacityError(f"{size} states exceed the cap of {state_cap}")

    states = np.array(list(itertools.product(range(M + 1), repeat=n)), dtype=int)
    Q = np.zeros((size, size))
    strides = [(M + 1) ** (n - 1 - j) for j in range(n)]
    rows = np.arange(size)
    for j in range(n):
        if lambdas[j] == 0.0:
            continue
        can_step = states[:, j] < M
        src = rows[can_step]
        Q[src, src + strides[j]] = lambdas[j]
    Q[1:, 0] += mu
    Q[rows, rows] = -Q.sum(axis=1)
    Q.setflags(write=False)
    states.setflags(write=False)
    return FullCtmc(n=n, M=M, lambdas=lambdas, mu=float(mu), states=states, Q=Q)


def build_lumped_ctmc(M, lam, mu):
    """Build the per-student chain: birth at ``lam`` below ``M``, reset to 0 at ``mu``."""
    if M < 1:
        raise DomainError("need M >= 1")
    _check_rates([lam], mu)
    Q = np.zeros((M + 1, M + 1))
    idx = np.arange(M)
    Q[idx, idx + 1] = lam
    Q[1:, 0] = mu
    Q[np.arange(M + 1), np.arange(M + 1)] = -Q.sum(axis=1)
    Q.setflags(write=False)
    return LumpedCtmc(M=M, lam=float(lam), mu=float(mu), Q=Q)


def student_partition(ctmc, i):
    """Group full-chain states by the answer count of student ``i``."""
    if not 0 <= i < ctmc.n:
        raise DomainError(f"student index {i} out of range 0..{ctmc.n - 1}")
    col = ctmc.states[:, i]
    return Partition.from_blocks([np.flatnonzero(col == a) for a in range(ctmc.M + 1)], ctmc.n_states)


def check_lumpable(Q, partition, tol=1e-12):
    """Test strong lumpability of ``Q`` with respect to ``partition``.

    Every state of a block must send the same total rate into each block.
    When that holds the common rates form the quotient generator; otherwise
    a violating ``(x, y, block)`` triple is returned.
    """
    Q = getattr(Q, "Q", Q)
    into = np.asarray(Q) @ partition.indicator()  # into[x, b] = q(x, block b)
    quotient = np.zeros((partition.n_blocks, partition.n_blocks))
    for a, members in enumerate(partition.blocks):
        rows = into[members]
        rep = rows[0]
        dev = np.abs(rows - rep)
        if dev.max() > tol:
            k, b = np.unravel_index(np.argmax(dev), dev.shape)
            return LumpabilityResult(False, None, (int(members[0]), int(members[k]), int(b)))
        quotient[a] = rep
    return LumpabilityResult(True, quotient, None)


def uniformization_rate(Q):
    return float(np.max(np.abs(np.diag(Q)))) * UNIFORMIZATION_MARGIN


def _finite_generator(Q):
    Q = np.asarray(getattr(Q, "Q", Q), dtype=float)
    if not np.all(np.isfinite(Q)):
        raise NumericError("generator has non-finite entries")
    return Q


def _as_probs(pi0, size):
    p = pi0.probs if isinstance(pi0, Distribution) else Distribution(pi0).probs
    if len(p) != size:
        raise DomainError(f"initial distribution has {len(p)} entries, chain has {size}")
    return p


def _finish(vec, t):
    if not np.all(np.isfinite(vec)):
        raise NumericError("uniformization produced non-finite values")
    vec = np.clip(vec, 0.0, None)
    return Distribution(vec / vec.sum(), t=t)


def uniformize_transient(Q, pi0, t, eps=1e-12):
    """Transient distribution at time ``t`` by uniformization.

    ``pi_t = sum_k Poisson(qhat t; k) * pi0 P^k`` with ``P = I + Q/qhat``,
    truncated once the Poisson tail is below ``eps``.
    """
    Q = _finite_generator(Q)
    if t < 0:
        raise DomainError("t must be non-negative")
    if eps <= 0:
        raise DomainError("eps must be positive")
    p0 = _as_probs(pi0, Q.shape[0])
    if t == 0:
        return Distribution(p0.copy(), t=0.0)
    qhat = uniformization_rate(Q)
    if qhat == 0.0:
        return Distribution(p0.copy(), t=float(t))
    P = np.eye(Q.shape[0]) + Q / qhat
    z = qhat * t
    K = truncation_point(z, eps)
    weights = pmf_terms(z, K)
    vec = p0.copy()
    acc = weights[0] * vec
    for k in range(1, K + 1):
        vec = vec @ P
        acc += weights[k] * vec
    return _finish(acc, float(t))


def uniformize_integral(Q, pi0, T, eps=1e-12):
    """Expected occupation times ``int_0^T pi_t dt`` by uniformization.

    Uses ``int_0^T Poisson(qhat t; k) dt = P(N_{qhat T} > k) / qhat``.
    """
    Q = _finite_generator(Q)
    if T < 0:
        raise DomainError("T must be non-negative")
    p0 = _as_probs(pi0, Q.shape[0])
    if T == 0:
        return np.zeros_like(p0)
    qhat = uniformization_rate(Q)
    if qhat == 0.0:
        return p0 * T
    P = np.eye(Q.shape[0]) + Q / qhat
    z = qhat * T
    # sum_{k>K} P(N > k) <= P(N > K) * (z + 1) for K past the mode
    K = truncation_point(z, eps / (z + 1.0))
    _, sf = cdf_sf_arrays(K, z)
    vec = p0.copy()
    acc = sf[0] * vec
    for k in range(1, K + 1):
        vec = vec @ P
        acc += sf[k] * vec
    out = acc / qhat
    if not np.all(np.isfinite(out)):
        raise NumericError("uniformization produced non-finite values")
    return out


def steady_state_solve(Q, residual_tol=1e-10):
    """Stationary distribution of a generator with a unique invariant law.

    The first balance equation is replaced by the normalization row and the
    square system solved by pivoted LU.
    """
    Q = np.asarray(getattr(Q, "Q", Q), dtype=float)
    size = Q.shape[0]
    A = Q.T.copy()
    A[0, :] = 1.0
    b = np.zeros(size)
    b[0] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"stationary system is singular: {exc}") from exc
    if not np.all(np.isfinite(pi)):
        raise NumericError("stationary solve produced non-finite values")
    resid = np.max(np.abs(pi @ Q))
    if resid > residual_tol:
        raise NumericError(f"stationary residual {resid:.3g} exceeds {residual_tol:g}")
    pi = np.clip(pi, 0.0, None)
    return Distribution(pi / pi.sum())


def aggregate_distribution(pi, partition):
    """Sum probability mass within each block."""
    p = pi.probs if isinstance(pi, Distribution) else np.asarray(pi, dtype=float)
    if len(p) != len(partition.block_of):
        raise DomainError("distribution and partition sizes differ")
    out = np.bincount(partition.block_of, weights=p, minlength=partition.n_blocks)
    t = pi.t if isinstance(pi, Distribution) else None
    return Distribution(out, t=t)


def generator_to_csv(ctmc, labels: Optional[Sequence[str]] = None):
    """Dump a generator as CSV: one row per state, header of state labels."""
    Q = np.asarray(getattr(ctmc, "Q", ctmc))
    if labels is None:
        labels = ctmc.labels() if isinstance(ctmc, FullCtmc) else [str(i) for i in range(Q.shape[0])]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["state"] + list(labels))
    for label, row in zip(labels, Q):
        writer.writerow([label] + [f"{v:.12g}" for v in row])
    return buf.getvalue()
