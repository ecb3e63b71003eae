"""Stable Poisson probabilities.

The regularized upper incomplete gamma function Gamma(n+1, z)/n! equals the
Poisson(z) CDF at n, so everything the closed forms need reduces to the
helpers below. No factorials are formed; weights come from the multiplicative
recurrence ``p(k) = p(k-1) * z / k`` or, once ``exp(-z)`` would underflow,
from log-space evaluation.
"""

import math

import numpy as np

#: Above this mean ``exp(-z)`` is too close to the float underflow limit.
LOG_SPACE_THRESHOLD = 700.0


def pmf_terms(z, kmax):
    """Poisson(z) probabilities for ``k = 0..kmax`` as a float array."""
    if z < 0:
        raise ValueError("Poisson mean must be non-negative")
    kmax = int(kmax)
    out = np.zeros(kmax + 1)
    if z == 0.0:
        out[0] = 1.0
        return out
    if z <= LOG_SPACE_THRESHOLD:
        p = math.exp(-z)
        out[0] = p
        for k in range(1, kmax + 1):
            p *= z / k
            out[k] = p
        return out
    k = np.arange(kmax + 1, dtype=float)
    logz = math.log(z)
    logp = -z + k * logz - np.array([math.lgamma(x + 1.0) for x in k])
    return np.exp(logp)


def truncation_point(z, eps):
    """Smallest ``K`` such that ``P(N > K) < eps`` for ``N ~ Poisson(z)``.

    The tail is bounded by a geometric series once ``k`` is past the mode,
    which avoids the cancellation in ``1 - cdf``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if z == 0.0:
        return 0
    if z > LOG_SPACE_THRESHOLD:
        # normal-tail start, then verify with the same bound in log space
        k = int(z + 10.0 * math.sqrt(z) + 10.0)
        logz = math.log(z)
        while True:
            logp = -z + (k + 1) * logz - math.lgamma(k + 2.0)
            ratio = z / (k + 2.0)
            if ratio < 1.0 and logp - math.log1p(-ratio) < math.log(eps):
                return k
            k += max(1, int(math.sqrt(z)))
    p = math.exp(-z)
    k = 0
    while True:
        nxt = p * z / (k + 1)  # P(N = k+1)
        ratio = z / (k + 2)
        if ratio < 1.0 and nxt / (1.0 - ratio) < eps:
            return k
        p = nxt
        k += 1


def cdf_sf_arrays(nmax, z):
    """Return ``(cdf, sf)`` arrays over ``k = 0..nmax`` for Poisson(z).

    ``cdf[k] = P(N <= k)`` and ``sf[k] = P(N > k)``, each computed from the
    side where it is small so neither suffers cancellation.
    """
    nmax = int(nmax)
    kmax = max(nmax + 1, truncation_point(z, 1e-300) + 1)
    pmf = pmf_terms(z, kmax)
    head = np.cumsum(pmf)
    tail = np.cumsum(pmf[::-1])[::-1]  # tail[k] = sum_{j >= k} pmf[j]
    cdf = head[: nmax + 1]
    sf = tail[1 : nmax + 2]
    cdf = np.where(cdf <= 0.5, cdf, 1.0 - sf)
    sf = np.where(sf <= 0.5, sf, 1.0 - cdf)
    return np.clip(cdf, 0.0, 1.0), np.clip(sf, 0.0, 1.0)


def poisson_cdf(n, z):
    """P(N <= n) for N ~ Poisson(z); equals Gamma(n+1, z) / n!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if z < 0:
        raise ValueError("z must be non-negative")
    if z == 0.0:
        return 1.0
    return float(cdf_sf_arrays(n, z)[0][n])


def poisson_sf(n, z):
    """P(N > n) for N ~ Poisson(z)."""
    if z == 0.0:
        return 0.0
    return float(cdf_sf_arrays(n, z)[1][n])


def poisson_pmf(k, z):
    """P(N = k), evaluated in log space."""
    if z == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(-z + k * math.log(z) - math.lgamma(k + 1.0))
