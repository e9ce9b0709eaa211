"""Stein-Chen quantities for the PNE count and the analytic envelopes.

For a fixed graph the PNE indicators ``X_i`` (one per profile) have
``P[X_i = 1] = 2**-n`` and dependence neighborhoods ``B_i = i ^ B_0``.  The
two pair sums ``b1``, ``b2`` bound the total variation distance between the
PNE count and Poisson(1) by ``2 * (b1 + b2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam, SizeLimitExceeded
from .graphs import Graph

STEIN_MAX_N = 24


@dataclass(frozen=True)
class SteinBounds:
    b1: float
    b2: float
    b0_size: int

    @property
    def tv_bound(self) -> float:
        return 2.0 * (self.b1 + self.b2)


def stein_bounds_exact(g: Graph) -> SteinBounds:
    """Exact b1, b2 for the random best-response game on ``g``.

    b1 is ``|B_0| / 2**n`` because every indicator has mean ``2**-n``.

    For b2, relabelling each player's rows by XOR with a fixed profile ``i``
    preserves the uniform table measure and maps the pair ``(0, j)`` to
    ``(i, i ^ j)``, so every orbit contributes the same and
    ``b2 = 2**n * sum_{j in B_0, j != 0} P[X_0 = 1, X_j = 1]``.

    Call player k *touched* by j if some neighbor of k plays 1 in j.  A touched
    player reads two different rows, so it is in best reply under both
    profiles with probability 1/4.  An untouched player reads the same row
    twice: probability 1/2 if it plays 0 in j, and 0 if it plays 1.  Hence
    each admissible j contributes ``2**n * 4**-T * 2**-(n - T) = 2**-T``.
    """
    n = g.n
    if n > STEIN_MAX_N:
        raise SizeLimitExceeded(f"exact Stein bounds support n <= {STEIN_MAX_N}, got n={n}")
    j = np.arange(1 << n, dtype=np.int64)
    touched = np.zeros(j.shape, dtype=np.int64)
    in_b0 = np.zeros(j.shape, dtype=bool)
    dead = np.zeros(j.shape, dtype=bool)
    for k, m in enumerate(g.neighbor_masks):
        hit = (j & m) != 0
        touched += hit
        in_b0 |= ~hit
        dead |= ~hit & (((j >> k) & 1) == 1)
    b0_size = int(np.count_nonzero(in_b0))
    live = in_b0 & ~dead
    live[0] = False
    # Sum of exact powers of two, grouped by T so float addition stays exact.
    t_counts = np.bincount(touched[live], minlength=n + 1)
    b2 = math.fsum(math.ldexp(int(c), -t) for t, c in enumerate(t_counts) if c)
    return SteinBounds(b1=b0_size / float(1 << n), b2=b2, b0_size=b0_size)


def _check_np(n: int, p: float) -> None:
    if n < 1:
        raise InvalidParam(f"n must be >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise InvalidParam(f"p must lie in [0, 1], got {p}")


def _log_binom_over_2n(n: int, s: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(s + 1) - math.lgamma(n - s + 1) - n * math.log(2.0)


def eval_S(n: int, p: float) -> float:
    """Envelope for E_G[b2]: sum_s C(n,s) 2^-n [(1+x)^k - (1-x)^k], x=(1-p)^s, k=n-s.

    The bracket is evaluated as ``(1+x)^k * -expm1(k * (log1p(-x) - log1p(x)))``
    which keeps full relative precision when ``x`` is tiny.
    """
    _check_np(n, p)
    terms = []
    for s in range(1, n + 1):
        k = n - s
        x = (1.0 - p) ** s
        if k == 0 or x == 0.0:
            continue
        if x >= 1.0:
            log_bracket = k * math.log(2.0)
        else:
            log_ratio = math.log1p(-x) - math.log1p(x)
            log_bracket = k * math.log1p(x) + math.log(-math.expm1(k * log_ratio))
        terms.append(math.exp(_log_binom_over_2n(n, s) + log_bracket))
    return math.fsum(terms)


def eval_R(n: int, p: float) -> float:
    """Envelope for E_G[b1]: sum_s C(n,s) 2^-n min(1, n (1-p)^(s-1))."""
    _check_np(n, p)
    terms = []
    for s in range(1, n + 1):
        y = (1.0 - p) ** (s - 1)
        terms.append(math.exp(_log_binom_over_2n(n, s)) * min(1.0, n * y))
    return math.fsum(terms)


def predict_low_connectivity(n: int, c: float) -> float:
    """(1 - c/(8 n^2))^(n(n-1)/2): P(PNE) when no potential edge plays matching pennies."""
    if n < 2:
        raise InvalidParam(f"n must be >= 2, got {n}")
    if c < 0:
        raise InvalidParam(f"c must be >= 0, got {c}")
    q = c / (8.0 * n * n)
    if q > 1:
        raise InvalidParam(f"c/(8n^2) = {q} exceeds 1")
    if q == 1:
        return 0.0
    return math.exp(n * (n - 1) / 2 * math.log1p(-q))


def low_connectivity_limit(c: float) -> float:
    return math.exp(-c / 16.0)


def low_connectivity_lower_bound(n: int, c: float) -> float:
    """The looser (1 - c/n^2)^(n(n-1)/2) form, valid as a lower bound on P(PNE)."""
    q = c / float(n * n)
    if not 0 <= q <= 1:
        raise InvalidParam(f"c/n^2 = {q} outside [0, 1]")
    return 0.0 if q == 1 else math.exp(n * (n - 1) / 2 * math.log1p(-q))


def medium_regime_bound(n: int, p: float) -> float:
    """exp(-m * 0.01 * n p (1-p)^(2n)) with m = 0.1 n / (np + 1).

    This is the explicit pre-asymptotic expression from the exposure argument;
    it bounds P(PNE) only up to an additional exp(-Omega(n)) failure term
    whose constant is not specified.
    """
    if n < 1:
        raise InvalidParam(f"n must be >= 1, got {n}")
    if not (0.0 < p < 1.0):
        raise InvalidParam(f"p must lie in (0, 1), got {p}")
    m = 0.1 * n / (n * p + 1.0)
    per_stage = 0.01 * n * p * math.exp(2 * n * math.log1p(-p))
    return math.exp(-m * per_stage)
