"""Exponentially tilted, log-scaled probability vectors on integer lattices.

Lower-tail probabilities of generation sizes fall far below the double
precision range (``P(Z_n = mu**n)`` is ``p_mu**(mu**n - 1)``).  A
:class:`ScaledPmf` stores ``P(m) = w[m - offset] * exp(log_scale + theta*m)``
with ``max(w) == 1``.  Convolution commutes with the tilt ``exp(-theta*m)``,
so a single ``theta`` chosen at the saddle point of the final event keeps
every intermediate vector well conditioned where it matters.  Entries at
or above a ``limit`` are dropped: sums of positive integers only grow, so
mass below the limit is computed exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal
from scipy.special import logsumexp

from .offspring import OffspringDistribution, log_pgf_with_slope

DIRECT_CONV_MAX = 4_000_000  # len_a * len_b below which np.convolve is used


@dataclass(frozen=True)
class ScaledPmf:
    offset: int
    weights: np.ndarray
    log_scale: float
    theta: float = 0.0

    @property
    def empty(self) -> bool:
        return self.weights.size == 0 or self.log_scale == -math.inf

    @property
    def stop(self) -> int:
        return self.offset + self.weights.size

    def log_probs(self) -> np.ndarray:
        m = self.offset + np.arange(self.weights.size)
        with np.errstate(divide="ignore"):
            return np.log(self.weights) + self.log_scale + self.theta * m

    def probs(self) -> np.ndarray:
        return np.exp(self.log_probs())

    def log_mass_below(self, t) -> float:
        """``log sum_{m < t} P(m)``."""
        if self.empty:
            return -math.inf
        n = int(min(self.weights.size, max(0, math.ceil(t) - self.offset)))
        if n <= 0:
            return -math.inf
        lp = self.log_probs()[:n]
        return float(logsumexp(lp)) if np.isfinite(lp).any() else -math.inf

    def log_mass(self) -> float:
        return self.log_mass_below(math.inf)

    def log_prob_at(self, m: int) -> float:
        i = m - self.offset
        if self.empty or i < 0 or i >= self.weights.size or self.weights[i] == 0:
            return -math.inf
        return float(math.log(self.weights[i]) + self.log_scale + self.theta * m)


def _normalized(offset, w, log_scale, theta, limit=None) -> ScaledPmf:
    if limit is not None:
        w = w[: max(0, int(limit) - offset)]
    np.clip(w, 0.0, None, out=w)
    # trim exact zeros at the top so vectors do not grow on noise-free tails
    nz = np.flatnonzero(w)
    if nz.size == 0:
        return ScaledPmf(offset, np.zeros(0), -math.inf, theta)
    w = w[: nz[-1] + 1]
    peak = w.max()
    return ScaledPmf(offset, w / peak, log_scale + math.log(peak), theta)


def point_mass(m: int, theta: float = 0.0) -> ScaledPmf:
    return ScaledPmf(int(m), np.ones(1), -theta * m, theta)


def from_probs(offset: int, probs, theta: float = 0.0) -> ScaledPmf:
    probs = np.asarray(probs, dtype=float)
    m = offset + np.arange(probs.size)
    with np.errstate(divide="ignore"):
        lw = np.log(probs) - theta * m
    peak = lw[np.isfinite(lw)].max() if np.isfinite(lw).any() else -math.inf
    if peak == -math.inf:
        return ScaledPmf(offset, np.zeros(0), -math.inf, theta)
    return _normalized(offset, np.exp(lw - peak), peak, theta)


def from_log_probs(offset: int, log_probs, theta: float = 0.0) -> ScaledPmf:
    lp = np.asarray(log_probs, dtype=float)
    lw = lp - theta * (offset + np.arange(lp.size))
    finite = np.isfinite(lw)
    if not finite.any():
        return ScaledPmf(offset, np.zeros(0), -math.inf, theta)
    peak = lw[finite].max()
    return _normalized(offset, np.exp(lw - peak), peak, theta)


def _raw_convolve(a: np.ndarray, b: np.ndarray, length: int) -> np.ndarray:
    # only the first `length` output entries are needed
    a = a[:length]
    b = b[:length]
    if min(a.size, b.size) <= 64 or a.size * b.size <= DIRECT_CONV_MAX:
        return np.convolve(a, b)[:length]
    return signal.fftconvolve(a, b)[:length]


def convolve(x: ScaledPmf, y: ScaledPmf, limit=None) -> ScaledPmf:
    if x.theta != y.theta:
        raise ValueError("cannot convolve vectors with different tilts")
    offset = x.offset + y.offset
    if x.empty or y.empty or (limit is not None and offset >= limit):
        return ScaledPmf(offset, np.zeros(0), -math.inf, x.theta)
    length = x.weights.size + y.weights.size - 1
    if limit is not None:
        length = min(length, int(limit) - offset)
    w = _raw_convolve(x.weights, y.weights, length)
    return _normalized(offset, w, x.log_scale + y.log_scale, x.theta, limit)


def power(x: ScaledPmf, k: int, limit=None) -> ScaledPmf:
    """``k``-fold self-convolution by repeated squaring."""
    if k < 0:
        raise ValueError("negative convolution power")
    result = point_mass(0, x.theta)
    base = x
    while k:
        if k & 1:
            result = convolve(result, base, limit)
        k >>= 1
        if k:
            base = convolve(base, base, limit)
    return result


def mixture(parts, log_coefs, theta: float) -> ScaledPmf:
    """``sum_j exp(log_coefs[j]) * parts[j]`` on a common lattice."""
    live = [(p, c) for p, c in zip(parts, log_coefs) if not p.empty and c > -math.inf]
    if not live:
        return ScaledPmf(0, np.zeros(0), -math.inf, theta)
    lo = min(p.offset for p, _ in live)
    hi = max(p.stop for p, _ in live)
    top = max(p.log_scale + c for p, c in live)
    w = np.zeros(hi - lo)
    for p, c in live:
        w[p.offset - lo : p.stop - lo] += p.weights * math.exp(p.log_scale + c - top)
    return _normalized(lo, w, top, theta)


def compose(dist: OffspringDistribution, x: ScaledPmf, limit=None) -> ScaledPmf:
    """Law of ``X_1 + ... + X_N`` with ``N ~ dist`` and ``X_i ~ x`` i.i.d.

    This is the generating-function composition ``f(g(s))``.
    """
    parts, coefs = [], []
    cur = power(x, dist.mu, limit)
    for k in range(dist.mu, dist.nu + 1):
        if k > dist.mu:
            cur = convolve(cur, x, limit)
        p = dist.pmf.get(k)
        if p is not None:
            parts.append(cur)
            coefs.append(math.log(p))
        if cur.empty:
            break
    return mixture(parts, coefs, x.theta)


def generation(dist: OffspringDistribution, n: int, limit=None, theta: float = 0.0) -> ScaledPmf:
    """Law of ``Z_n`` restricted to ``m < limit``."""
    x = point_mass(1, theta)
    for _ in range(n):
        x = compose(dist, x, limit)
        if x.empty:
            break
    return x


def tilted_mean(dist: OffspringDistribution, n: int, theta: float) -> float:
    """Mean of ``Z_n`` under the measure tilted by ``exp(-theta * Z_n)``."""
    L = -theta
    slope = 1.0
    for _ in range(n):
        L, s = log_pgf_with_slope(dist, L)
        slope *= float(s)
        L = float(L)
    return slope


def saddle_theta(dist: OffspringDistribution, n: int, t: float, copies: int = 1) -> float:
    """Tilt putting the mean of a ``copies``-fold sum of ``Z_n`` at ``t``.

    Returns 0 when the untilted mean is already below ``t``.
    """
    if copies * dist.mean_a**n <= t or dist.degenerate:
        return 0.0
    floor = copies * dist.mu**n
    if t <= floor:
        return math.inf

    def gap(log_theta):
        return math.log(copies * tilted_mean(dist, n, math.exp(log_theta))) - math.log(t)

    lo, hi = -40.0, 0.0
    while gap(hi) > 0:
        hi += 2.0
        if hi > 20:
            return math.exp(hi)
    return math.exp(optimize.brentq(gap, lo, hi, xtol=1e-10))
