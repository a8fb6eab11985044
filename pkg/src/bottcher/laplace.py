"""Laplace transform of the martingale limit and the Boettcher scaling function.

``phi(s) = E exp(-s W)`` is obtained from the Poincare equation
``phi(a s) = f(phi(s))``: start from the two-cumulant expansion of
``log phi`` at a tiny argument ``s / a**n`` and push it back up with ``n``
applications of ``log f(exp(.))``.  The scaling function
``k(s) = lim a**(-n beta) log phi(s a**n)`` continues the same iteration
beyond ``s``; once the non-minimal offspring terms drop below machine
precision the remainder of the limit is a geometric series summed in
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConvergenceFailure, DegenerateDistribution, NotBoettcherCase
from .offspring import OffspringDistribution, log_pgf_eval

PHI_TOL = 1e-12
K_TOL = 1e-10
MAX_DEPTH = 64
START_ARG = 1e-3
GRID_POINTS = 512
_TAIL_NEGLIGIBLE = 1e-17
_PAD = 8


def _log_phi_at_depth(dist: OffspringDistribution, s: np.ndarray, n: int) -> np.ndarray:
    u = s / dist.mean_a**n
    var_w = dist.variance / (dist.mean_a * (dist.mean_a - 1.0))
    L = -u + 0.5 * var_w * u * u
    for _ in range(n):
        L = log_pgf_eval(dist, L)
    return np.asarray(L, dtype=float)


def log_phi(dist: OffspringDistribution, s, tol: float = PHI_TOL, max_depth: int = MAX_DEPTH):
    """``log E exp(-s W)``; vectorised over ``s``.

    The iteration depth grows until two successive depths agree to ``tol``
    (absolute in ``phi`` and relative in ``log phi``).
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("phi needs s >= 0")
    if dist.degenerate:
        # W == 1 almost surely
        out = -s_arr
        return float(out) if out.ndim == 0 else out
    smax = float(s_arr.max()) if s_arr.size else 0.0
    if smax == 0.0:
        out = np.zeros_like(s_arr)
        return float(out) if out.ndim == 0 else out
    n = max(0, math.ceil(math.log(smax / START_ARG) / math.log(dist.mean_a)))
    prev = _log_phi_at_depth(dist, s_arr, n)
    residual = math.inf
    while n < max_depth:
        n += 1
        cur = _log_phi_at_depth(dist, s_arr, n)
        with np.errstate(invalid="ignore"):
            d_lin = np.abs(np.exp(cur) - np.exp(prev))
            d_log = np.abs(cur - prev) / np.maximum(1.0, np.abs(cur))
        residual = float(max(d_lin.max(), d_log.max()))
        if residual < tol:
            return float(cur) if cur.ndim == 0 else cur
        prev = cur
    raise ConvergenceFailure(f"phi(s<={smax:g})", residual)


def phi(dist: OffspringDistribution, s, tol: float = PHI_TOL, max_depth: int = MAX_DEPTH):
    """Laplace transform ``E exp(-s W)`` of the martingale limit."""
    out = np.exp(log_phi(dist, s, tol, max_depth))
    return float(out) if np.ndim(out) == 0 else out


def _require_boettcher(dist: OffspringDistribution) -> None:
    if dist.degenerate:
        raise DegenerateDistribution("tail analysis needs p_mu < 1")
    if dist.mu == 1:
        raise NotBoettcherCase("mu = 1 has a polynomial lower tail; use tau()")


def k_function(dist: OffspringDistribution, s, max_iter: int = 400):
    """Scaling function ``k(s) = lim a**(-n beta) log phi(s a**n)`` (vectorised)."""
    _require_boettcher(dist)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise ValueError("k needs s > 0")
    L = np.atleast_1d(log_phi(dist, s_arr)).astype(float)
    mu = dist.mu
    ratios = dist.log_probs[1:] - dist.log_probs[0]
    rel = (dist.support[1:] - mu).astype(float)
    scale = 1.0
    for _ in range(max_iter):
        with np.errstate(over="ignore"):
            corr = np.exp(ratios[None, :] + np.multiply.outer(L, rel)).sum(axis=1)
        if corr.max() < _TAIL_NEGLIGIBLE:
            out = (L + dist.log_probs[0] / (mu - 1)) / scale
            return float(out[0]) if s_arr.ndim == 0 else out
        L = np.asarray(log_pgf_eval(dist, L), dtype=float)
        scale *= mu
    raise ConvergenceFailure("k(s)", float(corr.max()))


@dataclass(frozen=True)
class DeltaEstimate:
    value: float
    converged: bool
    s_values: tuple
    estimates: tuple


def estimate_delta(dist: OffspringDistribution, s_start: float = 1.0, shrink: float = 0.5,
                   steps: int = 30, h: float = 1e-4, rtol: float = 1e-3) -> DeltaEstimate:
    """Forward-difference estimates of ``-k'(s)`` at geometrically shrinking ``s``.

    Stops at the first pair of successive estimates agreeing to ``rtol``.
    Because ``k(a s) = a**beta k(s)`` forces ``k'(s/a) = a**(1-beta) k'(s)``,
    the slope grows without bound as ``s -> 0`` and the flag normally stays
    ``False``; the last (smallest-``s``) value is then a working bound.
    """
    _require_boettcher(dist)
    s_vals = s_start * shrink ** np.arange(steps)
    k0 = k_function(dist, s_vals)
    k1 = k_function(dist, s_vals * (1 + h))
    est = -(k1 - k0) / (s_vals * h)
    for j in range(1, steps):
        if abs(est[j] - est[j - 1]) <= rtol * abs(est[j]):
            return DeltaEstimate(float(est[j]), True, tuple(s_vals[: j + 1]), tuple(est[: j + 1]))
    return DeltaEstimate(float(est[-1]), False, tuple(s_vals), tuple(est))


@dataclass(frozen=True)
class ScalingFunction:
    """``k`` tabulated over one multiplicative period ``[s0, a s0)``.

    Off the grid ``k`` is extended through ``k(a s) = a**beta k(s)`` and the
    periodic factor ``v(s) = k(s) s**(-beta)`` is interpolated with a
    monotone cubic in ``log s``.
    """

    dist: OffspringDistribution
    s0: float
    s_grid: np.ndarray
    k_values: np.ndarray
    delta: DeltaEstimate
    _interp: PchipInterpolator = field(repr=False, compare=False)

    @property
    def beta(self) -> float:
        return self.dist.beta

    @property
    def period(self) -> float:
        return self.dist.mean_a

    @property
    def v_values(self) -> np.ndarray:
        return self.k_values * self.s_grid ** (-self.beta)

    def v(self, s):
        t = np.log(np.asarray(s, dtype=float))
        t0 = math.log(self.s0)
        tp = math.log(self.period)
        red = t0 + np.mod(t - t0, tp)
        return self._interp(red)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = self.v(s_arr) * s_arr**self.beta
        return float(out) if out.ndim == 0 else out

    def rows(self):
        return [
            {"s": float(s), "k": float(k), "v": float(v)}
            for s, k, v in zip(self.s_grid, self.k_values, self.v_values)
        ]


def scaling_function(dist: OffspringDistribution, s0: float = 1.0,
                     points: int = GRID_POINTS) -> ScalingFunction:
    _require_boettcher(dist)
    a = dist.mean_a
    t = math.log(s0) + math.log(a) * np.arange(points) / points
    s_grid = np.exp(t)
    k_vals = np.asarray(k_function(dist, s_grid))
    v_vals = k_vals * s_grid ** (-dist.beta)
    tp = math.log(a)
    tt = np.concatenate([t[-_PAD:] - tp, t, t[:_PAD] + tp])
    vv = np.concatenate([v_vals[-_PAD:], v_vals, v_vals[:_PAD]])
    interp = PchipInterpolator(tt, vv, extrapolate=False)
    return ScalingFunction(dist, s0, s_grid, k_vals, estimate_delta(dist), interp)
