"""Fenchel dual of the scaling function and the periodic lower-tail function M.

For ``mu > 1`` the left tail of W behaves like
``-log P(W < x) ~ M(x) x**(-beta/(1-beta))`` with ``M`` multiplicatively
periodic of period ``a**(1-beta)``.  ``M`` is built constructively from
``M(x) = k*(-x) x**(beta/(1-beta))`` where ``k*(y) = sup_s {y s - k(s)}``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    BracketFailure,
    DegenerateDistribution,
    DomainError,
    NotFatTailCase,
)
from .laplace import ScalingFunction, scaling_function
from .offspring import OffspringDistribution

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
DUAL_RTOL = 1e-8
MAX_EXPANSIONS = 60
DOMAIN_SAFETY = 0.9
_PAD = 8


def golden_section_max(func, lo: float, hi: float, tol: float = DUAL_RTOL, max_iter: int = 200):
    """Maximise a unimodal ``func`` on ``[lo, hi]``; returns ``(x, func(x))``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = func(x1), func(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = func(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = func(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _dual_maximizer(sf: ScalingFunction, y: float):
    """Bracket and locate ``argmax_{log s} (y e^t - k(e^t))``."""

    def objective(t):
        s = math.exp(t)
        return y * s - sf(s)

    beta = sf.beta
    v1 = float(sf.v(1.0))
    # stationary point of y s - v s**beta with v frozen
    t_mid = math.log(y / (v1 * beta)) / (beta - 1.0)
    lo, hi = t_mid - 1.0, t_mid + 1.0
    step = math.log(2.0)
    for _ in range(MAX_EXPANSIONS):
        f_lo, f_mid, f_hi = objective(lo), objective(0.5 * (lo + hi)), objective(hi)
        if f_mid >= f_lo and f_mid >= f_hi:
            return golden_section_max(objective, lo, hi)
        if f_lo > f_mid:
            lo -= step
        if f_hi > f_mid:
            hi += step
        step *= 2.0
    raise BracketFailure(f"k_dual(y={y:g})", hi - lo)


def k_dual(sf: ScalingFunction, y: float, return_argmax: bool = False):
    """``k*(y) = sup_{s>0} {y s - k(s)}`` for ``y`` in ``(-delta, 0)``."""
    if not (-sf.delta.value < y < 0):
        raise DomainError(f"k_dual needs -delta < y < 0 (delta={sf.delta.value:g}, y={y:g})")
    t, val = _dual_maximizer(sf, y)
    return (val, math.exp(t)) if return_argmax else val


@dataclass(frozen=True)
class TailFunction:
    """``M`` over one period ``[x0, x0 * a**(1-beta))`` with periodic extension."""

    sf: ScalingFunction
    x0: float
    x_grid: np.ndarray
    M_values: np.ndarray
    _interp: PchipInterpolator = field(repr=False, compare=False)

    @property
    def dist(self) -> OffspringDistribution:
        return self.sf.dist

    @property
    def beta(self) -> float:
        return self.sf.beta

    @property
    def delta(self) -> float:
        return self.sf.delta.value

    @property
    def period(self) -> float:
        return self.dist.mean_a ** (1.0 - self.beta)

    @property
    def exponent(self) -> float:
        """``beta / (1 - beta)``, the stretched-exponential tail order."""
        return self.beta / (1.0 - self.beta)

    @property
    def gamma(self) -> float:
        return 1.0 / (1.0 - self.beta)

    @property
    def direct_domain(self) -> float:
        return DOMAIN_SAFETY * self.delta

    def rows(self):
        return [
            {"x": float(x), "M": float(m), "M_scaled": float(m * x ** (-self.exponent))}
            for x, m in zip(self.x_grid, self.M_values)
        ]


def M_direct(tf_or_sf, x: float) -> float:
    """``M(x) = k*(-x) x**(beta/(1-beta))`` straight from the dual."""
    sf = tf_or_sf.sf if isinstance(tf_or_sf, TailFunction) else tf_or_sf
    if not 0 < x < DOMAIN_SAFETY * sf.delta.value:
        raise DomainError(f"direct M needs 0 < x < {DOMAIN_SAFETY * sf.delta.value:g}")
    return k_dual(sf, -x) * x ** (sf.beta / (1.0 - sf.beta))


def tail_function(dist_or_sf, points: int = 512, x0: float | None = None) -> TailFunction:
    sf = dist_or_sf if isinstance(dist_or_sf, ScalingFunction) else scaling_function(dist_or_sf)
    period = sf.dist.mean_a ** (1.0 - sf.beta)
    limit = DOMAIN_SAFETY * sf.delta.value / period
    if x0 is None:
        x0 = min(0.1, 0.5 * limit)
    if not 0 < x0 < limit:
        raise DomainError(f"base period must sit inside (0, {limit:g})")
    tp = math.log(period)
    t = math.log(x0) + tp * np.arange(points) / points
    x_grid = np.exp(t)
    M_vals = np.array([M_direct(sf, float(x)) for x in x_grid])
    tt = np.concatenate([t[-_PAD:] - tp, t, t[:_PAD] + tp])
    mm = np.concatenate([M_vals[-_PAD:], M_vals, M_vals[:_PAD]])
    interp = PchipInterpolator(tt, mm, extrapolate=False)
    return TailFunction(sf, x0, x_grid, M_vals, interp)


def M_eval(tf: TailFunction, x):
    """Periodic ``M`` at any ``x > 0`` (reduced into the base period, interpolated)."""
    t = np.log(np.asarray(x, dtype=float))
    t0 = math.log(tf.x0)
    tp = math.log(tf.period)
    out = tf._interp(t0 + np.mod(t - t0, tp))
    return float(out) if out.ndim == 0 else out


def tail_log_prediction(tf: TailFunction, m: int, x):
    """Leading term ``m M(x/m) (x/m)**(-beta/(1-beta))`` of ``-log P(W_1+..+W_m < x)``."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    xm = np.asarray(x, dtype=float) / m
    out = m * M_eval(tf, xm) * xm ** (-tf.exponent)
    return float(out) if np.ndim(out) == 0 else out


def gap(tf: TailFunction, eps, b):
    """``M(eps/b) b**(1/(1-beta)) - M(eps)``."""
    eps = np.asarray(eps, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b < 1) or np.any(eps <= 0):
        raise DomainError("gap needs eps > 0 and b >= 1")
    out = np.where(b == 1.0, 0.0, M_eval(tf, eps / b) * b**tf.gamma - M_eval(tf, eps))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GapInfimum:
    value: float
    eps_argmin: float
    b_argmin: float
    b0: float
    b_max: float
    tail_bound: float
    eps_points: int
    b_points: int

    @property
    def positive(self) -> bool:
        return self.value > 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["positive"] = self.positive
        return out


def gap_infimum(tf: TailFunction, b0: float, eps_points: int = 256, b_points: int = 64,
                b_max: float | None = None) -> GapInfimum:
    """Grid minimum of the gap over one eps-period and ``b`` in ``[b0, b_max]``.

    ``tail_bound = min M * b_max**gamma - max M`` bounds the gap from below
    for every ``b >= b_max``.
    """
    if not b0 > 1:
        raise DomainError("b0 must exceed 1")
    if b_max is None:
        b_max = tf.period * b0
    if b_max < b0:
        raise DomainError("b_max must be >= b0")
    eps = tf.x0 * tf.period ** (np.arange(eps_points) / eps_points)
    bs = np.geomspace(b0, b_max, b_points) if b_points > 1 else np.array([b0])
    grid = gap(tf, eps[:, None], bs[None, :])
    i, j = np.unravel_index(np.argmin(grid), grid.shape)
    tail_bound = float(tf.M_values.min() * b_max**tf.gamma - tf.M_values.max())
    return GapInfimum(float(grid[i, j]), float(eps[i]), float(bs[j]), float(b0),
                      float(b_max), tail_bound, eps_points, b_points)


def near_constancy_report(tf: TailFunction, check_points: int = 1024) -> dict:
    """Size of the oscillation of ``M`` and monotonicity of ``M(x) x**(-1/(1-beta))``."""
    M = tf.M_values
    c = np.fft.rfft(M) / M.size
    t = np.log(tf.x0) + 2.0 * np.log(tf.period) * np.arange(check_points + 1) / check_points
    x = np.exp(t)
    g = M_eval(tf, x) * x ** (-tf.gamma)
    steps = (g[:-1] - g[1:]) / g[:-1]
    return {
        "min_M": float(M.min()),
        "max_M": float(M.max()),
        "mean_M": float(M.mean()),
        "oscillation_ratio": float(M.max() / M.min()),
        "first_harmonic_amplitude": float(2.0 * abs(c[1])),
        "first_harmonic_relative": float(2.0 * abs(c[1]) / c[0].real),
        "monotonicity_margin": float(steps.min()),
        "period": tf.period,
        "x0": tf.x0,
    }


def tau(dist: OffspringDistribution) -> float:
    """Polynomial tail exponent ``-log p_1 / log a`` of W when ``mu = 1``."""
    if dist.mu != 1:
        raise NotFatTailCase("tau is defined only for mu = 1")
    if dist.degenerate:
        raise DegenerateDistribution("tau needs p_1 < 1")
    return -math.log(dist.pmf[1]) / math.log(dist.mean_a)
