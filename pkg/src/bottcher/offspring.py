"""Finite-support offspring laws on the positive integers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError, EmptyDistribution, InvalidSupport, NotNormalized

NORMALIZATION_TOL = 1e-9
NEAR_ONE = 0.5  # |log x| below which the expm1 branch of log_pgf_eval is used


@dataclass(frozen=True)
class OffspringDistribution:
    """Law of the offspring number ``N`` with its derived constants.

    ``mu`` and ``nu`` are the smallest and largest support points,
    ``span_d = nu - mu``, ``mean_a = E N`` and ``beta`` solves
    ``mean_a ** beta == mu`` (``None`` when the law is degenerate).
    Instances are immutable; build them with :func:`new_distribution`.
    """

    pmf: Mapping[int, float]
    mu: int
    nu: int
    span_d: int
    mean_a: float
    beta: float | None
    degenerate: bool
    support: np.ndarray = field(repr=False, compare=False)
    probs: np.ndarray = field(repr=False, compare=False)
    log_probs: np.ndarray = field(repr=False, compare=False)

    @property
    def p_mu(self) -> float:
        return self.pmf[self.mu]

    @property
    def variance(self) -> float:
        return float(np.dot(self.probs, (self.support - self.mean_a) ** 2))

    def dense(self) -> np.ndarray:
        """Probabilities indexed ``0..nu`` (zeros off the support)."""
        out = np.zeros(self.nu + 1)
        out[self.support] = self.probs
        return out

    def to_json(self) -> dict:
        return {"pmf": {str(k): v for k, v in self.pmf.items()}}

    def constants(self) -> dict:
        return {
            "mu": self.mu,
            "nu": self.nu,
            "d": self.span_d,
            "a": self.mean_a,
            "beta": self.beta,
            "degenerate": self.degenerate,
        }


def new_distribution(pmf: Mapping[int, float]) -> OffspringDistribution:
    if not pmf:
        raise EmptyDistribution("offspring pmf is empty")
    items = sorted((int(k), float(v)) for k, v in pmf.items())
    for k, v in items:
        if k < 1:
            raise InvalidSupport(f"support must be >= 1 (got key {k})")
        if not v > 0 or not math.isfinite(v):
            raise InvalidSupport(f"probability of {k} must be positive (got {v})")
    total = math.fsum(v for _, v in items)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"probabilities sum to {total!r}")
    support = np.array([k for k, _ in items], dtype=np.int64)
    probs = np.array([v for _, v in items]) / total
    clean = {int(k): float(p) for k, p in zip(support, probs)}
    mu, nu = int(support[0]), int(support[-1])
    mean = math.fsum(k * p for k, p in clean.items())
    degenerate = mu == nu
    if degenerate:
        mean = float(mu)
        beta = None
    elif mu == 1:
        beta = 0.0
    else:
        beta = math.log(mu) / math.log(mean)
    return OffspringDistribution(
        pmf=clean,
        mu=mu,
        nu=nu,
        span_d=nu - mu,
        mean_a=mean,
        beta=beta,
        degenerate=degenerate,
        support=support,
        probs=probs,
        log_probs=np.log(probs),
    )


def from_json(obj: str | Mapping) -> OffspringDistribution:
    """Parse ``{"pmf": {"2": 0.5, "3": 0.5}}`` (a string or a decoded mapping)."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, Mapping) or not isinstance(obj.get("pmf"), Mapping):
        raise DomainError('distribution JSON must look like {"pmf": {"k": p, ...}}')
    pmf = {}
    for key, value in obj["pmf"].items():
        try:
            pmf[int(key)] = float(value)
        except (TypeError, ValueError):
            raise DomainError(f"bad pmf entry {key!r}: {value!r}") from None
    return new_distribution(pmf)


def pgf_eval(dist: OffspringDistribution, x):
    """Evaluate ``f(x) = sum_k p_k x**k`` for ``x`` in ``[0, 1]``."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise DomainError("pgf argument must lie in [0, 1]")
    out = np.power.outer(arr, dist.support.astype(float)) @ dist.probs
    return float(out) if out.ndim == 0 else out


def log_pgf_eval(dist: OffspringDistribution, log_x):
    """``log f(exp(log_x))`` for ``log_x <= 0``.

    Near ``log_x = 0`` the value is formed as ``log1p(sum p_k expm1(k log_x))``
    so that relative accuracy survives; further out a log-sum-exp anchored
    at the minimal term is used, exact in the limit ``log_x -> -inf`` where
    it tends to ``log p_mu + mu * log_x``.
    """
    lx = np.asarray(log_x, dtype=float)
    near = lx > -NEAR_ONE
    with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
        lx_near = np.where(near, lx, 0.0)
        s = np.multiply.outer(lx_near, dist.support.astype(float))
        out_near = np.log1p(np.expm1(s) @ dist.probs)
        rel = dist.support[1:] - dist.mu
        lead = dist.log_probs[0] + dist.mu * lx
        if rel.size:
            terms = (dist.log_probs[1:] - dist.log_probs[0]) + np.multiply.outer(lx, rel)
            corr = np.log1p(np.exp(terms).sum(axis=-1))
            corr = np.where(np.isneginf(lx), 0.0, corr)
            lead = lead + corr
    out = np.where(near, out_near, lead)
    return float(out) if out.ndim == 0 else out


def log_pgf_with_slope(dist: OffspringDistribution, log_x):
    """Return ``log f(e^L)`` and ``d/dL log f(e^L)`` (the tilted mean of N)."""
    lx = np.asarray(log_x, dtype=float)
    with np.errstate(invalid="ignore"):
        terms = dist.log_probs + np.multiply.outer(lx, dist.support.astype(float))
    peak = terms.max(axis=-1, keepdims=True)
    w = np.exp(terms - peak)
    total = w.sum(axis=-1)
    value = np.log(total) + peak[..., 0]
    slope = (w @ dist.support.astype(float)) / total
    return value, slope


def sample(dist: OffspringDistribution, rng: np.random.Generator, size=None):
    """Draw offspring numbers; reproducible for a given generator state."""
    if dist.degenerate:
        if size is None:
            return dist.mu
        return np.full(size, dist.mu, dtype=np.int64)
    idx = rng.choice(dist.support.size, size=size, p=dist.probs)
    out = dist.support[idx]
    return int(out) if size is None else out
