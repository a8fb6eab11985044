"""Conditional law of the first generations given a small martingale limit.

``W`` is never available directly; every probability here uses the proxy
event ``{Z_n / a**n < eps}`` at an explicit depth ``n``.  Exact values come
from two independent lattice routes:

* ``"convolution"``: ``P(Z_k = mu**k, Z_n < t) = P(Z_k = mu**k) P(S < t)``
  with ``S`` the ``mu**k``-fold sum of ``Z_{n-k}`` copies, computed in the
  tilted log-scaled lattice (works deep into the rare-event regime);
* ``"full"``: a forward Markov-chain recursion from state ``mu**k`` using
  offspring convolution powers, in plain linear scale (small depths only).

The Monte Carlo estimator draws generation totals as multinomial offspring
counts and reweights paths whose early generations are tilted toward the
minimal offspring number.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import logsumexp

from . import lattice
from .errors import (
    DomainError,
    NoAcceptedSamples,
    NotBoettcherCase,
    NotInSupport,
    SizeCapExceeded,
    ZeroProbabilityEvent,
)
from .generation import (
    SIZE_CAP,
    exact_generation_pmf,
    log_minimal_generation_probability,
    support,
)
from .offspring import OffspringDistribution, log_pgf_eval
from .rng import DEFAULT_SEED, block_stream, blocks
from .tail import TailFunction, M_eval, tau

THRESHOLD_BUDGET = 2**17
FULL_ROUTE_CAP = 20_000
Z_95 = 1.959963984540054


# ---------------------------------------------------------------- exact ---


def _threshold(dist, n, eps) -> float:
    return eps * dist.mean_a**n


def log_prob_sum_below(dist: OffspringDistribution, copies: int, depth: int, t: float,
                       cap: int = SIZE_CAP) -> float:
    """``log P(Z^(1)_depth + ... + Z^(copies)_depth < t)`` for i.i.d. copies."""
    floor = copies * dist.mu**depth
    if t <= floor:
        return -math.inf
    if t - floor > cap:
        raise SizeCapExceeded(depth, math.ceil(t - floor), cap)
    limit = math.ceil(t)
    theta = lattice.saddle_theta(dist, depth, t, copies)
    x = lattice.generation(dist, depth, limit, theta)
    return lattice.power(x, copies, limit).log_mass_below(t)


def log_generation_below(dist, n, t, cap=SIZE_CAP) -> float:
    return log_prob_sum_below(dist, 1, n, t, cap)


def _check_event(dist, k, n, eps):
    if not 0 <= k < n:
        raise DomainError("need 0 <= k < n")
    if dist.degenerate:
        if eps <= 1.0:
            raise ZeroProbabilityEvent("Z_n / a**n == 1 for a degenerate law")
        return
    if (dist.mu / dist.mean_a) ** n >= eps:
        raise ZeroProbabilityEvent(
            f"Z_{n}/a^{n} >= (mu/a)^{n} = {(dist.mu / dist.mean_a) ** n:.4g} >= eps")


@dataclass(frozen=True)
class ConditionalLogs:
    """Log probabilities behind one exact conditional value."""

    log_joint: float  # log P(Z_k = mu**k, Z_n < t)
    log_denominator: float  # log P(Z_n < t)
    log_complement_joint: float  # log P(Z_k > mu**k, Z_n < t)

    @property
    def value(self) -> float:
        if math.isnan(self.log_complement_joint):
            return min(1.0, math.exp(self.log_joint - self.log_denominator))
        # joint / (joint + complement) avoids subtracting two large logs
        return 1.0 / (1.0 + math.exp(self.log_complement_joint - self.log_joint))

    @property
    def log_complement(self) -> float:
        """``log P(Z_k > mu**k | Z_n < t)``."""
        return self.log_complement_joint - self.log_denominator

    @property
    def closure(self) -> float:
        """``log(joint + complement) - log(denominator)``; zero up to rounding."""
        return float(np.logaddexp(self.log_joint, self.log_complement_joint) - self.log_denominator)


def conditional_logs(dist: OffspringDistribution, k: int, n: int, eps: float,
                     cap: int = SIZE_CAP, complement: bool = True) -> ConditionalLogs:
    """Convolution-route logs for ``P(Z_k = mu**k | Z_n < eps a**n)``."""
    _check_event(dist, k, n, eps)
    t = _threshold(dist, n, eps)
    if dist.degenerate:
        return ConditionalLogs(0.0, 0.0, -math.inf)
    log_den = log_generation_below(dist, n, t, cap)
    log_joint = log_minimal_generation_probability(dist, k) + log_prob_sum_below(
        dist, dist.mu**k, n - k, t, cap)
    log_comp = math.nan
    if complement:
        zk = exact_generation_pmf(dist, k, cap)
        terms = []
        for m, p in zip(zk.values[1:], zk.probs[1:]):
            if p > 0 and m * dist.mu ** (n - k) < t:
                terms.append(math.log(p) + log_prob_sum_below(dist, int(m), n - k, t, cap))
        log_comp = float(logsumexp(terms)) if terms else -math.inf
    return ConditionalLogs(log_joint, log_den, log_comp)


def _forward_chain(dist: OffspringDistribution, start: int, steps: int, limit: int) -> np.ndarray:
    """Law of the generation size ``steps`` generations after ``start`` individuals.

    Uses ``pmf_{j+1}[m] = sum_r pmf_j[r] (p^{*r})[m]`` restricted to
    ``m < limit``; returns a dense vector indexed from 0.
    """
    offspring = dist.dense()
    cur = np.zeros(limit)
    if start >= limit:
        return cur
    cur[start] = 1.0
    for _ in range(steps):
        nxt = np.zeros(limit)
        conv = np.ones(1)  # p^{*0}
        for r in range(1, limit):
            conv = np.convolve(conv, offspring)[:limit]
            if cur[r] != 0.0:
                nxt[: conv.size] += cur[r] * conv
            if not conv.any():
                break
        cur = nxt
    return cur


def exact_conditional(dist: OffspringDistribution, k: int, n: int, eps: float,
                      method: str = "convolution", cap: int = SIZE_CAP) -> float:
    """``P(Z_k = mu**k | Z_n / a**n < eps)`` computed exactly."""
    _check_event(dist, k, n, eps)
    if dist.degenerate:
        return 1.0
    if method == "convolution":
        return conditional_logs(dist, k, n, eps, cap, complement=False).value
    if method != "full":
        raise ValueError(f"unknown method {method!r}")
    joint, den = full_route_probabilities(dist, k, n, eps)
    if den == 0.0:
        raise ZeroProbabilityEvent("conditioning event underflows in linear scale")
    return joint / den


def full_route_probabilities(dist: OffspringDistribution, k: int, n: int, eps: float,
                             cap: int = FULL_ROUTE_CAP):
    """``(P(Z_k = mu**k, Z_n < t), P(Z_n < t))`` by forward recursion."""
    t = _threshold(dist, n, eps)
    limit = math.ceil(t)
    if limit > cap:
        raise SizeCapExceeded(n, limit, cap)
    zn = exact_generation_pmf(dist, n)
    den = math.fsum(zn.probs[: max(0, limit - zn.offset)])
    p_min = exact_generation_pmf(dist, k).prob(dist.mu**k)
    chain = _forward_chain(dist, dist.mu**k, n - k, limit)
    return p_min * math.fsum(chain), den


def chain_conditional_given_minimal(dist, k, n, eps, cap: int = FULL_ROUTE_CAP) -> float:
    """``P(Z_n < t | Z_k = mu**k)`` by the forward recursion."""
    limit = math.ceil(_threshold(dist, n, eps))
    if limit > cap:
        raise SizeCapExceeded(n, limit, cap)
    return math.fsum(_forward_chain(dist, dist.mu**k, n - k, limit))


# ----------------------------------------------------------- Monte Carlo ---


@dataclass(frozen=True)
class TiltConfig:
    """Importance-sampling proposal for the Monte Carlo estimator.

    ``mode="boost"``: in generations ``0 .. generations-1`` offspring follow
    ``q`` with ``q_mu = 1 - eta`` and the other probabilities rescaled
    proportionally; ``generations=None`` picks the smallest ``g`` with
    ``(m_q / a)**g < eps``, ``m_q`` being the mean of ``q``.

    ``mode="saddle"``: the exponential change of measure ``exp(-theta Z_n)``
    with ``theta`` at the saddle point of ``{Z_n < eps a**n}``.  Generation
    ``j`` then uses ``q_j(k) ~ p_k exp(k Lambda_{n-j-1})`` where
    ``Lambda_r = log E exp(-theta Z_r)``, and the path weight reduces to
    ``exp(Lambda_n + theta Z_n)``.
    """

    eta: float = 0.05
    generations: int | None = None
    enabled: bool = True
    mode: str = "boost"

    def horizon(self, dist: OffspringDistribution, n: int, eps: float) -> int:
        if not self.enabled or dist.degenerate:
            return 0
        if self.mode == "saddle":
            return n
        if self.generations is not None:
            return max(0, min(n, self.generations))
        if eps >= 1:
            return 0
        # tilted trees still grow like (tilted mean)**g, not mu**g
        growth = float(self.tilted_probs(dist) @ dist.support) / dist.mean_a
        if growth >= 1:
            return n
        return max(0, min(n, math.ceil(math.log(eps) / math.log(growth))))

    def tilted_probs(self, dist: OffspringDistribution) -> np.ndarray:
        if not 0 < self.eta < 1:
            raise DomainError("tilt eta must lie in (0, 1)")
        q = dist.probs * (self.eta / (1.0 - dist.p_mu))
        q[0] = 1.0 - self.eta
        return q

    def schedule(self, dist: OffspringDistribution, n: int, eps: float) -> list:
        """Offspring law used in each generation ``0 .. n-1``."""
        if self.mode not in ("boost", "saddle"):
            raise DomainError(f"unknown tilt mode {self.mode!r}")
        g = self.horizon(dist, n, eps)
        if g == 0:
            return [dist.probs] * n
        if self.mode == "boost":
            q = self.tilted_probs(dist)
            return [q] * g + [dist.probs] * (n - g)
        theta = lattice.saddle_theta(dist, n, _threshold(dist, n, eps))
        if theta == 0.0:
            return [dist.probs] * n
        lam = [-theta]
        for _ in range(n):
            lam.append(float(log_pgf_eval(dist, lam[-1])))
        out = []
        for j in range(n):
            lq = dist.log_probs + dist.support * lam[n - j - 1] - lam[n - j]
            q = np.exp(lq)
            out.append(q / q.sum())
        return out


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    ci_half_width: float
    ess: float
    accepted: int
    samples: int
    log_denominator: float
    tilt_generations: int

    def to_dict(self) -> dict:
        return asdict(self)


def _simulate_block(dist, k, n, t, schedule, rng, count):
    """Return (log_weights, indicator) for accepted paths of one block."""
    z = np.ones(count, dtype=np.int64)
    logw = np.zeros(count)
    zk = z.copy()
    log_p = np.log(dist.probs)
    alive = np.ones(count, dtype=bool)
    for j in range(n):
        if j == k:
            zk = z.copy()
        q = schedule[j]
        # rejected paths carry 0 individuals so multinomials stay cheap
        counts = rng.multinomial(np.where(alive, z, 0), q)
        if q is not dist.probs:
            # offspring numbers with q == 0 are never drawn
            with np.errstate(divide="ignore"):
                ratio = np.where(q > 0, log_p - np.log(q), 0.0)
            logw += counts @ ratio
        z = counts @ dist.support
        alive &= z * float(dist.mu) ** (n - j - 1) < t
    if k == n:
        zk = z
    acc = alive & (z < t)
    return logw[acc], zk[acc] == dist.mu**k


def mc_conditional(dist: OffspringDistribution, k: int, n: int, eps: float, samples: int,
                   tilt: TiltConfig = TiltConfig(), seed: int = DEFAULT_SEED,
                   threads: int = 1) -> MCEstimate:
    """Self-normalised importance-sampling estimate of ``P(Z_k = mu**k | Z_n/a**n < eps)``.

    The half-width is the larger of the delta-method interval and a Wilson
    score interval at the effective sample size, so it stays positive when
    every accepted path agrees.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    t = _threshold(dist, n, eps)
    g = tilt.horizon(dist, n, eps)
    schedule = [dist.probs] * n if dist.degenerate else tilt.schedule(dist, n, eps)

    def run(item):
        b, count = item
        return _simulate_block(dist, k, n, t, schedule, block_stream(seed, b), count)

    work = blocks(samples)
    if threads <= 1:
        results = [run(w) for w in work]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, work))
    logw = np.concatenate([r[0] for r in results])
    hit = np.concatenate([r[1] for r in results])
    if logw.size == 0:
        raise NoAcceptedSamples(f"no path reached Z_{n}/a^{n} < {eps:g} in {samples} samples")
    top = float(logw.max())
    w = np.exp(logw - top)
    sw = math.fsum(w)
    sw2 = math.fsum(w * w)
    est = math.fsum(w[hit]) / sw
    ess = sw * sw / sw2
    delta_hw = Z_95 * math.sqrt(math.fsum(w * w * (hit - est) ** 2)) / sw
    z2 = Z_95 * Z_95
    wilson_hw = Z_95 * math.sqrt(est * (1 - est) / ess + z2 / (4 * ess * ess)) / (1 + z2 / ess)
    log_den = top + math.log(sw) - math.log(samples)
    return MCEstimate(min(1.0, est), max(delta_hw, wilson_hw), ess, int(logw.size), samples,
                      log_den, g)


def naive_conditional(dist, k, n, eps, samples, seed=DEFAULT_SEED) -> tuple:
    """Plain rejection estimate ``(estimate, accepted)`` from full-tree paths."""
    from .generation import simulate_paths

    t = _threshold(dist, n, eps)
    hits = acc = 0
    for path in simulate_paths(dist, n, samples, seed):
        if path[n] < t:
            acc += 1
            hits += path[k] == dist.mu**k
    if acc == 0:
        raise NoAcceptedSamples("naive rejection accepted no path")
    return hits / acc, acc


# ------------------------------------------------------------ experiment ---


@dataclass(frozen=True)
class ExperimentConfig:
    eps_max: float = 1.0
    points_per_decade: int = 4
    threshold_budget: int = THRESHOLD_BUDGET
    cap: int = SIZE_CAP
    samples: int = 0
    tilt: TiltConfig = field(default_factory=lambda: TiltConfig(mode="saddle"))
    seed: int = DEFAULT_SEED
    threads: int = 1
    pass_threshold: float = 0.99
    depth_check: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConditioningEntry:
    eps: float
    estimate: float
    method: str
    ci_half_width: float
    ess: float | None
    samples: int | None
    depth: int
    log_denom_prob: float
    log_complement: float | None = None
    depth_delta: float | None = None

    @property
    def denom_prob(self) -> float:
        return math.exp(self.log_denom_prob)


@dataclass
class ConditioningReport:
    dist: OffspringDistribution
    k: int
    entries: list
    config: ExperimentConfig
    checks: dict = field(default_factory=dict)

    @property
    def exact_entries(self) -> list:
        return [e for e in self.entries if e.method == "exact"]

    @property
    def passed(self) -> bool:
        return bool(self.checks.get("final_pass", False))

    def rows(self) -> list:
        out = []
        for e in self.entries:
            row = asdict(e)
            row["denom_prob"] = e.denom_prob
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {
            "distribution": self.dist.to_json(),
            "constants": self.dist.constants(),
            "k": self.k,
            "config": self.config.to_dict(),
            "entries": self.rows(),
            "checks": self.checks,
        }


def eps_ladder(eps_max: float, decades: float, points_per_decade: int) -> np.ndarray:
    count = int(round(decades * points_per_decade))
    return eps_max * 10.0 ** (-np.arange(count + 1) / points_per_decade)


def min_feasible_depth(dist: OffspringDistribution, eps: float, k: int = 0) -> int:
    """Smallest ``n > k`` with ``(mu/a)**n < eps/2``."""
    if dist.degenerate:
        return k + 1
    ratio = dist.mu / dist.mean_a
    n = max(k + 1, math.floor(math.log(eps / 2) / math.log(ratio)) + 1)
    while ratio**n >= eps / 2:
        n += 1
    return n


def proxy_depth(dist: OffspringDistribution, eps: float, k: int = 0,
                budget: int = THRESHOLD_BUDGET, cap: int = SIZE_CAP) -> int:
    """Deepest ``n`` with ``eps a**n <= budget`` (at least the minimal feasible depth)."""
    n_min = min_feasible_depth(dist, eps, k)
    if dist.degenerate:
        return n_min
    n_budget = math.floor(math.log(budget / eps) / math.log(dist.mean_a))
    n = max(n_min, n_budget)
    if _threshold(dist, n, eps) > cap:
        raise SizeCapExceeded(n, math.ceil(_threshold(dist, n, eps)), cap)
    return n


def _slope(x, y) -> float:
    return float(np.polyfit(np.asarray(x, float), np.asarray(y, float), 1)[0])


def theorem1_experiment(dist: OffspringDistribution, k: int, eps_decades: float,
                        config: ExperimentConfig = ExperimentConfig()) -> ConditioningReport:
    """Ladder of conditional probabilities ``P(Z_k = mu**k | Z_n/a**n < eps)``."""
    ladder = eps_ladder(config.eps_max, eps_decades, config.points_per_decade)
    entries = []
    if dist.degenerate:
        # the tree is deterministic: the conditional law is the point mass on it
        for eps in ladder:
            entries.append(ConditioningEntry(float(eps), 1.0, "exact", 0.0, None, None,
                                             k + 1, 0.0, -math.inf, 0.0))
        report = ConditioningReport(dist, k, entries, config)
        report.checks = {"monotone": True, "final_estimate": 1.0, "final_pass": True,
                         "note": "degenerate law: a single tree"}
        return report

    for eps in ladder:
        n = proxy_depth(dist, float(eps), k, config.threshold_budget, config.cap)
        logs = conditional_logs(dist, k, n, float(eps), config.cap)
        delta = None
        if config.depth_check and n - 1 >= min_feasible_depth(dist, float(eps), k):
            prev = conditional_logs(dist, k, n - 1, float(eps), config.cap, complement=False)
            delta = abs(logs.value - prev.value)
        entries.append(ConditioningEntry(float(eps), logs.value, "exact", 0.0, None, None, n,
                                         logs.log_denominator, logs.log_complement, delta))
    if config.samples > 0:
        last = entries[-1]
        mc = mc_conditional(dist, k, last.depth, last.eps, config.samples, config.tilt,
                            config.seed, config.threads)
        entries.append(ConditioningEntry(last.eps, mc.estimate, "mc", mc.ci_half_width, mc.ess,
                                         mc.samples, last.depth, mc.log_denominator))
    report = ConditioningReport(dist, k, entries, config)
    report.checks = _theorem1_checks(dist, k, report, config)
    return report


def _theorem1_checks(dist, k, report, config) -> dict:
    exact = report.exact_entries
    values = [e.estimate for e in exact]
    monotone = all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    final = exact[-1]
    checks = {
        "monotone": monotone,
        "final_estimate": final.estimate,
        "final_log_complement": final.log_complement,
        "final_pass": monotone and final.estimate > config.pass_threshold,
        "pass_threshold": config.pass_threshold,
    }
    mc = [e for e in report.entries if e.method == "mc"]
    if mc:
        m = mc[-1]
        checks["mc_estimate"] = m.estimate
        checks["mc_ci_half_width"] = m.ci_half_width
        checks["mc_agrees_with_exact"] = abs(m.estimate - final.estimate) <= 3 * m.ci_half_width
        checks["mc_pass"] = m.estimate + m.ci_half_width > config.pass_threshold
    if dist.mu == 1:
        tau_value = tau(dist)
        pts = [(math.log(e.eps), e.log_complement) for e in exact
               if e.log_complement is not None and math.isfinite(e.log_complement)]
        checks["tau"] = tau_value
        if len(pts) >= 2:
            slope = _slope(*zip(*pts))
            checks["complement_slope"] = slope
            checks["complement_slope_ok"] = abs(slope - tau_value) <= 0.25 * tau_value
    else:
        expo = dist.beta / (1 - dist.beta)
        scaled = [e.log_complement * e.eps**expo for e in exact]
        checks["max_scaled_log_complement"] = max(scaled)
        checks["final_bound_ok"] = max(scaled) < 0
    return checks


# ----------------------------------------------------------------- gqrks ---


@dataclass(frozen=True)
class GqrksRow:
    eps: float
    depth: int
    lhs: float
    rhs: float
    ratio: float | None


def gqrks_check(dist: OffspringDistribution, tf: TailFunction, n: int, m: int, eps_grid,
                budget: int = THRESHOLD_BUDGET, cap: int = SIZE_CAP, tol: float = 0.25) -> dict:
    """Compare ``log P(W<eps) - log P(W<eps | Z_n=m)`` with its leading-order form.

    Both sides use proxies at the deepest depth ``N`` allowed by ``budget``:
    ``P(Z_N < eps a**N)`` and ``P(m-fold sum of Z_{N-n} < eps a**N)``.
    """
    if dist.mu == 1:
        raise NotBoettcherCase("the gqrks identity needs mu > 1")
    if m not in set(support(dist, n, cap).tolist()):
        raise NotInSupport(f"m={m} is not in the support of Z_{n}")
    gamma = 1.0 / (1.0 - dist.beta)
    expo = dist.beta * gamma
    b = m / dist.mu**n
    rows = []
    for eps in sorted((float(e) for e in eps_grid), reverse=True):
        N = max(n + 1, proxy_depth(dist, eps, n, budget, cap))
        t = _threshold(dist, N, eps)
        lhs = log_generation_below(dist, N, t, cap) - log_prob_sum_below(dist, m, N - n, t, cap)
        bracket = 0.0 if b == 1 else float(M_eval(tf, eps / b) * b**gamma - M_eval(tf, eps))
        rhs = bracket * eps ** (-expo)
        ratio = lhs / rhs if rhs != 0 else None
        rows.append(GqrksRow(eps, N, lhs, rhs, ratio))
    final = rows[-1]
    sanity = b == 1
    return {
        "n": n,
        "m": m,
        "b": b,
        "degenerate_bracket": sanity,
        "rows": [asdict(r) for r in rows],
        "final_ratio": final.ratio,
        "tolerance": tol,
        "pass": (abs(final.lhs) < 10.0) if sanity else abs(final.ratio - 1) < tol,
    }


# ------------------------------------------------------- tail agreement ---


def tail_agreement(dist: OffspringDistribution, tf: TailFunction, eps: float, depths,
                   cap: int = SIZE_CAP) -> dict:
    """``-log P(Z_n/a**n < eps)`` over several depths against ``M(eps) eps**(-beta/(1-beta))``."""
    pred = float(M_eval(tf, eps)) * eps ** (-tf.exponent)
    rows = []
    for n in depths:
        lp = log_generation_below(dist, n, _threshold(dist, n, eps), cap)
        rows.append({"depth": int(n), "neg_log_prob": -lp, "ratio": -lp / pred})
    ratios = [r["ratio"] for r in rows]
    monotone = all(abs(b - 1) <= abs(a - 1) + 1e-12 for a, b in zip(ratios, ratios[1:]))
    return {"eps": eps, "prediction": pred, "rows": rows, "final_ratio": ratios[-1],
            "monotone_toward_one": monotone}


def power_tail_fit(dist: OffspringDistribution, eps_min: float, eps_max: float,
                   depth: int | None = None, points: int = 9,
                   budget: int = 2 * 10**6) -> dict:
    """Log-log slope of ``P(Z_n/a**n < eps)`` in ``eps`` (``mu = 1`` regime).

    One truncated lattice pass at the largest threshold serves every ``eps``.
    """
    tau_value = tau(dist)
    if depth is None:
        depth = math.floor(math.log(budget / eps_max) / math.log(dist.mean_a))
    eps = np.geomspace(eps_min, eps_max, points)
    limit = math.ceil(_threshold(dist, depth, eps_max))
    if limit > budget:
        raise SizeCapExceeded(depth, limit, budget)
    x = lattice.generation(dist, depth, limit)
    logp = np.array([x.log_mass_below(_threshold(dist, depth, e)) for e in eps])
    slope = _slope(np.log(eps), logp)
    return {"depth": depth, "eps": eps.tolist(), "log_prob": logp.tolist(), "slope": slope,
            "tau": tau_value, "relative_error": abs(slope - tau_value) / tau_value}


def with_samples(config: ExperimentConfig, samples: int) -> ExperimentConfig:
    return replace(config, samples=samples)
