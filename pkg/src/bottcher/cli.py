"""Command line: ``bottcher <command> --dist DIST [options]``.

``DIST`` is a path to a JSON file or an inline JSON string such as
``'{"pmf": {"2": 0.5, "3": 0.5}}'``.  Exit codes: 0 ok, 1 check failed,
2 bad input, 3 resource or feasibility limit, 4 wrong regime.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import conditioning, generation, laplace, tail
from .errors import BottcherError, DomainError, NotBoettcherCase
from .io import to_csv, to_json
from .offspring import from_json, pgf_eval
from .rng import DEFAULT_SEED

THREADS_ENV = "BOTTCHER_THREADS"


def _load_dist(source: str):
    text = source
    if not source.lstrip().startswith("{"):
        path = Path(source)
        if not path.exists():
            raise DomainError(f"distribution file not found: {source}")
        text = path.read_text()
    return from_json(text)


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer") from None
    return 1


def _emit(args, payload: dict, rows, columns=None) -> None:
    text = to_json(payload) if args.format == "json" else to_csv(rows, columns)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _meta(args, dist, **params) -> dict:
    return {"command": args.command, "distribution": dist.to_json(),
            "constants": dist.constants(), "parameters": params}


def _require_beta(dist):
    if dist.mu == 1 and not dist.degenerate:
        raise NotBoettcherCase("mu = 1 has a polynomial tail; run the `tau` command instead")


def cmd_dist(args):
    dist = _load_dist(args.dist)
    row = dist.constants()
    _emit(args, {**_meta(args, dist), "valid": True}, [row])
    return 0


def cmd_pmf(args):
    dist = _load_dist(args.dist)
    pmf = generation.exact_generation_pmf(dist, args.n, args.cap)
    rows = pmf.rows()
    _emit(args, {**_meta(args, dist, n=args.n, cap=args.cap), "pmf": rows}, rows,
          ["m", "probability"])
    return 0


def cmd_support(args):
    dist = _load_dist(args.dist)
    sup = generation.support(dist, args.n, args.cap)
    rows = [{"m": int(m)} for m in sup]
    _emit(args, {**_meta(args, dist, n=args.n, cap=args.cap), "support": [int(m) for m in sup]},
          rows, ["m"])
    return 0


def cmd_simulate(args):
    dist = _load_dist(args.dist)
    paths = generation.simulate_paths(dist, args.n, args.paths, args.seed, _threads(args.threads))
    rows = [{"path": i, **{f"Z{j}": z for j, z in enumerate(p)}} for i, p in enumerate(paths)]
    columns = ["path"] + [f"Z{j}" for j in range(args.n + 1)]
    _emit(args, {**_meta(args, dist, n=args.n, paths=args.paths, seed=args.seed),
                 "paths": [list(p) for p in paths]}, rows, columns)
    return 0


def cmd_laplace(args):
    dist = _load_dist(args.dist)
    s = np.geomspace(args.s_min, args.s_max, args.points)
    ph = laplace.phi(dist, s)
    ph_as = laplace.phi(dist, dist.mean_a * s)
    f_ph = pgf_eval(dist, ph)
    rows = []
    with_k = not dist.degenerate and dist.mu > 1
    kv = laplace.k_function(dist, s) if with_k else [None] * s.size
    for i in range(s.size):
        row = {"s": float(s[i]), "phi": float(ph[i]), "phi_as": float(ph_as[i]),
               "f_phi": float(f_ph[i]), "residual": float(abs(ph_as[i] - f_ph[i]))}
        if with_k:
            row["k"] = float(kv[i])
            row["v"] = float(kv[i] * s[i] ** (-dist.beta))
        rows.append(row)
    payload = _meta(args, dist, s_min=args.s_min, s_max=args.s_max, points=args.points)
    payload["max_residual"] = max(r["residual"] for r in rows)
    payload["rows"] = rows
    _emit(args, payload, rows)
    return 0


def _tail_function(args, dist):
    _require_beta(dist)
    return tail.tail_function(dist, points=args.points)


def cmd_tail(args):
    dist = _load_dist(args.dist)
    tf = _tail_function(args, dist)
    rows = tf.rows()
    payload = _meta(args, dist, points=args.points)
    payload.update(period=tf.period, exponent=tf.exponent, delta=tf.delta,
                   delta_converged=tf.sf.delta.converged, rows=rows)
    _emit(args, payload, rows, ["x", "M", "M_scaled"])
    return 0


def cmd_gap(args):
    dist = _load_dist(args.dist)
    tf = _tail_function(args, dist)
    res = tail.gap_infimum(tf, args.b0, args.eps_points, args.b_points, args.b_max)
    out = res.to_dict()
    _emit(args, {**_meta(args, dist, b0=args.b0, points=args.points), "gap_infimum": out},
          [out])
    return 0 if res.positive else 1


def cmd_near_constancy(args):
    dist = _load_dist(args.dist)
    tf = _tail_function(args, dist)
    rep = tail.near_constancy_report(tf)
    _emit(args, {**_meta(args, dist, points=args.points), "report": rep}, [rep])
    return 0


def cmd_tau(args):
    dist = _load_dist(args.dist)
    row = {"tau": tail.tau(dist), "p1": dist.pmf[1], "a": dist.mean_a}
    _emit(args, {**_meta(args, dist), **row}, [row])
    return 0


def cmd_theorem1(args):
    dist = _load_dist(args.dist)
    cfg = conditioning.ExperimentConfig(
        eps_max=args.eps_max,
        points_per_decade=args.points_per_decade,
        samples=args.samples,
        tilt=conditioning.TiltConfig(eta=args.eta, mode=args.tilt_mode),
        seed=args.seed,
        threads=_threads(args.threads),
        pass_threshold=args.pass_threshold,
    )
    report = conditioning.theorem1_experiment(dist, args.k, args.eps_decades, cfg)
    payload = report.to_dict()
    payload["config"].pop("threads")  # never part of the output: results do not depend on it
    payload = {**_meta(args, dist, k=args.k, eps_decades=args.eps_decades), **payload}
    columns = ["eps", "estimate", "ci_half_width", "method", "depth", "denom_prob",
               "log_denom_prob", "log_complement", "ess", "samples", "depth_delta"]
    _emit(args, payload, report.rows(), columns)
    return 0 if report.passed else 1


def cmd_gqrks(args):
    dist = _load_dist(args.dist)
    _require_beta(dist)
    if not 1 <= args.m:
        raise DomainError("m must be positive")
    if args.m not in set(generation.support(dist, args.n).tolist()):
        raise DomainError(f"m={args.m} is not in the support of Z_{args.n}")
    tf = tail.tail_function(dist)
    eps = args.eps if args.eps else [0.5, 0.3, 0.2, 0.15, 0.1]
    rep = conditioning.gqrks_check(dist, tf, args.n, args.m, eps)
    _emit(args, {**_meta(args, dist, n=args.n, m=args.m, eps=eps), **rep}, rep["rows"])
    return 0 if rep["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bottcher", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--dist", required=True, help="JSON file or inline JSON distribution")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write here instead of stdout")
        p.set_defaults(func=func)
        return p

    dist_p = sub.add_parser("dist", help="distribution utilities")
    dist_sub = dist_p.add_subparsers(dest="action", required=True)
    v = dist_sub.add_parser("validate", help="check a distribution and print its constants")
    v.add_argument("--dist", required=True)
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.add_argument("--output")
    v.set_defaults(func=cmd_dist)

    for name, func, help_ in (("pmf", cmd_pmf, "exact law of Z_n"),
                              ("support", cmd_support, "support of Z_n")):
        p = add(name, func, help_)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--cap", type=int, default=generation.SIZE_CAP)

    p = add("simulate", cmd_simulate, "simulate generation-size paths")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--paths", type=int, default=10)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int)

    p = add("laplace", cmd_laplace, "Laplace transform table with functional-equation check")
    p.add_argument("--s-min", type=float, default=1e-2)
    p.add_argument("--s-max", type=float, default=1e2)
    p.add_argument("--points", type=int, default=64)

    for name, func, help_ in (("tail", cmd_tail, "periodic tail function M over one period"),
                              ("gap", cmd_gap, "infimum of the gap functional"),
                              ("near-constancy", cmd_near_constancy, "oscillation of M")):
        p = add(name, func, help_)
        p.add_argument("--points", type=int, default=512)
        if name == "gap":
            p.add_argument("--b0", type=float, required=True)
            p.add_argument("--b-max", type=float)
            p.add_argument("--eps-points", type=int, default=256)
            p.add_argument("--b-points", type=int, default=64)

    add("tau", cmd_tau, "tail exponent for mu = 1")

    p = add("theorem1", cmd_theorem1, "conditional probabilities along an eps ladder")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps-decades", type=float, default=1.0)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--points-per-decade", type=int, default=4)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int)
    p.add_argument("--tilt-mode", choices=("saddle", "boost"), default="saddle")
    p.add_argument("--eta", type=float, default=0.05)
    p.add_argument("--pass-threshold", type=float, default=0.99)

    p = add("gqrks", cmd_gqrks, "log P(W<eps) - log P(W<eps | Z_n=m) vs its leading term")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eps", type=float, nargs="*")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "dist":
        args.command = "dist validate"
    try:
        return args.func(args)
    except BottcherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
