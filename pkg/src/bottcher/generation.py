"""Generation sizes ``Z_n``: exact laws, supports, simulation, and trees."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from . import lattice
from .errors import DegenerateDistribution, PathOverflow, SizeCapExceeded
from .offspring import OffspringDistribution, sample
from .rng import path_stream

SIZE_CAP = 10**7
_INT_CONV_MAX = 2_000_000
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class GenerationPmf:
    """Exact law of ``Z_n`` as a dense vector over ``offset .. offset+len-1``."""

    n: int
    offset: int
    probs: np.ndarray = field(repr=False)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.probs)

    @property
    def values(self) -> np.ndarray:
        return self.offset + np.arange(self.probs.size)

    def prob(self, m: int) -> float:
        i = m - self.offset
        return float(self.probs[i]) if 0 <= i < self.probs.size else 0.0

    def mean(self) -> float:
        return math.fsum(self.values * self.probs)

    def pgf(self, x):
        """``E x**Z_n`` via Horner on the stored coefficients."""
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for p in self.probs[::-1]:
            acc = acc * x + p
        return acc * x**self.offset

    def as_dict(self) -> dict:
        return {int(m): float(p) for m, p in zip(self.values, self.probs) if p > 0}

    def rows(self):
        return [{"m": int(m), "probability": float(p)} for m, p in zip(self.values, self.probs) if p > 0]


def _check_cap(dist: OffspringDistribution, n: int, cap: int) -> None:
    size = dist.nu**n
    if size > cap:
        raise SizeCapExceeded(n, size, cap)


def exact_generation_pmf(dist: OffspringDistribution, n: int, cap: int = SIZE_CAP) -> GenerationPmf:
    """Exact law of ``Z_n`` by composing the generating function ``n`` times.

    Each step forms ``sum_k p_k (law of Z_{n-1})^{*k}``; convolutions are
    direct for small vectors and FFT-based otherwise.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_cap(dist, n, cap)
    x = lattice.generation(dist, n)
    probs = x.probs()
    full = np.zeros(dist.nu**n - dist.mu**n + 1)
    full[x.offset - dist.mu**n : x.offset - dist.mu**n + probs.size] = probs
    return GenerationPmf(n, dist.mu**n, full)


def _sumset(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size * b.size <= _INT_CONV_MAX:
        return np.convolve(a.astype(np.int64), b.astype(np.int64)) > 0
    # counts are integers far below 2**52, so rounding the FFT result is exact
    return signal.fftconvolve(a.astype(float), b.astype(float)) > 0.5


def support(dist: OffspringDistribution, n: int, cap: int = SIZE_CAP) -> np.ndarray:
    """Sorted support ``{m : P(Z_n = m) > 0}`` by sumset recursion."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_cap(dist, n, cap)
    cur = np.array([False, True])  # indicator over 0..1: Z_0 = 1
    for _ in range(n):
        nxt = np.zeros(dist.nu * (cur.size - 1) + 1, dtype=bool)
        power = np.ones(1, dtype=bool)
        for k in range(1, dist.nu + 1):
            power = _sumset(power, cur)
            if k in dist.pmf:
                nxt[: power.size] |= power
        cur = nxt
    return np.flatnonzero(cur)


def lattice_lower_bound_set(dist: OffspringDistribution, n: int) -> np.ndarray:
    """``{m : mu**n <= m <= nu**n, m = mu**n mod d}``, a subset of the support."""
    if dist.degenerate:
        raise DegenerateDistribution("the residue lattice needs nu > mu")
    if n < 0:
        raise ValueError("n must be >= 0")
    return np.arange(dist.mu**n, dist.nu**n + 1, dist.span_d, dtype=np.int64)


def log_minimal_generation_probability(dist: OffspringDistribution, n: int) -> float:
    if n == 0:
        return 0.0
    if dist.mu == 1:
        return n * math.log(dist.p_mu)
    return (dist.mu**n - 1) // (dist.mu - 1) * math.log(dist.p_mu)


def minimal_generation_probability(dist: OffspringDistribution, n: int) -> float:
    """``P(Z_n = mu**n)``: every individual in generations ``< n`` has ``mu`` children."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if dist.mu == 1:
        return dist.p_mu**n
    return dist.p_mu ** ((dist.mu**n - 1) // (dist.mu - 1))


def simulate_generations(dist: OffspringDistribution, n: int, rng: np.random.Generator) -> tuple:
    """One path ``(Z_0, ..., Z_n)``.

    Generation totals are drawn as multinomial offspring counts, so a step
    costs O(support size) regardless of ``Z_j``.
    """
    path = [1]
    z = 1
    for _ in range(n):
        if z * dist.nu >= _INT64_SAFE:
            raise PathOverflow(f"generation size would exceed {_INT64_SAFE}")
        if dist.degenerate:
            z = z * dist.mu
        else:
            counts = rng.multinomial(z, dist.probs)
            z = int(counts @ dist.support)
        path.append(z)
    return tuple(path)


def simulate_paths(dist: OffspringDistribution, n: int, paths: int, seed: int,
                   threads: int = 1) -> list:
    """``paths`` independent paths, path ``i`` drawn from stream ``(seed, i)``."""

    def one(i):
        return simulate_generations(dist, n, path_stream(seed, i))

    if threads <= 1:
        return [one(i) for i in range(paths)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(paths)))


@dataclass
class TreeNode:
    children: list = field(default_factory=list)


@dataclass
class RootedTree:
    """An ordered rooted tree known down to generation ``depth``."""

    root: TreeNode
    depth: int

    def levels(self) -> list:
        """Child counts per generation ``0 .. depth-1`` in breadth-first order.

        This sequence determines the ordered tree truncated at ``depth``.
        """
        out = []
        frontier = [self.root]
        for _ in range(self.depth):
            out.append(tuple(len(v.children) for v in frontier))
            frontier = [c for v in frontier for c in v.children]
        return out

    def generation_sizes(self) -> list:
        sizes = [1]
        for counts in self.levels():
            sizes.append(sum(counts))
        return sizes


def tree_from_levels(levels) -> RootedTree:
    root = TreeNode()
    frontier = [root]
    for counts in levels:
        if len(counts) != len(frontier):
            raise ValueError("level child counts do not match the generation size")
        nxt = []
        for node, c in zip(frontier, counts):
            node.children = [TreeNode() for _ in range(c)]
            nxt.extend(node.children)
        frontier = nxt
    return RootedTree(root, len(levels))


def regular_tree(mu: int, depth: int) -> RootedTree:
    return tree_from_levels([(mu,) * mu**j for j in range(depth)])


def simulate_tree(dist: OffspringDistribution, depth: int, rng: np.random.Generator,
                  max_nodes: int = SIZE_CAP) -> RootedTree:
    root = TreeNode()
    frontier = [root]
    total = 1
    for _ in range(depth):
        counts = sample(dist, rng, size=len(frontier))
        total += int(counts.sum())
        if total > max_nodes:
            raise SizeCapExceeded(depth, total, max_nodes)
        nxt = []
        for node, c in zip(frontier, counts):
            node.children = [TreeNode() for _ in range(int(c))]
            nxt.extend(node.children)
        frontier = nxt
    return RootedTree(root, depth)


def tree_distance(t1: RootedTree, t2: RootedTree) -> float:
    """``exp(-n)`` with ``n`` the last generation up to which the trees coincide.

    Both trees are truncated at the smaller depth and compared as ordered
    trees; identical truncations are at distance 0.
    """
    depth = min(t1.depth, t2.depth)
    l1, l2 = t1.levels()[:depth], t2.levels()[:depth]
    for j, (a, b) in enumerate(zip(l1, l2)):
        if a != b:
            return math.exp(-j)
    return 0.0
