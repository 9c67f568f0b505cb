"""Exact minimisation of ``x . d`` over all networks with given ``(n, k)``.

The search evaluates every vertex.  Distances are scaled to integers by
their common denominator so the dot products run in int64 (numba or numpy);
values too large for int64 fall back to Python integers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .enumeration import _check_range, network_count, vertex_set
from .errors import AmbientMismatch, BudgetExceeded
from .metrics import DistanceMatrix
from .splits import Network

DEFAULT_BUDGET = 10 ** 7


def evaluation_budget() -> int:
    raw = os.environ.get("BMENET_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass
class OptimizationResult:
    minimum: Fraction
    argmin: list
    evaluated: int
    n: int = 0
    k: int = 0


def _lengths(mat: np.ndarray, d: DistanceMatrix) -> list[Fraction]:
    ints, den = d.integer_entries()
    peak = max(ints, default=0) * int(mat.max(initial=0)) * len(ints)
    if peak < 2 ** 62:
        raw = _kernels.row_dots(mat, np.array(ints, dtype=np.int64)).tolist()
    else:
        raw = [sum(int(a) * b for a, b in zip(row, ints)) for row in mat.tolist()]
    return raw, den


def _partition_min(args):
    entries, n, k, index, count = args
    d = DistanceMatrix(n, entries)
    nets, mat = vertex_set(n, k)
    lo, hi = index * len(nets) // count, (index + 1) * len(nets) // count
    raw, den = _lengths(mat[lo:hi], d)
    if not raw:
        return None, [], 0
    best = min(raw)
    return Fraction(best, den), [lo + t for t, v in enumerate(raw) if v == best], len(raw)


def minimize(d: DistanceMatrix, n: int, k: int, budget: int | None = None, jobs: int = 1) -> OptimizationResult:
    """Global minimum of the network length over all ``(n, k)`` networks, with every minimiser."""
    if d.n != n:
        raise AmbientMismatch(f"matrix on {d.n} taxa, asked for n={n}")
    _check_range(n, k)
    budget = evaluation_budget() if budget is None else budget
    total = network_count(n, k)
    if total > budget:
        raise BudgetExceeded(f"v({n},{k}) = {total} exceeds the budget {budget}")
    nets, mat = vertex_set(n, k)
    if jobs > 1:
        tasks = [(d.entries, n, k, i, jobs) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_partition_min, tasks))
        parts = [p for p in parts if p[0] is not None]
        minimum = min(p[0] for p in parts)
        winners = sorted(t for p in parts if p[0] == minimum for t in p[1])
        evaluated = sum(p[2] for p in parts)
    else:
        raw, den = _lengths(mat, d)
        best = min(raw)
        minimum = Fraction(best, den)
        winners = [t for t, v in enumerate(raw) if v == best]
        evaluated = len(raw)
    argmin = sorted((nets[t] for t in winners), key=lambda net: net.key)
    return OptimizationResult(minimum, argmin, evaluated, n, k)


def minimize_tsp(d: DistanceMatrix, **kw) -> OptimizationResult:
    """Shortest tours: :func:`minimize` with no bridges."""
    return minimize(d, d.n, 0, **kw)


def minimize_bme_tree(d: DistanceMatrix, **kw) -> OptimizationResult:
    """Balanced minimum evolution trees: :func:`minimize` with ``n - 3`` bridges."""
    return minimize(d, d.n, d.n - 3, **kw)


def tour_of(net: Network) -> list[int]:
    return list(net.ordering.seq)


def newick_of(net: Network) -> str:
    """Unrooted Newick string for a tree-shaped network (``k == n - 3``)."""
    from .splits import build_graph

    g = build_graph(net)
    adj = g.adjacency()
    root = adj[1][0]

    def render(v, parent):
        if isinstance(v, int):
            return str(v)
        kids = [render(w, v) for w in adj[v] if w != parent]
        return "(" + ",".join(sorted(kids)) + ")"

    return render(root, None) + ";"
