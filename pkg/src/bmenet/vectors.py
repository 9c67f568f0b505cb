"""Vertex vectors of networks and tours.

Vectors are tuples of :class:`~fractions.Fraction` with one entry per pair
``(i, j)``, ``i < j``, in lexicographic order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import NotABridge, SameTaxon
from .splits import (
    CircularOrdering,
    Network,
    Split,
    Subdivision,
    _as_ordering,
    consistent_orderings,
    make_network,
    twist,
)

RationalVector = tuple  # of Fraction, length n(n-1)/2


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    for t, (i, j) in enumerate(pairs(n)):
        idx[(i, j)] = idx[(j, i)] = t
    return idx


@lru_cache(maxsize=None)
def pair_index_array(n: int) -> np.ndarray:
    """``(n+1, n+1)`` lookup from taxon labels to pair position; diagonal is -1."""
    arr = np.full((n + 1, n + 1), -1, dtype=np.int64)
    for (i, j), t in pair_index(n).items():
        arr[i, j] = t
    return arr


def as_vector(values: Sequence) -> RationalVector:
    return tuple(Fraction(v) for v in values)


def incidence_vector(c) -> RationalVector:
    """0/1 vector marking the ``n`` adjacent pairs of the tour ``c``."""
    c = _as_ordering(c)
    idx = pair_index(c.n)
    out = [Fraction(0)] * len(pairs(c.n))
    for i, j in c.adjacent_pairs():
        out[idx[(i, j)]] = Fraction(1)
    return tuple(out)


def bridge_count_between(net: Network, i: int, j: int) -> int:
    """Number of bridges separating taxa ``i`` and ``j``."""
    if i == j:
        raise SameTaxon(f"taxon {i} paired with itself")
    return sum(b.separates(i, j) for b in net.bridges)


def network_vector(net: Network) -> RationalVector:
    """Closed form: ``2**(k - b_ij)`` where ``i, j`` can be adjacent, else 0."""
    sub = Subdivision(net.ordering.seq, net.bridges)
    k = net.k
    out = []
    for i, j in pairs(net.n):
        if sub.can_be_adjacent(i, j):
            out.append(Fraction(2 ** (k - bridge_count_between(net, i, j))))
        else:
            out.append(Fraction(0))
    return tuple(out)


def network_vector_by_orbit(net: Network) -> RationalVector:
    """Sum of incidence vectors over the consistent orderings of ``net``."""
    total = [0] * len(pairs(net.n))
    idx = pair_index(net.n)
    for c in consistent_orderings(net):
        for p in c.adjacent_pairs():
            total[idx[p]] += 1
    return tuple(Fraction(v) for v in total)


def twist_decompose(net: Network, bridge: Split) -> tuple[Network, Network]:
    """Split ``net`` at ``bridge`` into two ``k - 1`` bridge networks.

    The first keeps the reference drawing, the second the drawing twisted at
    ``bridge``; both drop ``bridge``.  Their vectors sum to ``x(net)``.  The
    pair comes back sorted by canonical key.
    """
    if bridge not in net.bridges:
        raise NotABridge(f"{bridge!r} is not a bridge of {net!r}")
    rest = net.bridges - {bridge}
    first = make_network(CircularOrdering(net.ordering.seq), rest)
    second = make_network(CircularOrdering(twist(net, bridge)), rest)
    return tuple(sorted((first, second)))


def vector_add(u: RationalVector, v: RationalVector) -> RationalVector:
    return tuple(a + b for a, b in zip(u, v))


def vector_scale(u: RationalVector, alpha) -> RationalVector:
    alpha = Fraction(alpha)
    return tuple(alpha * a for a in u)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def degree_sums(x: Sequence, n: int) -> list[Fraction]:
    """Per-leaf sums ``sum_{i != j} x_ij`` for ``j = 1..n``."""
    sums = [Fraction(0)] * n
    for (i, j), v in zip(pairs(n), x):
        sums[i - 1] += v
        sums[j - 1] += v
    return sums


def tree_vector_by_path(net: Network) -> RationalVector:
    """Tree specialisation ``2**(n - 2 - l_ij)``; ``l_ij`` counts internal nodes on the path.

    Only meaningful when ``k == n - 3``; used as an independent check.
    """
    from .splits import build_graph  # local: graph machinery only needed here

    g = build_graph(net)
    adj = g.adjacency()
    out = []
    for i, j in pairs(net.n):
        prev = {i: None}
        frontier = [i]
        while j not in prev:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in prev:
                        prev[w] = u
                        nxt.append(w)
            frontier = nxt
        internal, v = 0, prev[j]
        while v != i:
            internal += 1
            v = prev[v]
        out.append(Fraction(2 ** (net.n - 2 - internal)))
    return tuple(out)
