"""Weighted split systems, split metrics, and circular (Kalmanson) decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional

import numpy as np

from . import _kernels
from .errors import (
    AmbientMismatch,
    BmeNetError,
    NotKalmanson,
    TooLarge,
    UnweightedGraph,
)
from .splits import (
    CircularOrdering,
    Network,
    PhyloGraph,
    Split,
    SplitSystem,
    _as_ordering,
    _is_arc_mask,
    arc_splits,
    split_system,
    trivial_splits,
)
from .vectors import network_vector, pair_index, pairs


class NegativeWeight(BmeNetError):
    pass


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric nonnegative dissimilarities on ``1..n``, stored for ``i < j``."""

    n: int
    entries: tuple
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.entries)
        if len(values) != self.n * (self.n - 1) // 2:
            raise AmbientMismatch(f"expected {self.n * (self.n - 1) // 2} entries, got {len(values)}")
        if any(v < 0 for v in values):
            raise NegativeWeight("distances must be nonnegative")
        object.__setattr__(self, "entries", values)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(0)
        return self.entries[pair_index(self.n)[(i, j)]]

    def __eq__(self, other):
        return isinstance(other, DistanceMatrix) and (self.n, self.entries) == (other.n, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries))

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def from_function(cls, n: int, f) -> "DistanceMatrix":
        return cls(n, tuple(Fraction(f(i, j)) for i, j in pairs(n)))

    @classmethod
    def zero(cls, n: int) -> "DistanceMatrix":
        return cls(n, (Fraction(0),) * (n * (n - 1) // 2))

    def scaled(self, alpha) -> "DistanceMatrix":
        alpha = Fraction(alpha)
        return DistanceMatrix(self.n, tuple(alpha * v for v in self.entries), self.labels)

    def denominator(self) -> int:
        return lcm(1, *(v.denominator for v in self.entries))

    def integer_entries(self) -> tuple[list[int], int]:
        """Entries times their common denominator ``L``, and ``L``."""
        den = self.denominator()
        return [int(v * den) for v in self.entries], den

    def square_int(self) -> tuple[np.ndarray, int]:
        """``(n+1, n+1)`` int64 matrix indexed by taxon label, and the scale."""
        ints, den = self.integer_entries()
        if max(ints, default=0) >= 2 ** 61:
            raise OverflowError("distances too large for the int64 kernels")
        sq = np.zeros((self.n + 1, self.n + 1), dtype=np.int64)
        for (i, j), v in zip(pairs(self.n), ints):
            sq[i, j] = sq[j, i] = v
        return sq, den


@dataclass(frozen=True, eq=False)
class WeightedSplitSystem:
    """Split weights on ``1..n``.

    Nontrivial splits of weight zero are dropped; every trivial split is kept,
    possibly at weight zero.
    """

    n: int
    weights: Mapping
    ordering: Optional[CircularOrdering] = None

    def __eq__(self, other):
        return isinstance(other, WeightedSplitSystem) and self.n == other.n and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.n, frozenset(self.weights.items())))

    @property
    def system(self) -> SplitSystem:
        return SplitSystem(self.n, frozenset(self.weights), self.ordering)

    def items(self):
        return sorted(self.weights.items())

    def __repr__(self):
        body = ", ".join(f"{list(s.part)}: {w}" for s, w in self.items())
        return f"WeightedSplitSystem(n={self.n}, {{{body}}})"


def weighted_split_system(n: int, weights: Mapping, ordering=None) -> WeightedSplitSystem:
    """Normalise ``weights`` (``Split -> rational``) into a :class:`WeightedSplitSystem`."""
    out = {}
    for s, w in weights.items():
        if s.n != n:
            raise AmbientMismatch(f"{s!r} is not on 1..{n}")
        w = Fraction(w)
        if w < 0:
            raise NegativeWeight(f"{s!r} has negative weight {w}")
        if w > 0 or s.is_trivial:
            out[s] = out.get(s, Fraction(0)) + w
    for t in trivial_splits(n):
        out.setdefault(t, Fraction(0))
    if ordering is not None:
        ordering = _as_ordering(ordering)
        split_system(n, out, ordering)  # arc validation
    return WeightedSplitSystem(n, dict(sorted(out.items())), ordering)


def unit_weights(system) -> WeightedSplitSystem:
    """Every split of ``system`` (a :class:`SplitSystem` or iterable with ``.n``) at weight 1."""
    return weighted_split_system(system.n, {s: 1 for s in system.splits}, system.ordering)


def metric_from_splits(ws: WeightedSplitSystem) -> DistanceMatrix:
    """``d_ij`` = total weight of splits separating ``i`` and ``j``."""
    n = ws.n
    vals = []
    for i, j in pairs(n):
        vals.append(sum((w for s, w in ws.weights.items() if s.separates(i, j)), Fraction(0)))
    return DistanceMatrix(n, tuple(vals))


def total_weight(ws: WeightedSplitSystem) -> Fraction:
    return sum(ws.weights.values(), Fraction(0))


def network_length(net: Network, d: DistanceMatrix) -> Fraction:
    """Exact dot product of the network's vertex vector with ``d``."""
    if net.n != d.n:
        raise AmbientMismatch(f"network on {net.n} taxa, matrix on {d.n}")
    return sum((x * v for x, v in zip(network_vector(net), d.entries)), Fraction(0))


def kalmanson_check(d: DistanceMatrix, c) -> bool:
    """True iff every quadruple in ``c``-order satisfies the Kalmanson inequalities."""
    c = _as_ordering(c)
    if c.n != d.n:
        raise AmbientMismatch(f"ordering on {c.n} taxa, matrix on {d.n}")
    s, n = c.seq, c.n
    for a in range(n):
        for b in range(a + 1, n):
            for e in range(b + 1, n):
                for f in range(e + 1, n):
                    i, j, k, l = s[a], s[b], s[e], s[f]
                    cross = d[i, k] + d[j, l]
                    if d[i, j] + d[k, l] > cross or d[j, k] + d[i, l] > cross:
                        return False
    return True


def isolation_weight(d: DistanceMatrix, c, p: int, q: int) -> Fraction:
    """Circular decomposition weight of the arc at positions ``p..q`` of ``c`` (cyclic)."""
    s, n = _as_ordering(c).seq, d.n
    at = lambda t: s[t % n]
    return Fraction(1, 2) * (
        d[at(p - 1), at(q)] + d[at(p), at(q + 1)] - d[at(p - 1), at(q + 1)] - d[at(p), at(q)]
    )


def kalmanson_decompose(d: DistanceMatrix, c) -> WeightedSplitSystem:
    """The unique weighted circular split system on ``c`` whose metric is ``d``.

    Raises :class:`NotKalmanson` when a weight comes out negative or the
    recovered metric differs from ``d``.
    """
    c = _as_ordering(c)
    if c.n != d.n:
        raise AmbientMismatch(f"ordering on {c.n} taxa, matrix on {d.n}")
    n, pos = c.n, {x: t for t, x in enumerate(c.seq)}
    weights = {}
    for s in arc_splits(c):
        side = s.complement if s.contains(c.seq[0]) else s.part
        ps = sorted(pos[t] for t in side)
        w = isolation_weight(d, c, ps[0], ps[-1])
        if w < 0:
            raise NotKalmanson(f"negative weight {w} on {s!r}")
        weights[s] = w
    ws = weighted_split_system(n, weights, c)
    if metric_from_splits(ws) != d:
        raise NotKalmanson("decomposition does not reproduce the metric")
    return ws


def shortest_path_metric(g: PhyloGraph) -> DistanceMatrix:
    """Least total edge weight between each pair of leaves."""
    if not g.weighted:
        raise UnweightedGraph("every edge needs a weight")
    nodes = list(g.nodes)
    idx = {v: t for t, v in enumerate(nodes)}
    inf = None
    dist = [[inf] * len(nodes) for _ in nodes]
    for t in range(len(nodes)):
        dist[t][t] = Fraction(0)
    for u, v, w in g.edges:
        a, b = idx[u], idx[v]
        if dist[a][b] is None or w < dist[a][b]:
            dist[a][b] = dist[b][a] = Fraction(w)
    for m in range(len(nodes)):
        row_m = dist[m]
        for a in range(len(nodes)):
            dam = dist[a][m]
            if dam is None:
                continue
            row_a = dist[a]
            for b in range(len(nodes)):
                dmb = row_m[b]
                if dmb is not None and (row_a[b] is None or dam + dmb < row_a[b]):
                    row_a[b] = dam + dmb
    return DistanceMatrix(g.n, tuple(dist[idx[i]][idx[j]] for i, j in pairs(g.n)))


def find_consistent_ordering(d: DistanceMatrix) -> Optional[CircularOrdering]:
    """Lexicographically least canonical ordering under which ``d`` is Kalmanson."""
    from .enumeration import canonical_orderings

    if d.n > 9:
        raise TooLarge(f"brute-force ordering search is limited to n <= 9, got {d.n}")
    orders = canonical_orderings(d.n)
    sq, _ = d.square_int()
    ok = np.flatnonzero(_kernels.kalmanson_mask(orders, sq))
    if len(ok) == 0:
        return None
    return CircularOrdering._trusted(tuple(int(x) for x in orders[ok[0]]))


def circular_system_network(ws) -> Network:
    """A network on ``ws.ordering`` whose displayed splits include all of ``ws``.

    Its bridges are the nontrivial splits compatible with every other split.
    """
    from .splits import make_network

    system = ws.system if isinstance(ws, WeightedSplitSystem) else ws
    if system.ordering is None:
        raise BmeNetError("a witness ordering is required")
    return make_network(system.ordering, system.bridges())
