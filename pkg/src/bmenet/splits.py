"""Taxa, circular orderings, splits, and binary level-1 networks.

Taxa are the integers ``1..n``.  A split is stored as a bitmask of the side
that does *not* contain taxon 1 (bit ``t - 1`` set for taxon ``t``), so
``A|B`` and ``B|A`` share one representation.  A network is a circular
ordering together with a set of pairwise compatible, nontrivial arc splits
(its bridges), stored as the lexicographically least member of its twist
class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    AmbientMismatch,
    CrossingBridges,
    InvalidSplit,
    NotABridge,
    NotAPermutation,
    NotAnArc,
    TooManyBridges,
    TrivialBridge,
    WeightSystemMismatch,
)

# ---------------------------------------------------------------------------
# circular orderings
# ---------------------------------------------------------------------------


def _canonical_tuple(seq: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the smallest label leads, then orient toward its smaller neighbour."""
    n = len(seq)
    first = min(seq)
    r = list(seq).index(first)
    rot = tuple(seq[r:]) + tuple(seq[:r])
    if n > 2 and rot[1] > rot[-1]:
        rot = (rot[0],) + rot[:0:-1]
    return rot


def _validate_perm(seq: Sequence[int]) -> tuple[int, ...]:
    try:
        seq = tuple(int(x) for x in seq)
    except (TypeError, ValueError) as exc:
        raise NotAPermutation(f"ordering entries must be integers: {seq!r}") from exc
    n = len(seq)
    if n < 3:
        raise NotAPermutation(f"need at least 3 taxa, got {n}")
    if sorted(seq) != list(range(1, n + 1)):
        raise NotAPermutation(f"{seq!r} is not a permutation of 1..{n}")
    return seq


@dataclass(frozen=True)
class CircularOrdering:
    """A cyclic arrangement of ``1..n`` up to rotation and reflection.

    The stored ``seq`` is canonical: it starts at taxon 1 and continues toward
    the smaller of taxon 1's two neighbours.
    """

    seq: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", _canonical_tuple(_validate_perm(self.seq)))

    @classmethod
    def _trusted(cls, seq: tuple[int, ...]) -> "CircularOrdering":
        obj = object.__new__(cls)
        object.__setattr__(obj, "seq", seq)
        return obj

    @property
    def n(self) -> int:
        return len(self.seq)

    def __lt__(self, other: "CircularOrdering") -> bool:
        return self.seq < other.seq

    def __iter__(self):
        return iter(self.seq)

    def __len__(self):
        return len(self.seq)

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        s, n = self.seq, len(self.seq)
        return sorted(tuple(sorted((s[t], s[(t + 1) % n]))) for t in range(n))


def canonicalize_ordering(seq: Sequence[int]) -> CircularOrdering:
    """Return the canonical representative of ``seq``'s rotation/reflection class."""
    if isinstance(seq, CircularOrdering):
        return seq
    return CircularOrdering(tuple(seq))


def _as_ordering(c) -> CircularOrdering:
    return c if isinstance(c, CircularOrdering) else canonicalize_ordering(c)


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------

_SPLITS: dict[tuple[int, int], "Split"] = {}


@dataclass(frozen=True)
class Split:
    """An unordered bipartition of ``1..n``.

    ``mask`` holds the side without taxon 1.  Use :meth:`from_part` to build
    one from either side.
    """

    mask: int
    n: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.n < 3:
            raise InvalidSplit(f"ambient n must be >= 3, got {self.n}")
        if self.mask & 1 or self.mask <= 0 or self.mask & ~full:
            raise InvalidSplit(f"mask {self.mask:#b} is not a canonical proper part of 1..{self.n}")

    @classmethod
    def of_mask(cls, mask: int, n: int) -> "Split":
        key = (mask, n)
        s = _SPLITS.get(key)
        if s is None:
            s = _SPLITS[key] = cls(mask, n)
        return s

    @classmethod
    def from_part(cls, part: Iterable[int], n: int) -> "Split":
        mask = 0
        for t in part:
            t = int(t)
            if not 1 <= t <= n:
                raise InvalidSplit(f"taxon {t} outside 1..{n}")
            mask |= 1 << (t - 1)
        full = (1 << n) - 1
        if mask == 0 or mask == full:
            raise InvalidSplit("a split part must be nonempty and proper")
        if mask & 1:
            mask = full ^ mask
        return cls.of_mask(mask, n)

    @property
    def part(self) -> tuple[int, ...]:
        return tuple(t for t in range(2, self.n + 1) if self.mask >> (t - 1) & 1)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(t for t in range(1, self.n + 1) if not self.mask >> (t - 1) & 1)

    @property
    def size(self) -> int:
        """Size of the smaller side."""
        a = bin(self.mask).count("1")
        return min(a, self.n - a)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    def contains(self, taxon: int) -> bool:
        """True when ``taxon`` is on the canonical (non-1) side."""
        return bool(self.mask >> (taxon - 1) & 1)

    def separates(self, i: int, j: int) -> bool:
        return bool((self.mask >> (i - 1) ^ self.mask >> (j - 1)) & 1)

    def side_of(self, taxon: int) -> tuple[int, ...]:
        return self.part if self.contains(taxon) else self.complement

    def sort_key(self) -> tuple[int, ...]:
        return self.part

    def __lt__(self, other: "Split") -> bool:
        return (self.n, self.part) < (other.n, other.part)

    def __repr__(self):
        return f"Split({set(self.part)}|{set(self.complement)})"


def trivial_splits(n: int) -> list[Split]:
    return [Split.from_part([t], n) for t in range(1, n + 1)]


def _same_n(*objs) -> int:
    ns = {o.n for o in objs}
    if len(ns) != 1:
        raise AmbientMismatch(f"ambient taxon counts differ: {sorted(ns)}")
    return ns.pop()


def _compatible_masks(a: int, b: int, full: int) -> bool:
    ac, bc = full ^ a, full ^ b
    return not (a & b and a & bc and ac & b and ac & bc)


def splits_compatible(a: Split, b: Split) -> bool:
    """True iff at least one of the four part intersections is empty."""
    n = _same_n(a, b)
    return _compatible_masks(a.mask, b.mask, (1 << n) - 1)


def _is_arc_mask(mask: int, seq: Sequence[int]) -> bool:
    n = len(seq)
    bits = [mask >> (x - 1) & 1 for x in seq]
    return sum(bits[t] != bits[(t + 1) % n] for t in range(n)) == 2


def is_arc(split: Split, c) -> bool:
    """True iff each side of ``split`` is cyclically contiguous in ``c``."""
    c = _as_ordering(c)
    _same_n(split, c)
    return _is_arc_mask(split.mask, c.seq)


def arc_splits(c) -> list[Split]:
    """All splits whose parts are arcs of ``c`` (trivial ones included)."""
    c = _as_ordering(c)
    n, seq = c.n, c.seq
    full = (1 << n) - 1
    found = set()
    for start in range(n):
        mask = 0
        for length in range(1, n):
            mask |= 1 << (seq[(start + length - 1) % n] - 1)
            found.add(full ^ mask if mask & 1 else mask)
    return sorted(Split.of_mask(m, n) for m in found)


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------


def _twist_seq(seq: tuple[int, ...], mask: int) -> tuple[int, ...]:
    """Reverse one side of an arc split inside the raw drawing ``seq``.

    The side holding ``seq[0]`` is reversed when it is a prefix, otherwise the
    other side (then an interior block) is.  Applying this twice is the identity.
    """
    n = len(seq)
    inside = [bool(mask >> (x - 1) & 1) for x in seq]
    lead = inside[0]
    same = [b == lead for b in inside]
    q = 0
    while q + 1 < n and same[q + 1]:
        q += 1
    if not any(same[q + 1:]):
        return seq[q::-1] + seq[q + 1:]
    lo = q + 1
    hi = lo
    while hi + 1 < n and not same[hi + 1]:
        hi += 1
    return seq[:lo] + seq[hi:lo - 1:-1] + seq[hi + 1:]


def _orbit(seq: tuple[int, ...], masks: Sequence[int]) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Map canonical form -> one raw drawing, over all compositions of bridge twists."""
    start = tuple(seq)
    seen = {_canonical_tuple(start): start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for m in masks:
            nxt = _twist_seq(cur, m)
            key = _canonical_tuple(nxt)
            if key not in seen:
                seen[key] = nxt
                queue.append(nxt)
    return seen


# ---------------------------------------------------------------------------
# networks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Network:
    """A binary level-1 network: a canonical ordering plus its bridge splits.

    Build instances with :func:`make_network`; the constructor trusts its input.
    """

    ordering: CircularOrdering
    bridges: frozenset = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return self.ordering.n

    @property
    def k(self) -> int:
        return len(self.bridges)

    @property
    def sorted_bridges(self) -> list[Split]:
        return sorted(self.bridges)

    @property
    def key(self) -> tuple:
        return (self.ordering.seq, tuple(b.part for b in self.sorted_bridges))

    def __lt__(self, other: "Network") -> bool:
        return self.key < other.key

    def __repr__(self):
        bridges = [list(b.part) for b in self.sorted_bridges]
        return f"Network({list(self.ordering.seq)}, bridges={bridges})"


def make_network(c, bridges: Iterable[Split] = ()) -> Network:
    """Return the canonical network of the twist class containing ``(c, bridges)``."""
    c = _as_ordering(c)
    bridges = list(bridges)
    n = c.n
    for b in bridges:
        _same_n(b, c)
        if b.size < 2:
            raise TrivialBridge(f"{b!r} is trivial")
    bridges = list(dict.fromkeys(bridges))
    if len(bridges) > max(n - 3, 0):
        raise TooManyBridges(f"{len(bridges)} bridges exceed n - 3 = {n - 3}")
    for i, a in enumerate(bridges):
        for b in bridges[i + 1:]:
            if not splits_compatible(a, b):
                raise CrossingBridges(f"{a!r} and {b!r} are incompatible")
    for b in bridges:
        if not _is_arc_mask(b.mask, c.seq):
            raise NotAnArc(f"{b!r} is not an arc of {c.seq}")
    orbit = _orbit(c.seq, [b.mask for b in bridges])
    return Network(CircularOrdering._trusted(min(orbit)), frozenset(bridges))


def twist(net: Network, bridge: Split) -> tuple[int, ...]:
    """Drawing obtained from ``net.ordering`` by reflecting one side of ``bridge``."""
    if bridge not in net.bridges:
        raise NotABridge(f"{bridge!r} is not a bridge of {net!r}")
    return _twist_seq(net.ordering.seq, bridge.mask)


def consistent_orderings(net: Network) -> list[CircularOrdering]:
    """The ``2**k`` circular orderings consistent with ``net``, sorted."""
    orbit = _orbit(net.ordering.seq, [b.mask for b in net.bridges])
    return [CircularOrdering._trusted(s) for s in sorted(orbit)]


def displays_split(net: Network, s: Split) -> bool:
    _same_n(net, s)
    if s.is_trivial:
        return True
    full = (1 << net.n) - 1
    if not all(_compatible_masks(s.mask, b.mask, full) for b in net.bridges):
        return False
    return _is_arc_mask(s.mask, net.ordering.seq)


@dataclass(frozen=True)
class SplitSystem:
    """A set of splits on ``1..n`` that includes every trivial split."""

    n: int
    splits: frozenset
    ordering: Optional[CircularOrdering] = None

    def __iter__(self):
        return iter(sorted(self.splits))

    def __len__(self):
        return len(self.splits)

    def __contains__(self, s):
        return s in self.splits

    @property
    def nontrivial(self) -> list[Split]:
        return sorted(s for s in self.splits if not s.is_trivial)

    def bridges(self) -> list[Split]:
        """Nontrivial splits compatible with every other split of the system."""
        full = (1 << self.n) - 1
        nt = self.nontrivial
        return [a for a in nt if all(_compatible_masks(a.mask, b.mask, full) for b in nt)]


def split_system(n: int, splits: Iterable[Split] = (), ordering=None) -> SplitSystem:
    """Build a :class:`SplitSystem`, adding the trivial splits.

    When ``ordering`` is given every split must be an arc of it.
    """
    splits = set(splits)
    for s in splits:
        if s.n != n:
            raise AmbientMismatch(f"{s!r} is not on 1..{n}")
    splits.update(trivial_splits(n))
    if ordering is not None:
        ordering = _as_ordering(ordering)
        _same_n(ordering, *splits)
        for s in splits:
            if not _is_arc_mask(s.mask, ordering.seq):
                raise NotAnArc(f"{s!r} is not an arc of {ordering.seq}")
    return SplitSystem(n, frozenset(splits), ordering)


def sigma_splits(net: Network) -> SplitSystem:
    """All splits displayed by ``net``; circular with witness ``net.ordering``."""
    full = (1 << net.n) - 1
    masks = [b.mask for b in net.bridges]
    shown = [
        s for s in arc_splits(net.ordering)
        if s.is_trivial or all(_compatible_masks(s.mask, m, full) for m in masks)
    ]
    return SplitSystem(net.n, frozenset(shown), net.ordering)


def refines(net: Network, s: SplitSystem) -> bool:
    _same_n(net, s)
    return all(displays_split(net, x) for x in s.splits)


# ---------------------------------------------------------------------------
# polygon subdivision
# ---------------------------------------------------------------------------


class Subdivision:
    """Regions cut out of the side-labelled polygon by the bridge diagonals.

    Side ``p`` of the polygon carries taxon ``seq[p]``.  Each bridge becomes the
    interval of positions on its side away from ``seq[0]``; the intervals are
    laminar.  Region 0 is the outer region; region ``r >= 1`` lies inside
    interval ``r - 1``.  A region's boundary is a cyclic list of elements,
    ``("side", p)`` or ``("chord", r)`` with ``r`` the region enclosed by the
    chord.  Interval regions list their closing chord last.
    """

    def __init__(self, seq: Sequence[int], bridges: Iterable[Split]):
        self.seq = tuple(seq)
        n = self.n = len(self.seq)
        pos = {x: p for p, x in enumerate(self.seq)}
        self.pos = pos
        lead = self.seq[0]
        intervals = []
        for b in bridges:
            side = b.complement if b.contains(lead) else b.part
            ps = sorted(pos[t] for t in side)
            if ps[-1] - ps[0] != len(ps) - 1:
                raise NotAnArc(f"{b!r} is not an arc of {self.seq}")
            intervals.append((ps[0], ps[-1], b))
        intervals.sort(key=lambda iv: (iv[0], -iv[1]))
        self.intervals = intervals
        self.bridge_region = {iv[2]: r + 1 for r, iv in enumerate(intervals)}
        nreg = len(intervals) + 1
        self.parent = [None] * nreg
        # smallest enclosing interval; the sort puts enclosing intervals first
        for r, (lo, hi, _) in enumerate(intervals):
            for q in range(r - 1, -1, -1):
                plo, phi, _ = intervals[q]
                if plo <= lo and hi <= phi:
                    self.parent[r + 1] = q + 1
                    break
            else:
                self.parent[r + 1] = 0
        self.elements: list[list[tuple[str, int]]] = [[] for _ in range(nreg)]
        self.spans: list[list[tuple[int, int]]] = [[] for _ in range(nreg)]
        self.side_at: dict[int, tuple[int, int]] = {}
        self.chord_outer: dict[int, tuple[int, int]] = {}
        starts = {}
        for r, (lo, hi, _) in enumerate(intervals):
            starts.setdefault((self.parent[r + 1], lo), r + 1)
        for region in range(nreg):
            if region == 0:
                t, end = 0, n - 1
            else:
                t, end = intervals[region - 1][0], intervals[region - 1][1]
            while t <= end:
                child = starts.get((region, t))
                idx = len(self.elements[region])
                if child is not None:
                    clo, chi, _ = intervals[child - 1]
                    self.elements[region].append(("chord", child))
                    self.spans[region].append((clo, chi))
                    self.chord_outer[child] = (region, idx)
                    t = chi + 1
                else:
                    self.elements[region].append(("side", t))
                    self.spans[region].append((t, t))
                    self.side_at[t] = (region, idx)
                    t += 1
            if region:
                lo, hi, _ = intervals[region - 1]
                self.elements[region].append(("chord", region))
                self.spans[region].append((lo, hi))

    def size(self, region: int) -> int:
        return len(self.elements[region])

    def _ancestors(self, region: int) -> list[int]:
        out = [region]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out

    def region_path(self, i: int, j: int) -> list[tuple[int, int, int]]:
        """``(region, entry, exit)`` element indices along the route from taxon i to j."""
        ra, ia = self.side_at[self.pos[i]]
        rb, ib = self.side_at[self.pos[j]]
        up_a, up_b = self._ancestors(ra), self._ancestors(rb)
        common = set(up_b)
        lca = next(r for r in up_a if r in common)
        a_chain = up_a[: up_a.index(lca) + 1]
        b_chain = up_b[: up_b.index(lca) + 1]
        steps = []
        entry = ia
        for child, region in zip(a_chain, a_chain[1:]):
            steps.append((child, entry, self.size(child) - 1))
            entry = self.chord_outer[child][1]
        down = list(reversed(b_chain))
        for region, child in zip(down, down[1:]):
            steps.append((region, entry, self.chord_outer[child][1]))
            entry = self.size(child) - 1
        steps.append((rb, entry, ib))
        return steps

    def can_be_adjacent(self, i: int, j: int) -> bool:
        """True iff some consistent ordering puts ``i`` next to ``j``."""
        for region, a, b in self.region_path(i, j):
            m = self.size(region)
            if (a - b) % m not in (1, m - 1):
                return False
        return True

    def locate(self, s: Split) -> tuple[int, int, int]:
        """Region and element block ``[t1, t2]`` whose union is one side of ``s``."""
        side = s.complement if s.contains(self.seq[0]) else s.part
        ps = sorted(self.pos[t] for t in side)
        lo, hi = ps[0], ps[-1]
        if hi - lo != len(ps) - 1:
            raise NotAnArc(f"{s!r} is not an arc of {self.seq}")
        region = 0
        for r, (ilo, ihi, _) in enumerate(self.intervals):
            if ilo <= lo and hi <= ihi and (ilo, ihi) != (lo, hi):
                region = r + 1  # later matches are nested deeper
        spans = self.spans[region]
        last = len(spans) - (1 if region else 0)
        t1 = next((t for t in range(last) if spans[t][0] == lo), None)
        t2 = next((t for t in range(last) if spans[t][1] == hi), None)
        if t1 is None or t2 is None:
            raise NotAnArc(f"{s!r} crosses a bridge")
        return region, t1, t2


# ---------------------------------------------------------------------------
# graph realisation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhyloGraph:
    """Leaf-labelled graph; leaves are ints ``1..n``, internal nodes ``"v0", "v1", ...``.

    ``edges`` holds ``(u, v, weight)`` with ``weight`` ``None`` when unweighted.
    ``cuts`` maps each displayed split to the edge indices of its minimal cut.
    """

    n: int
    nodes: tuple
    edges: tuple
    cuts: Mapping = field(default_factory=dict, compare=False, repr=False)

    @property
    def weighted(self) -> bool:
        return all(e[2] is not None for e in self.edges)

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.nodes}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def build_graph(net: Network, weights=None) -> PhyloGraph:
    """Realise ``net`` as a graph: one cycle per region with 4+ boundary elements.

    ``weights`` (a mapping ``Split -> weight`` or a weighted split system) may
    cover any subset of the displayed splits; absent splits weigh zero.  Each
    edge weight is the total weight of splits whose minimal cut uses it.
    """
    sub = Subdivision(net.ordering.seq, net.bridges)
    n = net.n
    nodes: list = list(range(1, n + 1))
    edges: list[tuple] = []
    attach: dict[tuple[int, int], str] = {}
    element_edge: dict[tuple[int, int], int] = {}
    cycle_edge: dict[tuple[int, int], int] = {}
    counter = 0
    for region, elems in enumerate(sub.elements):
        m = len(elems)
        if m >= 4:
            names = [f"v{counter + t}" for t in range(m)]
            counter += m
            for t in range(m):
                cycle_edge[(region, t)] = len(edges)
                edges.append((names[t], names[(t + 1) % m]))
        else:
            names = [f"v{counter}"] * m
            counter += 1
        nodes.extend(dict.fromkeys(names))
        for t in range(m):
            attach[(region, t)] = names[t]
    for region, elems in enumerate(sub.elements):
        for t, (kind, ref) in enumerate(elems):
            if kind == "side":
                element_edge[(region, t)] = len(edges)
                edges.append((attach[(region, t)], sub.seq[ref]))
            elif ref != region:
                inner = (ref, sub.size(ref) - 1)
                element_edge[(region, t)] = element_edge[inner] = len(edges)
                edges.append((attach[(region, t)], attach[inner]))

    def cut_of(s: Split) -> tuple[int, ...]:
        region, t1, t2 = sub.locate(s)
        m = sub.size(region)
        if t1 == t2:
            return (element_edge[(region, t1)],)
        if t2 - t1 == m - 2:
            return (element_edge[(region, (t2 + 1) % m)],)
        return (cycle_edge[(region, (t1 - 1) % m)], cycle_edge[(region, t2)])

    cuts = {s: cut_of(s) for s in sigma_splits(net).splits}

    if weights is None:
        out = tuple((u, v, None) for u, v in edges)
    else:
        wmap = getattr(weights, "weights", weights)
        totals = [Fraction(0)] * len(edges)
        for s, w in wmap.items():
            if s.n != n or s not in cuts:
                raise WeightSystemMismatch(f"{s!r} is not displayed by {net!r}")
            for e in cuts[s]:
                totals[e] += Fraction(w)
        out = tuple((u, v, totals[e]) for e, (u, v) in enumerate(edges))
    return PhyloGraph(n, tuple(nodes), out, cuts)
