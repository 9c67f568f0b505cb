"""Exact checks on the vertex sets of the network polytopes: dimensions, faces, nesting."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice, permutations
from math import lcm
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .enumeration import _check_range, canonical_orderings, enumerate_networks, vertex_set
from .errors import EmptyInput, OutOfRange, TooManyBridgesRequested, TrivialSplit
from .metrics import metric_from_splits, total_weight, unit_weights
from .splits import Network, Split, SplitSystem, consistent_orderings, displays_split, refines
from .vectors import (
    degree_sums,
    incidence_vector,
    network_vector,
    pair_index,
    pairs,
    twist_decompose,
    vector_add,
    vector_scale,
)


@dataclass(frozen=True)
class LinearFunctional:
    """``coeffs . x  (<= | >=)  bound`` over pair-indexed vectors."""

    coeffs: tuple
    bound: Fraction
    sense: str = "<="

    def __post_init__(self):
        if self.sense not in ("<=", ">="):
            raise ValueError(f"sense must be '<=' or '>=', got {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        object.__setattr__(self, "bound", Fraction(self.bound))

    @classmethod
    def from_terms(cls, n: int, terms: dict, bound, sense="<=") -> "LinearFunctional":
        """Build from ``{(i, j): coefficient}``."""
        coeffs = [Fraction(0)] * len(pairs(n))
        idx = pair_index(n)
        for (i, j), c in terms.items():
            coeffs[idx[(i, j)]] += Fraction(c)
        return cls(tuple(coeffs), bound, sense)

    def value(self, x: Sequence) -> Fraction:
        return sum((c * Fraction(v) for c, v in zip(self.coeffs, x) if c), Fraction(0))

    def holds(self, value) -> bool:
        return value <= self.bound if self.sense == "<=" else value >= self.bound

    def values_on(self, mat: np.ndarray) -> list[Fraction]:
        """Exact values on each row of an integer matrix."""
        den = lcm(1, *(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        big = max((abs(v) for v in ints), default=0) * int(np.abs(mat).max(initial=0)) * len(ints)
        if big < 2 ** 62:
            raw = _kernels.row_dots(mat, np.array(ints, dtype=np.int64)).tolist()
        else:
            raw = [sum(int(a) * b for a, b in zip(row, ints)) for row in mat.tolist()]
        return [Fraction(v, den) for v in raw]


@dataclass
class FaceReport:
    family: str
    label: str
    n: int
    k: int
    functional: LinearFunctional
    valid: bool
    tight_vertices: list = field(default_factory=list)
    tight_count: int = 0
    tight_affine_dim: int = -1
    tight_networks: list = field(default_factory=list, repr=False)
    split: Optional[Split] = None


# ---------------------------------------------------------------------------
# exact rank
# ---------------------------------------------------------------------------


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for r in rows:
        r = [Fraction(v) for v in r]
        den = lcm(1, *(v.denominator for v in r))
        out.append([int(v * den) for v in r])
    return out


def exact_rank(rows) -> int:
    """Rank by fraction-free (Bareiss) elimination; pivot is the first nonzero in column order."""
    m = [row for row in _integer_rows(rows) if any(row)]
    if not m:
        return 0
    ncols = len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        pc = p[col]
        keep = m[: rank + 1]
        for r in range(rank + 1, len(m)):
            row = m[r]
            rc = row[col]
            new = [0] * ncols
            for c in range(col + 1, ncols):
                new[c] = (row[c] * pc - rc * p[c]) // prev
            if any(new):
                keep.append(new)
        m = keep
        prev = pc
        rank += 1
        if rank == len(m):
            break
    return rank


def affine_dimension(vectors) -> int:
    """Dimension of the affine hull of ``vectors``."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise EmptyInput("affine dimension of an empty set")
    uniq = list(dict.fromkeys(vectors))
    v0 = uniq[0]
    return exact_rank([[Fraction(a) - Fraction(b) for a, b in zip(v, v0)] for v in uniq[1:]])


def _matrix_affine_dimension(mat: np.ndarray) -> int:
    if len(mat) == 0:
        raise EmptyInput("affine dimension of an empty set")
    uniq = np.unique(mat, axis=0)
    return exact_rank((uniq[1:] - uniq[0]).tolist())


def check_degree_equalities(v: Sequence, n: int, k: int) -> bool:
    """True iff every leaf's pair entries sum to ``2**(k+1)``."""
    target = 2 ** (k + 1)
    return all(s == target for s in degree_sums(v, n))


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------


def face_report(n: int, k: int, functional: LinearFunctional, family: str, label: str) -> FaceReport:
    """Evaluate ``functional`` on every vertex of BME(n, k)."""
    nets, mat = vertex_set(n, k)
    values = functional.values_on(mat)
    valid = all(functional.holds(v) for v in values)
    tight = [t for t, v in enumerate(values) if v == functional.bound]
    dim = _matrix_affine_dimension(mat[tight]) if tight else -1
    return FaceReport(
        family=family,
        label=label,
        n=n,
        k=k,
        functional=functional,
        valid=valid,
        tight_vertices=[nets[t].key for t in tight],
        tight_count=len(tight),
        tight_affine_dim=dim,
        tight_networks=[nets[t] for t in tight],
    )


def polytope_dimension(n: int, k: int) -> int:
    return _matrix_affine_dimension(vertex_set(n, k)[1])


def split_functional(s: Split, k: int, side: Optional[Sequence[int]] = None) -> LinearFunctional:
    if side is None:
        side = s.part if len(s.part) <= len(s.complement) else s.complement
    side = tuple(sorted(side))
    if side not in (s.part, s.complement):
        raise ValueError(f"{side} is not a side of {s!r}")
    terms = {(i, j): 1 for i, j in combinations(side, 2)}
    return LinearFunctional.from_terms(s.n, terms, (len(side) - 1) * 2 ** k, "<=")


def split_face(n: int, k: int, s: Split, side=None) -> FaceReport:
    """Face ``sum_{i,j in A} x_ij <= (|A|-1) 2**k``; its tight set should be the networks displaying ``s``."""
    _check_range(n, k)
    if s.n != n or s.size < 2:
        raise TrivialSplit(f"{s!r} needs both parts of size >= 2")
    f = split_functional(s, k, side)
    rep = face_report(n, k, f, "split", f"{list(s.part)}|{list(s.complement)}")
    rep.split = s
    return rep


def lower_bound_face(n: int, k: int, pair: tuple[int, int]) -> FaceReport:
    """``x_ij >= 0`` for ``k <= n-4``; the caterpillar form ``x_ij >= 1`` at ``k = n-3``."""
    _check_range(n, k)
    i, j = sorted(pair)
    if not 1 <= i < j <= n:
        raise OutOfRange(f"bad pair {pair}")
    if k == n - 3:
        f = LinearFunctional.from_terms(n, {(i, j): 1}, 1, ">=")
        return face_report(n, k, f, "caterpillar", f"x{i},{j}>=1")
    f = LinearFunctional.from_terms(n, {(i, j): 1}, 0, ">=")
    return face_report(n, k, f, "lower", f"x{i},{j}>=0")


def refinement_face(s: SplitSystem, k: int) -> FaceReport:
    """Face ``x . d_s >= 2**(k+1) W(s)`` for unit weights on ``s``.

    Tight exactly at the ``k``-bridge networks refining ``s``.  ``k`` may not
    exceed the bridge count of ``s``, except when ``s`` has only trivial
    splits: every network refines it, so any ``k`` is allowed.
    """
    n = s.n
    _check_range(n, k)
    m = len(s.bridges())
    if k > m and s.nontrivial:
        raise TooManyBridgesRequested(f"k={k} exceeds the {m} bridges of the system")
    ws = unit_weights(s)
    d = metric_from_splits(ws)
    f = LinearFunctional(d.entries, 2 ** (k + 1) * total_weight(ws), ">=")
    label = ";".join(",".join(map(str, x.part)) for x in s.nontrivial)
    return face_report(n, k, f, "refinement", label or "trivial")


def _cyclic_orders_of(items: Sequence[int]) -> list[tuple[int, ...]]:
    first, rest = items[0], items[1:]
    out = []
    for p in permutations(rest):
        if p[0] < p[-1]:
            out.append((first,) + p)
    return out


def bme51_facets() -> list[FaceReport]:
    """The 62 facets of BME(5,1): split, lower bound, excluded node, cyclic order."""
    n, k = 5, 1
    reports = []
    for a, b in pairs(n):
        s = Split.from_part([a, b], n)
        reports.append(face_report(n, k, split_functional(s, k, (a, b)), "split", f"{a},{b}|rest"))
    for a, b in pairs(n):
        reports.append(lower_bound_face(n, k, (a, b)))
    for e in range(1, n + 1):
        four = [t for t in range(1, n + 1) if t != e]
        for cyc in _cyclic_orders_of(four):
            for rot in (cyc, cyc[1:] + cyc[:1]):
                a, b, c, d = rot
                f = LinearFunctional.from_terms(n, {(a, b): 1, (c, d): 1, (a, c): -1, (b, d): -1}, 3, "<=")
                reports.append(face_report(n, k, f, "excluded", f"{a},{b};{c},{d}"))
    for row in canonical_orderings(n).tolist():
        terms = {tuple(sorted((row[t], row[(t + 1) % n]))): 1 for t in range(n)}
        f = LinearFunctional.from_terms(n, terms, 8, "<=")
        reports.append(face_report(n, k, f, "cyclic", ",".join(map(str, row))))
    return reports


def bme_tree_facets(n: int) -> list[FaceReport]:
    """Caterpillar, intersecting-cherry and split facets (both parts >= 3) of BME(n, n-3)."""
    if n < 5:
        raise OutOfRange(f"tree facet families need n >= 5, got {n}")
    k = n - 3
    reports = [lower_bound_face(n, k, p) for p in pairs(n)]
    for b in range(1, n + 1):
        others = [t for t in range(1, n + 1) if t != b]
        for a, c in combinations(others, 2):
            f = LinearFunctional.from_terms(n, {(a, b): 1, (b, c): 1, (a, c): -1}, 2 ** (n - 3), "<=")
            reports.append(face_report(n, k, f, "cherry", f"{a},{b},{c}"))
    full = (1 << n) - 1
    for mask in range(2, full, 2):
        s = Split.of_mask(mask, n)
        if s.size >= 3:
            reports.append(split_face(n, k, s))
    return reports


# ---------------------------------------------------------------------------
# nesting
# ---------------------------------------------------------------------------


def nesting_violations(net: Network) -> list[str]:
    """Failures of the midpoint and barycenter identities at ``net`` (empty when all hold)."""
    problems = []
    x = network_vector(net)
    orbit = set(consistent_orderings(net))
    for b in net.sorted_bridges:
        s1, s2 = twist_decompose(net, b)
        if vector_scale(vector_add(vector_scale(network_vector(s1), 2), vector_scale(network_vector(s2), 2)), Fraction(1, 2)) != x:
            problems.append(f"{net!r}: midpoint fails at {b!r}")
        o1, o2 = set(consistent_orderings(s1)), set(consistent_orderings(s2))
        if o1 & o2 or (o1 | o2) != orbit:
            problems.append(f"{net!r}: sub-orbits do not partition at {b!r}")
    scale = 2 ** net.k
    total = [Fraction(0)] * len(x)
    for c in orbit:
        total = vector_add(total, vector_scale(incidence_vector(c), scale))
    if vector_scale(total, Fraction(1, scale)) != x:
        problems.append(f"{net!r}: barycenter identity fails")
    return problems


def verify_nesting(n: int, k: int) -> bool:
    """Check both nesting identities on every vertex of BME(n, k), ``k >= 1``."""
    _check_range(n, k)
    if k < 1:
        raise OutOfRange("nesting needs k >= 1")
    return all(not nesting_violations(net) for net in enumerate_networks(n, k))


# ---------------------------------------------------------------------------
# vertices from inequalities
# ---------------------------------------------------------------------------


def degree_equalities(n: int, k: int) -> list[LinearFunctional]:
    """Per-leaf sums ``sum_i x_ij = 2**(k+1)`` written as ``<=`` functionals (used as equalities)."""
    return [
        LinearFunctional.from_terms(n, {tuple(sorted((i, j))): 1 for i in range(1, n + 1) if i != j}, 2 ** (k + 1))
        for j in range(1, n + 1)
    ]


def _as_upper(f: LinearFunctional) -> tuple[list[int], int]:
    """Integer row and bound of ``f`` rewritten as ``<=``."""
    sign = 1 if f.sense == "<=" else -1
    den = lcm(f.bound.denominator, *(c.denominator for c in f.coeffs))
    return [int(sign * c * den) for c in f.coeffs], int(sign * f.bound * den)


def solve_exact(rows, rhs) -> Optional[tuple]:
    """Unique solution of a square rational system, or None if singular."""
    m = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    size = len(m)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col]
        for r in range(size):
            if r != col and m[r][col]:
                factor = m[r][col] / p[col]
                m[r] = [a - factor * b for a, b in zip(m[r], p)]
    return tuple(m[r][size] / m[r][r] for r in range(size))


def basic_feasible_points(
    inequalities: Sequence[LinearFunctional],
    equalities: Sequence[LinearFunctional],
    chunk: int = 200_000,
) -> list[tuple]:
    """Every point where the equalities and some subset of inequalities meet in a single feasible point.

    Candidate subsets are screened in floating point in batches; each surviving
    point is then re-solved and checked for feasibility in exact arithmetic.
    Equalities must be linearly independent.
    """
    eq = [_as_upper(f) for f in equalities]
    ineq = [_as_upper(f) for f in inequalities]
    dim = len(ineq[0][0])
    need = dim - len(eq)
    if exact_rank([r for r, _ in eq]) != len(eq):
        raise ValueError("equalities are linearly dependent")
    a_eq = np.array([r for r, _ in eq], dtype=float).reshape(len(eq), dim)
    b_eq = np.array([b for _, b in eq], dtype=float).reshape(len(eq))
    a_in = np.array([r for r, _ in ineq], dtype=float)
    b_in = np.array([b for _, b in ineq], dtype=float)
    combos = combinations(range(len(ineq)), need)
    found: dict[tuple, tuple] = {}
    while True:
        block = np.fromiter((i for c in islice(combos, chunk) for i in c), dtype=np.int64)
        if block.size == 0:
            break
        idx = block.reshape(-1, need)
        mats = np.concatenate([np.broadcast_to(a_eq, (len(idx),) + a_eq.shape), a_in[idx]], axis=1)
        rhs = np.concatenate([np.broadcast_to(b_eq, (len(idx), len(eq))), b_in[idx]], axis=1)
        # integer matrices: a nonzero determinant has magnitude at least 1
        ok = np.abs(np.linalg.det(mats)) > 0.5
        if not ok.any():
            continue
        pts = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
        feasible = (pts @ a_in.T <= b_in + 1e-7).all(axis=1)
        for sub, p in zip(idx[ok][feasible], pts[feasible]):
            key = tuple(np.round(p, 6))
            if key not in found:
                found[key] = tuple(sub)
    out = set()
    for sub in found.values():
        rows = [r for r, _ in eq] + [ineq[t][0] for t in sub]
        rhs = [b for _, b in eq] + [ineq[t][1] for t in sub]
        x = solve_exact(rows, rhs)
        if x is not None and all(sum(c * v for c, v in zip(r, x)) <= b for r, b in ineq):
            out.add(x)
    return sorted(out)

