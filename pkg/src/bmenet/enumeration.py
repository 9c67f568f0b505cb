"""Counting and exhaustive generation of binary level-1 networks.

Generation walks canonical orderings in lexicographic order and, for each
set of noncrossing diagonals of the fixed side-labelled polygon, keeps the
pair only when the ordering is the least member of its twist orbit.  The
orbit test runs over all orderings at once in :mod:`bmenet._kernels`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .errors import OutOfRange
from .splits import CircularOrdering, Network, Split, _compatible_masks, _orbit
from .vectors import pair_index_array


def _check_range(n: int, k: int) -> None:
    if n < 3 or not 0 <= k <= n - 3:
        raise OutOfRange(f"need n >= 3 and 0 <= k <= n - 3, got n={n}, k={k}")


def double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def associahedron_face_count(n: int, k: int) -> int:
    """Number of ``k``-element noncrossing diagonal sets of a fixed ``n``-gon."""
    _check_range(n, k)
    num = comb(n - 3, k) * comb(n + k - 1, k)
    assert num % (k + 1) == 0
    return num // (k + 1)


def network_count(n: int, k: int) -> int:
    """Number of binary level-1 networks with ``n`` leaves and ``k`` bridges."""
    _check_range(n, k)
    num = comb(n - 3, k) * factorial(n + k - 1)
    den = double_factorial(2 * k + 2)
    assert num % den == 0
    return num // den


def count_table(ns) -> dict[int, list[int]]:
    """``{n: [v(n, 0), ..., v(n, n - 3)]}``."""
    return {n: [network_count(n, k) for k in range(n - 2)] for n in ns}


def row_sum(n: int) -> int:
    return sum(network_count(n, k) for k in range(n - 2))


# ---------------------------------------------------------------------------
# diagonal sets
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def polygon_diagonals(n: int) -> tuple[Split, ...]:
    """Nontrivial arc splits of the identity ordering, by (start, length)."""
    full = (1 << n) - 1
    seen, out = set(), []
    for length in range(2, n - 1):
        for start in range(n):
            mask = 0
            for t in range(length):
                mask |= 1 << ((start + t) % n)
            mask = full ^ mask if mask & 1 else mask
            if mask not in seen:
                seen.add(mask)
                out.append(Split.of_mask(mask, n))
    out.sort(key=lambda s: s.part)
    return tuple(out)


def enumerate_diagonal_sets(n: int, k: int) -> Iterator[tuple[Split, ...]]:
    """Every set of ``k`` pairwise noncrossing diagonals of the identity polygon."""
    _check_range(n, k)
    diags = polygon_diagonals(n)
    full = (1 << n) - 1

    def extend(chosen: list[int], start: int):
        if len(chosen) == k:
            yield tuple(diags[i] for i in chosen)
            return
        for i in range(start, len(diags)):
            m = diags[i].mask
            if all(_compatible_masks(m, diags[j].mask, full) for j in chosen):
                chosen.append(i)
                yield from extend(chosen, i + 1)
                chosen.pop()

    yield from extend([], 0)


# ---------------------------------------------------------------------------
# networks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def canonical_orderings(n: int) -> np.ndarray:
    """All ``(n-1)!/2`` canonical orderings as rows, lexicographically sorted."""
    rows = [(1,) + p for p in permutations(range(2, n + 1)) if p[0] < p[-1]]
    return np.array(rows, dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=None)
def _orbit_perms(n: int, diag_set: tuple[Split, ...]) -> np.ndarray:
    orbit = _orbit(tuple(range(1, n + 1)), [d.mask for d in diag_set])
    return np.array(sorted(orbit), dtype=np.int64).reshape(-1, n) - 1


def _relabel(diag: Split, row) -> int:
    full = (1 << len(row)) - 1
    mask = 0
    for t in diag.part:
        mask |= 1 << (int(row[t - 1]) - 1)
    return full ^ mask if mask & 1 else mask


def _row_range(m: int, partition) -> range:
    if partition is None:
        return range(m)
    index, count = partition
    if not 0 <= index < count:
        raise OutOfRange(f"partition index {index} outside 0..{count - 1}")
    return range(index * m // count, (index + 1) * m // count)


def _survivors(n: int, k: int, partition=None):
    """``(row, diag_set_index)`` pairs of self-canonical drawings, plus the inputs."""
    orders = canonical_orderings(n)
    rows = _row_range(len(orders), partition)
    sub = orders[rows.start:rows.stop]
    dsets = list(enumerate_diagonal_sets(n, k))
    keep = [rows.start + np.flatnonzero(_kernels.self_canonical_mask(sub, _orbit_perms(n, d)))
            for d in dsets]
    return orders, dsets, keep


def _build(n: int, row, dset) -> Network:
    bridges = frozenset(Split.of_mask(_relabel(d, row), n) for d in dset)
    return Network(CircularOrdering._trusted(tuple(int(x) for x in row)), bridges)


def _ordered_pairs(orders, dsets, keep):
    by_row: dict[int, list[int]] = {}
    for di, rows in enumerate(keep):
        for r in rows:
            by_row.setdefault(int(r), []).append(di)
    for r in sorted(by_row):
        yield r, by_row[r]


def enumerate_networks(n: int, k: int, partition: Optional[tuple[int, int]] = None) -> Iterator[Network]:
    """Yield each canonical network with ``n`` leaves and ``k`` bridges once, sorted by key.

    ``partition=(index, count)`` restricts to one of ``count`` contiguous blocks
    of canonical orderings; the blocks concatenate to the full stream.
    """
    _check_range(n, k)
    orders, dsets, keep = _survivors(n, k, partition)
    for r, dis in _ordered_pairs(orders, dsets, keep):
        nets = [_build(n, orders[r], dsets[di]) for di in dis]
        nets.sort(key=lambda net: net.key)
        yield from nets


def count_networks(n: int, k: int) -> int:
    """Count networks by running the generator's orbit test, without building them."""
    _check_range(n, k)
    _, _, keep = _survivors(n, k)
    return sum(len(rows) for rows in keep)


@lru_cache(maxsize=8)
def vertex_set(n: int, k: int) -> tuple[tuple[Network, ...], np.ndarray]:
    """All networks of ``(n, k)`` with their vertex vectors as an int64 matrix.

    Rows follow :func:`enumerate_networks` order.  Vectors come from orbit sums.
    """
    _check_range(n, k)
    orders, dsets, keep = _survivors(n, k)
    pidx = pair_index_array(n)
    blocks = {}
    for di, rows in enumerate(keep):
        if len(rows):
            inc = _kernels.orbit_incidence(orders[rows], _orbit_perms(n, dsets[di]), pidx)
            for r, vec in zip(rows, inc):
                blocks[(int(r), di)] = vec
    nets, vecs = [], []
    for r, dis in _ordered_pairs(orders, dsets, keep):
        built = sorted(((_build(n, orders[r], dsets[di]), di) for di in dis), key=lambda p: p[0].key)
        for net, di in built:
            nets.append(net)
            vecs.append(blocks[(r, di)])
    mat = np.array(vecs, dtype=np.int64).reshape(len(nets), n * (n - 1) // 2)
    mat.setflags(write=False)
    return tuple(nets), mat
