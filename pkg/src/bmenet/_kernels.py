"""Integer inner loops, compiled with numba when available.

Every kernel has a pure-numpy twin.  Setting ``BMENET_NO_NUMBA=1`` (or not
having numba installed) routes the public names to the numpy versions.  All
inputs are int64 arrays; callers scale rationals to integers first, so both
paths are exact and must agree bit for bit.

Orderings are rows of taxa ``1..n`` in canonical form (taxon 1 first).
Twist-orbit permutations are rows of positions ``0..n-1`` that also start at 0,
so ``orders[:, perm]`` keeps taxon 1 in front and only a reflection test is
needed to canonicalise.
"""

import os
from itertools import combinations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("BMENET_NO_NUMBA", "").strip().lower() in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------


def _np_canonical_images(orders, perms):
    img = orders[:, perms]  # (M, G, n)
    flip = img[:, :, 1] > img[:, :, -1]
    mirrored = np.concatenate([img[:, :, :1], img[:, :, :0:-1]], axis=2)
    return np.where(flip[:, :, None], mirrored, img)


def np_self_canonical_mask(orders, perms):
    img = _np_canonical_images(orders, perms)
    base = np.broadcast_to(orders[:, None, :], img.shape)
    diff = img != base
    first = diff.argmax(axis=2)[..., None]
    smaller = diff.any(axis=2) & (
        np.take_along_axis(img, first, 2)[..., 0] < np.take_along_axis(base, first, 2)[..., 0]
    )
    return ~smaller.any(axis=1)


def np_orbit_incidence(orders, perms, pidx):
    m = orders.shape[0]
    npairs = int(pidx.max()) + 1
    img = orders[:, perms]
    idx = pidx[img, np.roll(img, -1, axis=2)]
    flat = (np.arange(m, dtype=np.int64)[:, None, None] * npairs + idx).ravel()
    return np.bincount(flat, minlength=m * npairs).reshape(m, npairs).astype(np.int64)


def np_row_dots(x, d):
    return x @ d


def np_kalmanson_mask(orders, dmat, quads):
    lab = orders[:, quads]  # (M, Q, 4)
    a, b, c, e = lab[..., 0], lab[..., 1], lab[..., 2], lab[..., 3]
    cross = dmat[a, c] + dmat[b, e]
    ok = (dmat[a, b] + dmat[c, e] <= cross) & (dmat[b, c] + dmat[a, e] <= cross)
    return ok.all(axis=1)


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def nb_self_canonical_mask(orders, perms):
        m, n = orders.shape
        g_count = perms.shape[0]
        out = np.ones(m, dtype=np.bool_)
        for r in range(m):
            for g in range(g_count):
                flip = orders[r, perms[g, 1]] > orders[r, perms[g, n - 1]]
                for t in range(n):
                    if flip and t > 0:
                        v = orders[r, perms[g, n - t]]
                    else:
                        v = orders[r, perms[g, t]]
                    if v != orders[r, t]:
                        if v < orders[r, t]:
                            out[r] = False
                        break
                if not out[r]:
                    break
        return out

    @njit(cache=True)
    def nb_orbit_incidence(orders, perms, pidx):
        m, n = orders.shape
        npairs = 0
        for i in range(pidx.shape[0]):
            for j in range(pidx.shape[1]):
                if pidx[i, j] + 1 > npairs:
                    npairs = pidx[i, j] + 1
        out = np.zeros((m, npairs), dtype=np.int64)
        for r in range(m):
            for g in range(perms.shape[0]):
                for t in range(n):
                    a = orders[r, perms[g, t]]
                    b = orders[r, perms[g, (t + 1) % n]]
                    out[r, pidx[a, b]] += 1
        return out

    @njit(cache=True)
    def nb_row_dots(x, d):
        out = np.zeros(x.shape[0], dtype=np.int64)
        for r in range(x.shape[0]):
            acc = 0
            for c in range(x.shape[1]):
                acc += x[r, c] * d[c]
            out[r] = acc
        return out

    @njit(cache=True)
    def nb_kalmanson_mask(orders, dmat, quads):
        m = orders.shape[0]
        out = np.ones(m, dtype=np.bool_)
        for r in range(m):
            for q in range(quads.shape[0]):
                a = orders[r, quads[q, 0]]
                b = orders[r, quads[q, 1]]
                c = orders[r, quads[q, 2]]
                e = orders[r, quads[q, 3]]
                cross = dmat[a, c] + dmat[b, e]
                if dmat[a, b] + dmat[c, e] > cross or dmat[b, c] + dmat[a, e] > cross:
                    out[r] = False
                    break
        return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _fast(use_numba) -> bool:
    if use_numba is None:
        return USE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba kernels requested but numba is not installed")
    return bool(use_numba)


def self_canonical_mask(orders, perms, use_numba=None):
    """Rows of ``orders`` that are lexicographically least in their twist orbit."""
    orders, perms = _i64(orders), _i64(perms)
    fast = _fast(use_numba)
    return (nb_self_canonical_mask if fast else np_self_canonical_mask)(orders, perms)


def orbit_incidence(orders, perms, pidx, use_numba=None):
    """Per row, the summed tour incidence vectors over the orbit ``orders[:, perms]``."""
    orders, perms, pidx = _i64(orders), _i64(perms), _i64(pidx)
    fast = _fast(use_numba)
    return (nb_orbit_incidence if fast else np_orbit_incidence)(orders, perms, pidx)


def row_dots(x, d, use_numba=None):
    """``x @ d`` in int64; the caller guarantees no overflow."""
    x, d = _i64(x), _i64(d)
    fast = _fast(use_numba)
    return (nb_row_dots if fast else np_row_dots)(x, d)


def quadruples(n):
    return _i64(list(combinations(range(n), 4))).reshape(-1, 4)


def kalmanson_mask(orders, dmat, use_numba=None):
    """Rows of ``orders`` under which the square integer matrix ``dmat`` is Kalmanson.

    ``dmat`` is indexed by taxon label, so it has shape ``(n + 1, n + 1)``.
    """
    orders, dmat = _i64(orders), _i64(dmat)
    quads = quadruples(orders.shape[1])
    if quads.shape[0] == 0:
        return np.ones(orders.shape[0], dtype=bool)
    fast = _fast(use_numba)
    return (nb_kalmanson_mask if fast else np_kalmanson_mask)(orders, dmat, quads)
