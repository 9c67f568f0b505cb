import os
import subprocess
import sys

import numpy as np
import pytest

from bmenet import _kernels
from bmenet.enumeration import _orbit_perms, canonical_orderings, enumerate_diagonal_sets
from bmenet.vectors import pair_index_array

numba = pytest.importorskip("numba")


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_self_canonical_and_incidence_agree(n):
    orders = canonical_orderings(n)
    pidx = pair_index_array(n)
    for k in range(n - 2):
        for dset in list(enumerate_diagonal_sets(n, k))[:6]:
            perms = _orbit_perms(n, dset)
            a = _kernels.self_canonical_mask(orders, perms, use_numba=True)
            b = _kernels.self_canonical_mask(orders, perms, use_numba=False)
            assert np.array_equal(a, b)
            sub = orders[a]
            assert np.array_equal(
                _kernels.orbit_incidence(sub, perms, pidx, use_numba=True),
                _kernels.orbit_incidence(sub, perms, pidx, use_numba=False),
            )


def test_row_dots_agree():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 64, size=(500, 21))
    d = rng.integers(0, 10 ** 9, size=21)
    assert np.array_equal(_kernels.row_dots(x, d, use_numba=True), _kernels.row_dots(x, d, use_numba=False))
    assert np.array_equal(_kernels.row_dots(x, d), x @ d)


@pytest.mark.parametrize("seed", range(5))
def test_kalmanson_masks_agree(seed):
    rng = np.random.default_rng(seed)
    n = 6
    d = rng.integers(0, 5, size=(n + 1, n + 1))
    d = d + d.T
    np.fill_diagonal(d, 0)
    orders = canonical_orderings(n)
    assert np.array_equal(
        _kernels.kalmanson_mask(orders, d, use_numba=True),
        _kernels.kalmanson_mask(orders, d, use_numba=False),
    )


def test_kalmanson_mask_small_n_is_all_true():
    assert _kernels.kalmanson_mask(canonical_orderings(3), np.zeros((4, 4))).all()


def test_environment_flag_selects_numpy():
    env = dict(os.environ, BMENET_NO_NUMBA="1")
    code = "from bmenet import _kernels; print(_kernels.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True).stdout
    assert out.strip() == "False"
    env["BMENET_NO_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True).stdout
    assert out.strip() == "True"


def test_requesting_missing_numba_is_an_error(monkeypatch):
    monkeypatch.setattr(_kernels, "HAVE_NUMBA", False)
    with pytest.raises(RuntimeError):
        _kernels.row_dots(np.ones((2, 2)), np.ones(2), use_numba=True)
    assert np.array_equal(_kernels.row_dots(np.ones((2, 2)), np.ones(2), use_numba=False), [2, 2])
