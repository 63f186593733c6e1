import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rscd import kernels, _kernels_py
from rscd.coeffs import index_masks
from rscd.rootsys import orbit_index_sets

needs_compiled = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled kernels not built")


@needs_compiled
@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(1, 20), st.floats(0.1, 3.0), st.floats(-2.0, 2.0), st.integers(0, 10_000))
def test_coeff_products_backends_agree(n, N, alpha, g, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(N, n))
    Js = [J for r in range(1, n) for J in orbit_index_sets(n, r)] + [(), tuple(range(1, n + 1))]
    masks = index_masks(n, Js)
    a_val, a_den = _kernels_py.coeff_products(X, masks, alpha, g)
    b_val, b_den = kernels.BACKENDS["cython"].coeff_products(X, masks, alpha, g)
    np.testing.assert_allclose(b_den, a_den, rtol=1e-12)
    ok = a_den > 1e-6
    np.testing.assert_allclose(b_val[ok], a_val[ok], rtol=1e-9, atol=1e-12)


@needs_compiled
@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(1, 15), st.lists(st.integers(1, 5), min_size=1, max_size=5),
       st.floats(0.1, 3.0), st.integers(0, 10_000))
def test_grouped_exp_sums_backends_agree(n, N, sizes, alpha, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(N, n))
    W = rng.normal(size=(sum(sizes), n))
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
    a = _kernels_py.grouped_exp_sums(X, W, offsets, alpha)
    b = kernels.BACKENDS["cython"].grouped_exp_sums(X, W, offsets, alpha)
    np.testing.assert_allclose(b, a, rtol=1e-10, atol=1e-12)


def test_grouped_exp_sums_direct():
    X = np.array([[0.3, -0.1, -0.2]])
    W = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    out = _kernels_py.grouped_exp_sums(X, W, np.array([0, 1, 3]), 0.7)
    assert out[0, 0] == pytest.approx(np.exp(0.21j))
    assert out[0, 1] == pytest.approx(np.exp(-0.07j) + np.exp(-0.14j))


def test_empty_and_full_sets_give_one():
    X = np.array([[0.1, 0.2, -0.3]])
    vals, den = _kernels_py.coeff_products(X, index_masks(3, [(), (1, 2, 3)]), 1.0, 0.4)
    assert np.all(vals == 1.0) and np.all(np.isinf(den))


@pytest.mark.parametrize("flag, expected", [("1", "python"), ("0", None)])
def test_backend_selection_env(flag, expected):
    env = dict(os.environ, RSCD_PURE_PYTHON=flag)
    out = subprocess.run([sys.executable, "-c", "from rscd import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    want = expected or ("cython" if "cython" in kernels.BACKENDS else "python")
    assert out == want
