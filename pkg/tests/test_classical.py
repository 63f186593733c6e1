import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rscd.classical import (PhasePoint, classical_H, classical_Hr, pair_radicand, radicand_identity_check,
                            sign_pattern_minimum)
from rscd.errors import InvalidInputError, SingularValueError
from rscd.model import barycenter, build_params, sample_simplex
from rscd.rootsys import orbit_index_sets


def _momenta(rng, n):
    p = rng.uniform(-math.pi, math.pi, size=n)
    return p - p.mean()


@settings(max_examples=100)
@given(st.integers(2, 6), st.floats(-2.0, 2.0), st.floats(0.2, 3.0), st.integers(0, 10_000))
def test_radicand_identity(n, g, alpha, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    k = int(rng.integers(0, n + 1))
    J = tuple(sorted(rng.choice(np.arange(1, n + 1), size=k, replace=False).tolist()))
    try:
        residual = radicand_identity_check(g, alpha, J, x)
        scale = abs(pair_radicand(g, alpha, J, x))
    except SingularValueError:
        return
    assert residual <= 1e-12 * max(1.0, scale)


def test_sign_pattern(any_params, rng):
    P = any_params
    assert sign_pattern_minimum(P, sample_simplex(P, 200, rng)) >= -1e-12


def test_hamiltonians_real_and_even_in_g(params, rng):
    P = params
    for x in sample_simplex(P, 20, rng):
        point = PhasePoint(x, _momenta(rng, P.n))
        for r in range(1, P.n):
            a = classical_Hr(P, r, point)
            b = classical_Hr(P, r, point, g=-P.g)
            assert math.isfinite(a)
            assert abs(a - b) <= 1e-11 * max(1.0, abs(a))


def test_reflected_hamiltonians_agree(params, rng):
    P = params
    for x in sample_simplex(P, 10, rng):
        point = PhasePoint(x, _momenta(rng, P.n))
        for r in range(1, P.n):
            assert classical_Hr(P, r, point) == pytest.approx(classical_Hr(P, P.n - r, point), abs=1e-12)


def test_first_hamiltonian_matches_direct_sum(rng):
    # p = 1, M > 0: every sign is +1 and H_1 is the single-particle sum
    P = build_params(3, 1, 2, 0.5)
    for x in sample_simplex(P, 10, rng):
        point = PhasePoint(x, _momenta(rng, 3))
        assert classical_Hr(P, 1, point) == pytest.approx(classical_H(P.g, P.alpha, point), abs=1e-12)


def test_signs_from_barycentre(params):
    P = params
    c = barycenter(params)
    point = PhasePoint(c, np.zeros(P.n))
    for r in range(1, P.n):
        total = sum(math.sqrt(pair_radicand(P.g, P.alpha, J, c)) for J in orbit_index_sets(P.n, r))
        assert abs(classical_Hr(P, r, point)) <= total + 1e-12


def test_rejects_bad_points():
    P = build_params(3, 1, 2, 0.5)
    c = barycenter(P)
    with pytest.raises(InvalidInputError):
        classical_Hr(P, 1, PhasePoint(c + 0.1, np.zeros(3)))
    with pytest.raises(InvalidInputError):
        classical_Hr(P, 1, PhasePoint(np.array([10.0, 0.0, -10.0]), np.zeros(3)))
    with pytest.raises(InvalidInputError):
        PhasePoint(np.zeros(3), np.zeros(2))
    with pytest.raises(SingularValueError):
        pair_radicand(0.3, 1.0, (1,), np.array([0.2, 0.2, -0.4]))
