import math

import numpy as np
import pytest

from rscd.coeffs import V_nu
from rscd.errors import DegeneracyError, InvalidIndexError, InvalidParameterError
from rscd.macdonald import (E_cos, MacdonaldSystem, dominant_weight, eig_tuple, elementary_E, macdonald_P,
                            macdonald_system, monomial_m, renormalization, weight_orbit)
from rscd.rootsys import orbit


def _points(n, alpha, count, seed):
    rng = np.random.default_rng(seed)
    T = 2 * math.pi / alpha
    out = []
    while len(out) < count:
        x = rng.uniform(0, T, size=n)
        x -= x.mean()
        d = x[:, None] - x[None, :]
        if np.min(np.abs(np.sin(0.5 * alpha * d[np.triu_indices(n, 1)]))) > 0.1:
            out.append(x)
    return out


def test_n2_direct_residual():
    # hand-written sine ratios for n = 2, independent of the fitted matrices
    alpha, g = 0.9, 0.37
    P = macdonald_P(2, alpha, g, (2,))
    shift = np.array([0.5, -0.5])
    eig = 2 * math.cos(0.5 * alpha * (g + 2))
    for x in _points(2, alpha, 20, 7):
        d = x[0] - x[1]
        up = math.sin(0.5 * alpha * (d + g)) / math.sin(0.5 * alpha * d)
        down = math.sin(0.5 * alpha * (-d + g)) / math.sin(-0.5 * alpha * d)
        lhs = up * P(x + shift) + down * P(x - shift)
        assert abs(lhs - eig * P(x)) < 1e-9


@pytest.mark.parametrize("n, alpha, g, lam", [(3, 0.8, 0.3, (1, 1)), (3, 1.1, -0.45, (2, 0)),
                                              (4, 0.7, 0.25, (0, 1, 1))])
def test_direct_residual(n, alpha, g, lam):
    P = macdonald_P(n, alpha, g, lam)
    eig = eig_tuple(n, alpha, g, lam).values
    for x in _points(n, alpha, 10, 3):
        for r in range(1, n):
            lhs = sum(V_nu(g, alpha, nu, x) * P(x + nu.to_array()) for nu in orbit(n, r))
            assert abs(lhs - eig[r - 1] * P(x)) < 1e-8


def test_monic_and_triangular():
    system = macdonald_system(3, 0.8, 0.3, 3)
    for lam in system.basis:
        P = system.polynomial(lam)
        assert P.coeffs[lam] == 1.0
        allowed = {system.basis[i] for i in system.support(lam)}
        assert set(P.coeffs) <= allowed
        assert system.joint_residual(lam) < 1e-8
    assert system.diagonal_error() < 1e-8


def test_zero_coupling_gives_monomials():
    system = macdonald_system(3, 0.8, 0.0, 2)
    for lam in system.basis:
        P = system.polynomial(lam)
        for mu, c in P.coeffs.items():
            assert abs(c - (mu == lam)) < 1e-8


def test_level_independence():
    small = macdonald_P(3, 0.8, 0.3, (1, 1))
    big = macdonald_P(3, 0.8, 0.3, (1, 1), level=4)
    for mu, c in small.coeffs.items():
        assert abs(big.coeffs[mu] - c) < 1e-8


def test_symmetric_under_permutations():
    P = macdonald_P(3, 0.8, 0.3, (2, 1))
    x = np.array([0.4, -1.1, 0.7])
    assert abs(P(x) - P(x[[2, 0, 1]])) < 1e-10
    assert abs(P(x) - P(x[[1, 0, 2]])) < 1e-10


def test_monomial_orbit_sizes():
    assert len(weight_orbit(3, (1, 0))) == 3
    assert len(weight_orbit(3, (1, 1))) == 6
    assert len(weight_orbit(4, (0, 1, 0))) == 6
    assert monomial_m((0, 0), 0.5, np.zeros(3)) == 3 ** 0 * 1


def test_elementary_sums():
    u = np.array([0.3, 0.1, -0.4])
    assert elementary_E(3, 1.0, 1, u) == pytest.approx(sum(np.exp(1j * (u - u.mean()))))
    assert E_cos(3, 1.0, 1, u) == pytest.approx(elementary_E(3, 1.0, 1, u).real)
    np.testing.assert_allclose(dominant_weight(3, (1, 0)), [2 / 3, -1 / 3, -1 / 3])
    with pytest.raises(InvalidIndexError):
        dominant_weight(3, (-1, 0))


def test_renormalisation_trivial_cases():
    assert renormalization(3, 0.8, 0.3, (0, 0)) == 1.0
    n2 = renormalization(2, 0.8, 0.3, (1,))
    assert n2 == pytest.approx(math.sin(0.4 * 0.3) / math.sin(0.4 * 0.6))


def test_audit_detects_collisions():
    # at alpha = pi and g = 1/2, 2 cos(pi (g + k) / 2) repeats for k = 1 and k = 2
    system = MacdonaldSystem(2, math.pi, 0.5, 2)
    with pytest.raises(DegeneracyError):
        system.audit()
    assert MacdonaldSystem(2, math.pi, 0.5, 1).audit() > 1e-3


def test_bad_inputs():
    with pytest.raises(InvalidParameterError):
        MacdonaldSystem(1, 1.0, 0.2, 1)
    with pytest.raises(InvalidIndexError):
        macdonald_P(3, 0.8, 0.3, (2, 1), level=2)
    with pytest.raises(InvalidIndexError):
        macdonald_system(3, 0.8, 0.3, 1).polynomial((2, 0))
