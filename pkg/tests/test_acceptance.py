"""End-to-end acceptance suite: one test per criterion, each printing PASS/FAIL.

Tolerances are the stated ones and are never loosened.  Run with
``pytest tests/test_acceptance.py -v -s`` to see the summary lines inline.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from rscd.classical import PhasePoint, classical_Hr, radicand_identity_check, sign_pattern_minimum
from rscd.coeffs import V_batch, W_nu, sign_s, step
from rscd.eigen import (dual_eigen_check, forward_residual, gram_deviation, n0_product, n0_sum, psi_0,
                        self_duality_deviation, spectral_crosscheck)
from rscd.macdonald import elementary_E
from rscd.model import (build_params, classify_coupling, enumerate_lattice, excluded_g_values, farey,
                        rho_standard, sample_simplex, type_i_interval)
from rscd.operators import adjoint_check, build_S, commutator_norm
from rscd.rootsys import fundamental_weights_p, orbit, orbit_index_sets

from conftest import CONFIGS

CONFIG_PARAMS = [build_params(*c) for c in CONFIGS]


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return report


def _label(P):
    return f"(n={P.n},p={P.p},M={P.M},g={P.g})"


def _midpoint_g(n, p, M):
    """A coupling in the middle of the type (i) interval for (n, p, sgn M)."""
    lo, hi = type_i_interval(n, p, pow(p, -1, n), 1 if M > 0 else -1)
    gamma = float(lo + hi) / 2
    # gamma = g p / (n g + M)  =>  g = gamma M / (p - n gamma)
    return gamma * M / (p - n * gamma)


def test_01_dimension(verdict):
    start = time.perf_counter()
    bad = []
    for n, L in [(2, 3), (3, 2), (3, 5), (4, 2), (5, 1)]:
        P = build_params(n, 1, L, _midpoint_g(n, 1, L))
        brute = sum(1 for m in itertools.product(range(L + 1), repeat=n - 1) if sum(m) <= L)
        size = len(enumerate_lattice(P))
        if not size == brute == math.comb(n - 1 + L, L):
            bad.append((n, L, size))
    elapsed = time.perf_counter() - start
    verdict(1, "lattice dimension", not bad and elapsed < 0.1, f"mismatches={bad}, {elapsed * 1e3:.1f} ms")


def test_02_commutativity(verdict):
    start = time.perf_counter()
    worst = 0.0
    for P in CONFIG_PARAMS:
        Ss = [build_S(P, r).entries for r in range(1, P.n)]
        for a, b in itertools.combinations(range(len(Ss)), 2):
            scale = np.linalg.norm(Ss[a]) * np.linalg.norm(Ss[b])
            worst = max(worst, commutator_norm(Ss[a], Ss[b]) / scale)
    elapsed = time.perf_counter() - start
    verdict(2, "commuting S_r", worst <= 1e-9 and elapsed < 5,
            f"max relative commutator {worst:.2e} (tol 1e-9), {elapsed:.2f} s")


def test_03_adjointness(verdict):
    worst = max(adjoint_check(P, r) for P in CONFIG_PARAMS for r in range(1, P.n))
    verdict(3, "S_r adjoint to S_{n-r}", worst <= 1e-10, f"max entry deviation {worst:.2e} (tol 1e-10)")


def test_04_n0_identity(verdict):
    failures = []
    for P in CONFIG_PARAMS:
        total, closed = n0_sum(P), n0_product(P)
        rel = abs(total - closed) / abs(total)
        if rel > 1e-9:
            failures.append(f"{_label(P)} sum={total:.12g} product={closed:.12g}")
    trivial = [P for P in CONFIG_PARAMS if P.absM == 1]
    trivial_ok = all(abs(n0_sum(P) - P.n) <= 1e-9 * P.n for P in trivial)
    verdict(4, "lattice sum of weights equals product formula", not failures and trivial_ok,
            "all configs agree" if not failures else "; ".join(failures))


def test_05_ground_state(verdict):
    worst = 0.0
    for P in CONFIG_PARAMS:
        ground = psi_0(P).values
        for r in range(1, P.n):
            value = elementary_E(P.n, P.alpha, r, rho_standard(P.n, P.g))
            worst = max(worst, float(np.max(np.abs(build_S(P, r).apply(ground) - value * ground))))
    verdict(5, "ground state eigen-equation", worst <= 1e-9, f"max residual {worst:.2e} (tol 1e-9)")


def test_06_macdonald_identity(verdict):
    rng = np.random.default_rng(6)
    worst = 0.0
    for P in CONFIG_PARAMS:
        X = sample_simplex(P, 50, rng)
        for r in range(1, P.n):
            sums = V_batch(P.g, P.alpha, orbit_index_sets(P.n, r), X).sum(axis=1)
            value = elementary_E(P.n, P.alpha, r, rho_standard(P.n, P.g))
            worst = max(worst, float(np.max(np.abs(sums - value))))
    verdict(6, "sum of V_nu is constant", worst <= 1e-10, f"max deviation {worst:.2e} (tol 1e-10)")


def test_07_orthonormality(verdict):
    worst = max(gram_deviation(P) for P in CONFIG_PARAMS)
    verdict(7, "orthonormal eigenbasis", worst <= 1e-8, f"max |Gram - I| {worst:.2e} (tol 1e-8)")


def test_08_self_duality(verdict):
    worst = max(self_duality_deviation(P) for P in CONFIG_PARAMS)
    verdict(8, "eigenfunction table is symmetric", worst <= 1e-9, f"max deviation {worst:.2e} (tol 1e-9)")


def test_09_eigen_equations(verdict):
    rng = np.random.default_rng(9)
    fwd = max(forward_residual(P) for P in CONFIG_PARAMS)
    dual = 0.0
    for P in CONFIG_PARAMS:
        pts = enumerate_lattice(P).points
        for _ in range(100):
            lam, mu = pts[rng.integers(len(pts))], pts[rng.integers(len(pts))]
            dual = max(dual, dual_eigen_check(P, int(rng.integers(1, P.n)), lam, mu))
    verdict(9, "forward and dual eigen-equations", max(fwd, dual) <= 1e-8,
            f"forward {fwd:.2e}, dual {dual:.2e} (tol 1e-8)")


def test_10_spectral_oracle(verdict):
    eig, ov = 0.0, 0.0
    for P in CONFIG_PARAMS:
        rep = spectral_crosscheck(P)
        eig, ov = max(eig, rep.eigenvalue_deviation), max(ov, rep.overlap_deviation)
    verdict(10, "dense eigensolver agrees", eig <= 1e-8 and ov <= 1e-7,
            f"eigenvalues {eig:.2e} (tol 1e-8), overlaps |1 - |<v, Psi>|| {ov:.2e} (tol 1e-7)")


def test_11_vanishing_pattern(verdict):
    wrong, excluded_seen = [], False
    for P in CONFIG_PARAMS:
        excluded_seen |= any(abs(v - P.g) < 1e-12 for v in excluded_g_values(P))
        lat = enumerate_lattice(P)
        for m in lat.points:
            for r in range(1, P.n):
                for nu in orbit(P.n, r):
                    inside = tuple(a + b for a, b in zip(m, step(P, nu))) in lat.index_of
                    w = W_nu(P, nu, m)
                    if (w == 0.0) == inside or not math.isfinite(w):
                        wrong.append((_label(P), m, r))
    verdict(11, "hopping coefficients vanish exactly off the lattice", not wrong and excluded_seen,
            f"{len(wrong)} wrong entries, excluded-g config included: {excluded_seen}")


def test_12_classical(verdict):
    rng = np.random.default_rng(12)
    rad = 0.0
    for P in CONFIG_PARAMS:
        for x in sample_simplex(P, 100, rng):
            for r in range(1, P.n):
                rad = max(rad, max(radicand_identity_check(P.g, P.alpha, J, x) for J in orbit_index_sets(P.n, r)))
    sign = min(sign_pattern_minimum(P, sample_simplex(P, 200, rng)) for P in CONFIG_PARAMS)
    refl = 0.0
    for P in CONFIG_PARAMS:
        for x in sample_simplex(P, 20, rng):
            mom = rng.uniform(-math.pi, math.pi, size=P.n)
            pt = PhasePoint(x, mom - mom.mean())
            for r in range(1, P.n):
                refl = max(refl, abs(classical_Hr(P, r, pt) - classical_Hr(P, r, pt, g=-P.g)))
    ok = rad <= 1e-12 and sign >= -1e-12 and refl <= 1e-11
    verdict(12, "classical identities", ok,
            f"radicand {rad:.2e} (tol 1e-12), sign min {sign:.3g} (>= -1e-12), g -> -g {refl:.2e} (tol 1e-11)")


def test_13_sign_example(verdict):
    P = build_params(4, 1, -2, 2.3)
    om = fundamental_weights_p(4, 1)
    a, b = sign_s(P, om[1]), sign_s(P, om[0] - om[1] + om[2])
    verdict(13, "sign factors for n=4, p=1, M<0", (a, b) == (-1, 1), f"s(omega_2)={a}, s(omega_1-omega_2+omega_3)={b}")


def _reference_kind(n, gamma):
    # the Farey sequence cuts (0, 1) into cells; a cell is type (i) exactly
    # when one of its endpoints has denominator n
    seq = farey(n)
    if any(gamma == f for f in seq):
        return "excluded"
    k = next(i for i, f in enumerate(seq) if f > gamma)
    lo, hi = seq[k - 1], seq[k]
    return "type_i" if n in (lo.denominator, hi.denominator) else "type_ii"


def test_14_coupling_classification(verdict):
    mismatched = 0
    total = 0
    for n in range(2, 8):
        grid = [Fraction(k, 5040 * 7) for k in range(1, 5040 * 7)]
        for gamma in grid[::7] + [Fraction(2 * k + 1, 2 * 5040 * 7) for k in range(0, 5040 * 7, 97)]:
            total += 1
            if classify_coupling(n, float(gamma)).kind != _reference_kind(n, gamma):
                mismatched += 1
    verdict(14, "coupling classification pattern", mismatched == 0, f"{mismatched} of {total} samples differ")
