"""A_{n-1} Macdonald polynomials at the quantised scale, built by sampling.

Dominant weights are given by their coefficient tuples ``m`` in the standard
fundamental weights, ``lam = sum_j m_j omega_j``.  The truncated cone of level L
is every such tuple with ``sum m_j <= L``; it is closed under going down in
dominance order, so the difference operators act on its monomials by a square
matrix.
"""

from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .coeffs import index_masks, trig_pochhammer
from .errors import DegeneracyError, IllConditionedSamplingError, InvalidIndexError, InvalidParameterError
from .model import graded_lex_points, in_lattice, rho_standard
from .rootsys import dominance_leq, orbit, orbit_index_sets, root_base

FIT_TOL = 1e-8
NULL_TOL = 1e-9
GAP_TOL = 1e-6
AUDIT_TOL = 1e-8
SAMPLE_MARGIN = 0.05


def _orbit_arrays(n: int, r: int) -> np.ndarray:
    return np.array([nu.to_array() for nu in orbit(n, r)])


def elementary_E(n: int, alpha: float, r: int, u) -> complex:
    """``sum_{nu in S_n(omega_r)} exp(i alpha <nu, u>)``."""
    nus = _orbit_arrays(n, r)
    return complex(np.sum(np.exp(1j * alpha * (nus @ np.asarray(u, dtype=float)))))


def E_cos(n: int, alpha: float, r: int, u) -> float:
    """``sum_{nu in S_n(omega_r)} cos(alpha <nu, u>)``."""
    nus = _orbit_arrays(n, r)
    return float(np.sum(np.cos(alpha * (nus @ np.asarray(u, dtype=float)))))


def dominant_weight(n: int, m) -> np.ndarray:
    """Coordinates of ``sum_j m_j omega_j``."""
    if len(m) != n - 1 or any(int(v) < 0 for v in m):
        raise InvalidIndexError(f"{tuple(m)} is not a dominant coefficient tuple for n = {n}")
    return root_base(n, 1).from_weight_coefficients(m).to_array()


@lru_cache(maxsize=None)
def weight_orbit(n: int, m: tuple[int, ...]) -> np.ndarray:
    """Distinct permutations of the coordinates of ``sum m_j omega_j``, as rows."""
    w = dominant_weight(n, m)
    return np.array(sorted(set(itertools.permutations(w.tolist()))))


def monomial_m(lam, alpha: float, x) -> complex:
    """``m_lam(x) = sum_{mu in S_n(lam)} exp(i alpha <mu, x>)``.

    ``lam`` is a coefficient tuple in the standard fundamental weights.
    """
    x = np.asarray(x, dtype=float)
    orb = weight_orbit(x.shape[0], tuple(int(v) for v in lam))
    return complex(np.sum(np.exp(1j * alpha * (orb @ x))))


def renormalization(n: int, alpha: float, g_eff: float, lam) -> float:
    """``prod_{a > 0} (<a, rho> : sin)_{<a, lam>} / (<a, rho> + g : sin)_{<a, lam>}``."""
    w = dominant_weight(n, lam)
    out = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            a_rho = (j - i) * g_eff
            a_lam = int(round(w[i] - w[j]))
            den = trig_pochhammer(a_rho + g_eff, a_lam, alpha)
            if den == 0.0:
                raise InvalidParameterError(f"renormalization of P_{tuple(lam)} is singular at root e_{i+1} - e_{j+1}")
            out *= trig_pochhammer(a_rho, a_lam, alpha) / den
    return out


@dataclass(frozen=True)
class EigTuple:
    lam: tuple[int, ...]
    values: tuple[complex, ...]


@dataclass
class MacPoly:
    """``P_lam = sum_mu coeffs[mu] m_mu`` with ``coeffs[lam] = 1``."""

    n: int
    alpha: float
    g_eff: float
    lam: tuple[int, ...]
    coeffs: dict[tuple[int, ...], complex] = field(repr=False)

    def __call__(self, x) -> complex:
        return sum(c * monomial_m(mu, self.alpha, x) for mu, c in self.coeffs.items())

    def tilde(self, x) -> complex:
        return self(x) * renormalization(self.n, self.alpha, self.g_eff, self.lam)


def _seed(*parts) -> int:
    return zlib.crc32(repr(parts).encode())


class MacdonaldSystem:
    """Matrices of the difference operators on the monomials of a truncated cone.

    ``C[r][mu_idx, kappa_idx]`` is the coefficient of ``m_mu`` in ``D_r m_kappa``.
    """

    def __init__(self, n: int, alpha: float, g_eff: float, level: int, seed: int = 0):
        if n < 2 or level < 0:
            raise InvalidParameterError(f"need n >= 2 and level >= 0, got {n}, {level}")
        self.n, self.alpha, self.g_eff, self.level = n, float(alpha), float(g_eff), int(level)
        self.basis = graded_lex_points(n - 1, level)
        self.index_of = {m: i for i, m in enumerate(self.basis)}
        base = root_base(n, 1)
        weights = [base.from_weight_coefficients(m) for m in self.basis]
        self.below = np.array([[dominance_leq(mu, lam, base) for lam in weights] for mu in weights])
        self.rho = rho_standard(n, self.g_eff)
        self.seed = seed
        self.C, self.fit_residual, self.leak = self._fit()
        self._cache: dict[tuple[int, ...], MacPoly] = {}

    # -- sampling -----------------------------------------------------------

    def _sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        T = 2 * math.pi / self.alpha
        iu = np.triu_indices(self.n, 1)
        out = []
        while len(out) < count:
            x = rng.uniform(0.0, T, size=self.n)
            x -= x.mean()
            d = (x[:, None] - x[None, :])[iu]
            if np.min(np.abs(np.sin(0.5 * self.alpha * d))) > SAMPLE_MARGIN:
                out.append(x)
        return np.array(out)

    def _monomial_matrix(self, X: np.ndarray) -> np.ndarray:
        orbits = [weight_orbit(self.n, m) for m in self.basis]
        offsets = np.concatenate([[0], np.cumsum([len(o) for o in orbits])])
        return kernels.grouped_exp_sums(X, np.vstack(orbits), offsets, self.alpha)

    def _fit(self):
        B = len(self.basis)
        count = max(4 * B, 40)
        C, worst_res, worst_leak = {}, 0.0, 0.0
        for attempt in range(3):
            rng = np.random.default_rng(_seed(self.n, self.level, self.seed, attempt))
            X = self._sample_points(count, rng)
            E = self._monomial_matrix(X)
            if np.linalg.cond(E) > 1e8:
                continue
            ok = True
            for r in range(1, self.n):
                Js = orbit_index_sets(self.n, r)
                nus = _orbit_arrays(self.n, r)
                V, _ = kernels.coeff_products(X, index_masks(self.n, Js), self.alpha, self.g_eff)
                rhs = np.zeros((X.shape[0], B), complex)
                for k, nu in enumerate(nus):
                    rhs += V[:, k:k + 1] * self._monomial_matrix(X + nu)
                sol, *_ = np.linalg.lstsq(E, rhs, rcond=None)
                scale = max(1.0, float(np.max(np.abs(rhs))))
                res = float(np.max(np.abs(E @ sol - rhs))) / scale
                leak = float(np.max(np.abs(np.where(self.below, 0.0, sol)), initial=0.0))
                worst_res, worst_leak = max(worst_res, res), max(worst_leak, leak)
                if res > FIT_TOL:
                    ok = False
                    break
                C[r] = sol
            if ok:
                return C, worst_res, worst_leak
        raise IllConditionedSamplingError(
            f"sampled fit residual {worst_res:.3g} exceeds {FIT_TOL} after resampling")

    # -- polynomials ----------------------------------------------------------

    def eigenvalues(self, lam) -> tuple[complex, ...]:
        u = self.rho + dominant_weight(self.n, lam)
        return tuple(elementary_E(self.n, self.alpha, r, u) for r in range(1, self.n))

    def support(self, lam) -> list[int]:
        j = self._index(lam)
        return [i for i in range(len(self.basis)) if self.below[i, j]]

    def _index(self, lam) -> int:
        lam = tuple(int(v) for v in lam)
        if lam not in self.index_of:
            raise InvalidIndexError(f"{lam} is outside the truncated cone of level {self.level}")
        return self.index_of[lam]

    def polynomial(self, lam) -> MacPoly:
        lam = tuple(int(v) for v in lam)
        if lam in self._cache:
            return self._cache[lam]
        j = self._index(lam)
        supp = self.support(lam)
        eig = self.eigenvalues(lam)
        blocks = [self.C[r][np.ix_(supp, supp)] - eig[r - 1] * np.eye(len(supp)) for r in range(1, self.n)]
        A = np.vstack(blocks)
        _, sv, vh = np.linalg.svd(A)
        sv = np.concatenate([sv, np.zeros(len(supp) - len(sv))]) if len(sv) < len(supp) else sv
        if sv[-1] > NULL_TOL or (len(sv) > 1 and sv[-2] < GAP_TOL):
            raise DegeneracyError(
                f"joint kernel for {lam} is not one-dimensional (singular values {sv[-2:]})")
        u = vh[-1].conj()
        u = u / u[supp.index(j)]
        coeffs = {self.basis[i]: complex(c) for i, c in zip(supp, u)}
        coeffs[lam] = 1.0 + 0.0j
        poly = MacPoly(self.n, self.alpha, self.g_eff, lam, coeffs)
        self._cache[lam] = poly
        return poly

    def joint_residual(self, lam) -> float:
        poly = self.polynomial(lam)
        supp = self.support(lam)
        u = np.array([poly.coeffs[self.basis[i]] for i in supp])
        eig = self.eigenvalues(lam)
        return max(float(np.linalg.norm(self.C[r][np.ix_(supp, supp)] @ u - eig[r - 1] * u))
                   for r in range(1, self.n))

    def diagonal_error(self) -> float:
        worst = 0.0
        for j, lam in enumerate(self.basis):
            eig = self.eigenvalues(lam)
            for r in range(1, self.n):
                worst = max(worst, abs(self.C[r][j, j] - eig[r - 1]))
        return worst

    def audit(self) -> float:
        """Smallest distance between eigenvalue tuples over the cone."""
        tuples = np.array([self.eigenvalues(lam) for lam in self.basis])
        if len(tuples) < 2:
            return math.inf
        diff = tuples[:, None, :] - tuples[None, :, :]
        dist = np.max(np.abs(diff), axis=2)
        dist[np.diag_indices(len(tuples))] = np.inf
        gap = float(np.min(dist))
        if gap <= AUDIT_TOL:
            raise DegeneracyError(f"eigenvalue tuples collide (distance {gap:.3g})")
        return gap


@lru_cache(maxsize=32)
def macdonald_system(n: int, alpha: float, g_eff: float, level: int, seed: int = 0) -> MacdonaldSystem:
    return MacdonaldSystem(n, alpha, g_eff, level, seed)


def _level_for(lam, level) -> int:
    return sum(int(v) for v in lam) if level is None else int(level)


def macdonald_P(n: int, alpha: float, g_eff: float, lam, level: int | None = None) -> MacPoly:
    """Monic ``P_lam`` built inside the cone of the given level (default: that of lam)."""
    level = _level_for(lam, level)
    if not in_lattice(lam, level):
        raise InvalidIndexError(f"{tuple(lam)} is outside the truncated cone of level {level}")
    return macdonald_system(n, float(alpha), float(g_eff), level).polynomial(lam)


def macdonald_P_tilde(n: int, alpha: float, g_eff: float, lam, x, level: int | None = None) -> complex:
    return macdonald_P(n, alpha, g_eff, lam, level).tilde(x)


def eig_tuple(n: int, alpha: float, g_eff: float, lam, level: int | None = None) -> EigTuple:
    """``(E_r(rho + lam))_r`` after auditing distinctness over the whole cone."""
    level = _level_for(lam, level)
    system = macdonald_system(n, float(alpha), float(g_eff), level)
    system.audit()
    lam = tuple(int(v) for v in lam)
    return EigTuple(lam, system.eigenvalues(lam))
