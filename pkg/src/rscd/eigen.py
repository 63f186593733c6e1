"""Joint eigenfunctions on the lattice, their normalisation and cross-checks."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .coeffs import W_nu, delta_table, step, trig_pochhammer
from .errors import FormulaViolationError, InvalidIndexError, SpectralMismatchError
from .macdonald import E_cos, dominant_weight, macdonald_system
from .model import DominantIndex, ModelParams, enumerate_lattice, in_lattice, mu_vector, rho_check_p
from .operators import LatticeFunction, build_H, build_S
from .rootsys import map_coefficients_to_standard, orbit, root_base

SCHEMA_VERSION = 1
N0_RTOL = 1e-9


def thread_count() -> int:
    """Worker cap from ``RSCD_THREADS`` (default: CPU count)."""
    raw = os.environ.get("RSCD_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


# ----------------------------------------------------------------------------
# normalisation

def n0_sum(params: ModelParams) -> float:
    """``sum_mu Delta_p(mu)`` over the lattice."""
    return float(np.sum(delta_table(params, enumerate_lattice(params))))


def n0_product(params: ModelParams) -> float:
    """Closed form ``2^{(n-1)(|M|-1)} n prod_{k<n} (1 + sgn(M) k g : sin)_{|M|-1}``."""
    n, s, g, L = params.n, params.sgn, params.g, params.absM
    prod = math.prod(trig_pochhammer(1 + s * k * g, L - 1, params.alpha) for k in range(1, n))
    return 2.0 ** ((n - 1) * (L - 1)) * n * prod


def n0_relative_mismatch(params: ModelParams) -> float:
    total = n0_sum(params)
    return abs(total - n0_product(params)) / abs(total)


def N0(params: ModelParams, rtol: float = N0_RTOL) -> float:
    """The lattice sum of ``Delta_p``, checked against the closed-form product."""
    total = n0_sum(params)
    closed = n0_product(params)
    if abs(total - closed) > rtol * abs(total):
        raise FormulaViolationError(
            f"lattice sum {total!r} and product formula {closed!r} disagree "
            f"(relative {abs(total - closed) / abs(total):.3g})")
    return total


# ----------------------------------------------------------------------------
# eigenfunctions

def _standard_index(params: ModelParams, m) -> tuple[int, ...]:
    return map_coefficients_to_standard(params.n, params.p, m)


def _system(params: ModelParams):
    return macdonald_system(params.n, params.alpha, params.sgn * params.g, params.absM)


def _check_index(params: ModelParams, lam) -> tuple[int, ...]:
    if isinstance(lam, DominantIndex):
        lam = lam.m
    lam = tuple(int(v) for v in lam)
    if len(lam) != params.n - 1 or not in_lattice(lam, params.absM):
        raise InvalidIndexError(f"{lam} is not in the truncated cone of level {params.absM}")
    return lam


def eigenvalues_S(params: ModelParams, lam) -> tuple[complex, ...]:
    """``(E_r(rho(sgn(M) g) + sigma_p(lam)))_r`` with complex exponentials."""
    lam = _check_index(params, lam)
    return _system(params).eigenvalues(_standard_index(params, lam))


def eigenvalues_H(params: ModelParams, lam) -> tuple[float, ...]:
    """Cosine sums ``E_r(rho(sgn(M) g) + sigma_p(lam))``."""
    lam = _check_index(params, lam)
    n, s = params.n, params.sgn
    from .model import rho_standard

    u = rho_standard(n, s * params.g) + dominant_weight(n, _standard_index(params, lam))
    return tuple(E_cos(n, params.alpha, r, u) for r in range(1, n))


def _psi_values(params: ModelParams, lam, deltas: np.ndarray, n0: float) -> np.ndarray:
    lat = enumerate_lattice(params)
    poly = _system(params).polynomial(_standard_index(params, lam))
    base = rho_check_p(params, params.sgn * params.g)
    weight = math.sqrt(deltas[lat.index_of[lam]] / n0)
    factor = weight * np.sqrt(deltas)
    return np.array([factor[i] * poly.tilde(base + mu_vector(params, m)) for i, m in enumerate(lat.points)])


def psi_0(params: ModelParams) -> LatticeFunction:
    """``sqrt(Delta_p(mu) / N_0)``."""
    deltas = delta_table(params, enumerate_lattice(params))
    return LatticeFunction(np.sqrt(deltas / deltas.sum()))


def psi(params: ModelParams, lam) -> LatticeFunction:
    lam = _check_index(params, lam)
    deltas = delta_table(params, enumerate_lattice(params))
    return LatticeFunction(_psi_values(params, lam, deltas, float(deltas.sum())))


@dataclass
class EigenBasis:
    """All ``Psi_lam`` as rows of ``table`` (``table[lam, mu] = Psi_lam(x_mu)``)."""

    params: ModelParams
    points: list[tuple[int, ...]]
    table: np.ndarray
    eig_S: dict[tuple[int, ...], tuple[complex, ...]] = field(repr=False)
    eig_H: dict[tuple[int, ...], tuple[float, ...]] = field(repr=False)
    n0: float = 0.0

    def psi(self, lam) -> LatticeFunction:
        return LatticeFunction(self.table[self.points.index(tuple(lam))])

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.table.imag)))


def _build_basis(params: ModelParams, threads: int) -> EigenBasis:
    lat = enumerate_lattice(params)
    deltas = delta_table(params, lat)
    n0 = float(deltas.sum())
    system = _system(params)
    system.audit()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda m: _psi_values(params, m, deltas, n0), lat.points))
    return EigenBasis(
        params, list(lat.points), np.array(rows),
        {m: eigenvalues_S(params, m) for m in lat.points},
        {m: eigenvalues_H(params, m) for m in lat.points},
        n0,
    )


@lru_cache(maxsize=32)
def _cached_basis(params: ModelParams, threads: int) -> EigenBasis:
    return _build_basis(params, threads)


def eigenbasis(params: ModelParams, threads: int | None = None) -> EigenBasis:
    return _cached_basis(params, thread_count() if threads is None else threads)


# ----------------------------------------------------------------------------
# checks

def gram(params: ModelParams) -> np.ndarray:
    """``G[lam, kappa] = (Psi_lam, Psi_kappa)``."""
    t = eigenbasis(params).table
    return t @ t.conj().T


def gram_deviation(params: ModelParams) -> float:
    G = gram(params)
    return float(np.max(np.abs(G - np.eye(G.shape[0]))))


def self_duality_deviation(params: ModelParams) -> float:
    t = eigenbasis(params).table
    return float(np.max(np.abs(t - t.T)))


def resolution_deviation(params: ModelParams) -> float:
    """``max |sum_lam Psi_lam Psi_lam^dagger - I|``."""
    t = eigenbasis(params).table
    R = t.T @ t.conj()
    return float(np.max(np.abs(R - np.eye(R.shape[0]))))


def forward_residual(params: ModelParams) -> float:
    """``max |S_r Psi_lam - E_r Psi_lam|`` over every lam and r."""
    basis = eigenbasis(params)
    worst = 0.0
    for r in range(1, params.n):
        S = build_S(params, r).entries
        for i, lam in enumerate(basis.points):
            v = basis.table[i]
            worst = max(worst, float(np.max(np.abs(S @ v - basis.eig_S[lam][r - 1] * v))))
    return worst


def dual_eigen_check(params: ModelParams, r: int, lam, mu) -> float:
    """Residual of the eigen-equation in the spectral variable at one (lam, mu).

    Hops of ``mu`` by ``+nu`` and ``-nu`` (nu in the orbit of omega_r) acting
    on ``kappa -> Psi_kappa(x_lam)`` reproduce ``Psi_mu(x_lam)`` times
    ``E_r + E_{n-r}``, i.e. twice the cosine sum.
    """
    lam = _check_index(params, lam)
    mu = _check_index(params, mu)
    basis = eigenbasis(params)
    lat = enumerate_lattice(params)
    col = lat.index_of[lam]
    total = 0.0 + 0.0j
    for sign in (1, -1):
        for nu in orbit(params.n, r):
            hop = nu if sign > 0 else -nu
            target = tuple(a + b for a, b in zip(mu, step(params, hop)))
            if target in lat.index_of:
                total += W_nu(params, hop, mu) * basis.table[lat.index_of[target], col]
    expected = 2.0 * basis.eig_H[lam][r - 1] * basis.table[lat.index_of[mu], col]
    return float(abs(total - expected))


def norm_recurrence_deviation(params: ModelParams) -> float:
    """``max |W_{om_j}(x_mu) - W_{-om_j}(x_{mu+om_j})|`` over interior steps."""
    oms = root_base(params.n, params.p).fundamental_weights
    lat = enumerate_lattice(params)
    worst = 0.0
    for m in lat.points:
        for j, om in enumerate(oms):
            up = tuple(v + (k == j) for k, v in enumerate(m))
            if up not in lat.index_of:
                continue
            a = W_nu(params, om, m)
            b = W_nu(params, -om, up)
            if a == 0.0 or b == 0.0:
                raise FormulaViolationError(f"vanishing hop between {m} and {up}")
            worst = max(worst, abs(a - b))
    return worst


@dataclass(frozen=True)
class SpectralReport:
    eigenvalue_deviation: float
    overlap_deviation: float
    matched: dict


def spectral_crosscheck(params: ModelParams, seed: int = 42, tol: float = 1e-8) -> SpectralReport:
    """Diagonalise the H_r numerically and compare with the explicit basis.

    ``H_r = H_{n-r}``, so cosine tuples alone cannot separate lam from a
    lam' with conjugate exponential sums.  The Hermitian skew parts
    ``(S_r - S_{n-r}) / 2i`` carry the imaginary parts and resolve them.
    """
    basis = eigenbasis(params)
    n = params.n
    Hs = [build_H(params, r).entries for r in range(1, n)]
    Ss = [build_S(params, r).entries for r in range(1, n)]
    Ks = [(Ss[r - 1] - Ss[n - r - 1]) / 2j for r in range(1, n)]
    expected_H = np.array([basis.eig_H[lam] for lam in basis.points])
    expected = np.hstack([expected_H, np.array([[e.imag for e in basis.eig_S[lam]] for lam in basis.points])])
    worst_eig = 0.0
    for r, H in enumerate(Hs):
        numeric = np.sort(np.linalg.eigvalsh(H))
        worst_eig = max(worst_eig, float(np.max(np.abs(numeric - np.sort(expected_H[:, r])))))
    ops = Hs + Ks
    coeffs = np.random.default_rng(seed).normal(size=len(ops))
    _, vecs = np.linalg.eigh(sum(c * A for c, A in zip(coeffs, ops)))
    matched, worst_overlap = {}, 0.0
    for k in range(vecs.shape[1]):
        v = vecs[:, k]
        tup = np.array([np.vdot(v, A @ v).real for A in ops])
        dist = np.max(np.abs(expected - tup), axis=1)
        i = int(np.argmin(dist))
        if dist[i] > math.sqrt(tol) or basis.points[i] in matched:
            raise SpectralMismatchError(f"numeric eigenvector {k} matches no unused eigenvalue tuple")
        overlap = abs(np.vdot(basis.table[i], v))
        matched[basis.points[i]] = overlap
        worst_overlap = max(worst_overlap, abs(overlap - 1.0))
    return SpectralReport(worst_eig, worst_overlap, matched)


def eigenreport(params: ModelParams) -> dict:
    basis = eigenbasis(params)
    spectral = spectral_crosscheck(params)
    return {
        "schema_version": SCHEMA_VERSION,
        "params": params.as_dict(),
        "D": len(basis.points),
        "n0_sum": n0_sum(params),
        "n0_product": n0_product(params),
        "gram_max_dev": gram_deviation(params),
        "self_duality_max_dev": self_duality_deviation(params),
        "max_imag": basis.max_imag,
        "eigenvalues": [
            {"index": i, "lambda": list(lam), "E": list(basis.eig_H[lam])}
            for i, lam in enumerate(basis.points)
        ],
        "residuals": {
            "forward": forward_residual(params),
            "resolution_of_identity": resolution_deviation(params),
            "spectral_eigenvalues": spectral.eigenvalue_deviation,
            "spectral_overlaps": spectral.overlap_deviation,
        },
    }
