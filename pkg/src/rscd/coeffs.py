"""Scalar coefficient functions: V, F, sign factors, W, the Pochhammer symbol and Delta_p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import InvalidIndexError, InvalidParameterError, SingularValueError
from .model import ModelParams, barycenter, in_lattice, lattice_point, vertices
from .rootsys import Weight, index_set_of, orbit, positive_roots_p, root_base

SINGULAR_TOL = 1e-14


def trig_pochhammer(z: float, m: int, alpha: float) -> float:
    """``(z : sin_alpha)_m``.

    ``prod_{k=0}^{m-1} sin(alpha/2 (z+k))`` for m > 0, 1 for m = 0 and
    ``1 / prod_{k=1}^{|m|} sin(alpha/2 (z-k))`` for m < 0.
    """
    m = int(m)
    half = 0.5 * alpha
    if m == 0:
        return 1.0
    if m > 0:
        return math.prod(math.sin(half * (z + k)) for k in range(m))
    den = 1.0
    for k in range(1, -m + 1):
        s = math.sin(half * (z - k))
        if abs(s) < SINGULAR_TOL:
            raise SingularValueError(f"(z : sin)_{m} has a vanishing factor at z - {k} = {z - k}")
        den *= s
    return 1.0 / den


def _as_index_set(n: int, nu_or_J) -> tuple[int, ...]:
    if isinstance(nu_or_J, Weight):
        return index_set_of(nu_or_J)
    J = tuple(sorted(int(j) for j in nu_or_J))
    if any(not 1 <= j <= n for j in J) or len(set(J)) != len(J):
        raise InvalidParameterError(f"bad index set {nu_or_J} for n = {n}")
    return J


def V_J(g: float, alpha: float, J, x) -> float:
    """``prod_{j in J, k not in J} sin(alpha/2 (x_j - x_k + g)) / sin(alpha/2 (x_j - x_k))``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    J = _as_index_set(n, J)
    half = 0.5 * alpha
    out = 1.0
    for j in J:
        for k in range(1, n + 1):
            if k in J:
                continue
            d = x[j - 1] - x[k - 1]
            den = math.sin(half * d)
            if abs(den) < SINGULAR_TOL:
                raise SingularValueError(f"pole of V along the root e_{j} - e_{k}", root=(j, k))
            out *= math.sin(half * (d + g)) / den
    return out


def V_nu(g: float, alpha: float, nu: Weight, x) -> float:
    """The coefficient ``V_nu``: product over roots a with ``<a, nu> = 1``.

    For an orbit vector ``nu`` with index set J those roots are exactly
    ``e_j - e_k`` with j in J, k outside J, so this is ``V_J``.
    """
    return V_J(g, alpha, index_set_of(nu), x)


def F_J(alpha: float, g: float, J, x) -> float:
    """``prod_{j != k in J} sin(alpha/2 (x_j - x_k)) / sin(alpha/2 (x_j - x_k + g))``."""
    x = np.asarray(x, dtype=float)
    J = _as_index_set(x.shape[0], J)
    half = 0.5 * alpha
    out = 1.0
    for j in J:
        for k in J:
            if j == k:
                continue
            d = x[j - 1] - x[k - 1]
            den = math.sin(half * (d + g))
            if abs(den) < SINGULAR_TOL:
                raise SingularValueError(f"pole of F along e_{j} - e_{k}", root=(j, k))
            out *= math.sin(half * d) / den
    return out


def index_masks(n: int, Js) -> np.ndarray:
    masks = np.zeros((len(Js), n), dtype=np.int8)
    for i, J in enumerate(Js):
        for j in J:
            masks[i, j - 1] = 1
    return masks


def V_batch(g: float, alpha: float, Js, X) -> np.ndarray:
    """``V_J(x)`` for every point row of ``X`` and every index set in ``Js``; shape (N, K)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    values, min_den = kernels.coeff_products(X, index_masks(X.shape[1], Js), alpha, g)
    if np.any(min_den < SINGULAR_TOL):
        s, k = np.argwhere(min_den < SINGULAR_TOL)[0]
        raise SingularValueError(f"pole of V_J for J = {Js[k]} at sample {s}")
    return values


# ----------------------------------------------------------------------------
# sign factors

def _sign_at(params: ModelParams, J, x) -> float:
    return V_J(params.g, params.alpha, J, x)


@lru_cache(maxsize=None)
def _sign_cached(params: ModelParams, J: tuple[int, ...]) -> int:
    if len(J) in (0, params.n):
        return 1
    x = barycenter(params)
    v = _sign_at(params, J, x)
    if abs(v) < 1e-12:
        rng = np.random.default_rng(0)
        verts = vertices(params)
        for _ in range(16):
            w = rng.dirichlet(np.full(params.n, 20.0))
            v = _sign_at(params, J, w @ verts)
            if abs(v) >= 1e-12:
                break
        else:
            raise InvalidParameterError(f"V_J vanishes at every interior probe point for J = {J}")
    return 1 if v > 0 else -1


def sign_s(params: ModelParams, nu_or_J) -> int:
    """``s(g; nu)``: the constant sign of ``V_nu`` on the open simplex."""
    return _sign_cached(params, _as_index_set(params.n, nu_or_J))


@dataclass(frozen=True)
class SignTable:
    params: ModelParams
    signs: dict[tuple[int, ...], int]

    def __getitem__(self, J) -> int:
        return self.signs[_as_index_set(self.params.n, J)]


def sign_table(params: ModelParams) -> SignTable:
    from .rootsys import orbit_index_sets

    signs = {(): 1, tuple(range(1, params.n + 1)): 1}
    for r in range(1, params.n):
        for J in orbit_index_sets(params.n, r):
            signs[J] = sign_s(params, J)
    return SignTable(params, signs)


# ----------------------------------------------------------------------------
# hopping coefficients

def step(params: ModelParams, nu: Weight) -> tuple[int, ...]:
    """Change of the p-base coefficients under ``mu -> mu + nu`` (``<a_{j,p}, nu>``)."""
    base = root_base(params.n, params.p)
    return tuple(a.int_dot(nu) for a in base.simple_roots)


def W_nu(params: ModelParams, nu: Weight, m) -> float:
    """Hopping coefficient ``W_nu`` at the lattice point with index ``m``.

    Exactly 0 when ``mu + nu`` leaves the lattice.  Otherwise
    ``s(g; nu) sqrt(V_nu(x) V_nu(-x - sgn(M) nu))`` with the radicand taken as
    one product, which is finite and positive for every admissible g
    (including the excluded set).
    """
    m = tuple(m)
    if not in_lattice(m, params.absM):
        raise InvalidIndexError(f"{m} is not in the truncated cone of level {params.absM}")
    target = tuple(a + b for a, b in zip(m, step(params, nu)))
    if not in_lattice(target, params.absM):
        return 0.0
    J = index_set_of(nu)
    x = lattice_point(params, m)
    y = lattice_point(params, target)
    radicand = V_J(params.g, params.alpha, J, x) * V_J(params.g, params.alpha, J, -y)
    if not radicand > 0:
        raise SingularValueError(f"non-positive radicand {radicand} for J = {J} at {m}")
    return sign_s(params, J) * math.sqrt(radicand)


# ----------------------------------------------------------------------------
# Delta_p

def _mu_weight(params: ModelParams, m) -> Weight:
    return root_base(params.n, params.p).from_weight_coefficients(m)


def delta_direct(params: ModelParams, m) -> float:
    """Product formula for ``Delta_p(mu)`` over the p-positive roots."""
    s, g, T, alpha = params.sgn, params.g, params.period, params.alpha
    half = 0.5 * alpha
    mu = _mu_weight(params, m)
    out = 1.0
    for pr in positive_roots_p(params.n, params.p):
        a_rho = len(pr.indices) * g - pr.wraps * T
        a_mu = pr.root.int_dot(mu)
        den = math.sin(half * a_rho)
        if abs(den) < SINGULAR_TOL:
            raise SingularValueError("sin(alpha/2 <a, rho_p>) vanishes", root=pr.root)
        out *= math.sin(half * (a_rho + s * a_mu)) / den
        k = s * a_mu
        out *= trig_pochhammer(a_rho + s * g, k, alpha) / trig_pochhammer(a_rho + 1 - s * g, k, alpha)
    return out


def _one_step_neighbours(params: ModelParams, m):
    for r in range(1, params.n):
        for nu in orbit(params.n, r):
            prev = tuple(a - b for a, b in zip(m, step(params, nu)))
            if in_lattice(prev, params.absM):
                yield prev, nu


def delta_p(params: ModelParams, m) -> float:
    """``Delta_p(mu)`` for mu in the lattice (direct formula) or one step outside (0)."""
    m = tuple(int(v) for v in m)
    if in_lattice(m, params.absM):
        value = delta_direct(params, m)
        if not value > 0:
            raise SingularValueError(f"Delta_p({m}) = {value} is not positive")
        return value
    if next(_one_step_neighbours(params, m), None) is None:
        raise InvalidIndexError(f"{m} is more than one step outside the lattice")
    # the recurrence numerator V_nu(rho_p + sgn(M)(mu - nu)) vanishes identically here
    return 0.0


def delta_ratio(params: ModelParams, m, nu: Weight) -> float:
    """``V_nu(x_mu) / V_nu(-x_{mu+nu})``, the recurrence ratio for one step."""
    J = index_set_of(nu)
    target = tuple(a + b for a, b in zip(m, step(params, nu)))
    x = lattice_point(params, m)
    y = lattice_point(params, target)
    return V_J(params.g, params.alpha, J, x) / V_J(params.g, params.alpha, J, -y)


def delta_table(params: ModelParams, lattice) -> np.ndarray:
    return np.array([delta_p(params, m) for m in lattice.points])


def delta_by_recurrence(params: ModelParams, lattice) -> np.ndarray:
    """Chain ``Delta_p`` from ``Delta_p(0) = 1`` along fundamental-weight steps."""
    oms = root_base(params.n, params.p).fundamental_weights
    out = np.empty(len(lattice))
    for i, m in enumerate(lattice.points):
        if i == 0:
            out[i] = 1.0
            continue
        j = next(k for k, v in enumerate(m) if v > 0)
        prev = tuple(v - (k == j) for k, v in enumerate(m))
        out[i] = out[lattice.index_of[prev]] * delta_ratio(params, prev, oms[j])
    return out
