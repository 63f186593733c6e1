"""Classical compactified Hamiltonians and the identities behind their reality."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coeffs import SINGULAR_TOL, V_J
from .errors import InvalidInputError, SingularValueError
from .model import ModelParams, barycenter, in_simplex
from .rootsys import orbit_index_sets

RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class PhasePoint:
    x: np.ndarray
    momenta: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        mom = np.asarray(self.momenta, dtype=float)
        if x.shape != mom.shape or x.ndim != 1:
            raise InvalidInputError(f"positions {x.shape} and momenta {mom.shape} must be matching vectors")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "momenta", mom)

    def is_reduced(self, tol: float = 1e-12) -> bool:
        return abs(self.x.sum()) <= tol and abs(self.momenta.sum()) <= tol


def pair_radicand(g: float, alpha: float, J, x) -> float:
    """``prod_{j in J, k not in J} (1 - sin^2(alpha g / 2) / sin^2(alpha/2 (x_j - x_k)))``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    J = set(J)
    sg2 = math.sin(0.5 * alpha * g) ** 2
    out = 1.0
    for j in J:
        for k in range(1, n + 1):
            if k in J:
                continue
            s = math.sin(0.5 * alpha * (x[j - 1] - x[k - 1]))
            if abs(s) < SINGULAR_TOL:
                raise SingularValueError(f"coincident positions x_{j} and x_{k} (mod period)", root=(j, k))
            out *= 1.0 - sg2 / (s * s)
    return out


def radicand_identity_check(g: float, alpha: float, J, x) -> float:
    """``|pair_radicand - V_J(x) V_J(-x)|``."""
    x = np.asarray(x, dtype=float)
    if len(J) in (0, x.shape[0]):
        return abs(pair_radicand(g, alpha, J, x) - 1.0)
    return abs(pair_radicand(g, alpha, J, x) - V_J(g, alpha, J, x) * V_J(g, alpha, J, -x))


def _root(value: float) -> float:
    if value < -RADICAND_TOL:
        raise InvalidInputError(f"negative radicand {value}: point outside the configuration space")
    return math.sqrt(max(value, 0.0))


def classical_H(g: float, alpha: float, point: PhasePoint) -> float:
    """``sum_j cos(p_j) sqrt(prod_{k != j} (1 - sin^2(alpha g/2) / sin^2(alpha/2 (x_j - x_k))))``."""
    n = point.x.shape[0]
    return sum(math.cos(point.momenta[j - 1]) * _root(pair_radicand(g, alpha, (j,), point.x))
               for j in range(1, n + 1))


def classical_Hr(params: ModelParams, r: int, point: PhasePoint, g: float | None = None) -> float:
    """Reduced ``H_r = sum_J s(g; J) cos(sum_{j in J} p_j) sqrt(V_J(x) V_J(-x))``.

    ``g`` overrides the coupling (used to compare ``g`` with ``-g``); signs
    are read off at the barycentre of the simplex with the same coupling.
    """
    g = params.g if g is None else float(g)
    if not point.is_reduced():
        raise InvalidInputError("reduced Hamiltonians need zero total position and momentum")
    loc = in_simplex(params, point.x)
    if loc.status != "interior":
        raise InvalidInputError(f"point is {loc.status}, not inside the open simplex")
    centre = barycenter(params)
    total = 0.0
    for J in orbit_index_sets(params.n, r):
        sign = 1.0 if V_J(g, params.alpha, J, centre) > 0 else -1.0
        rad = V_J(g, params.alpha, J, point.x) * V_J(g, params.alpha, J, -point.x)
        total += sign * math.cos(sum(point.momenta[j - 1] for j in J)) * _root(rad)
    return total


def sign_pattern_minimum(params: ModelParams, X) -> float:
    """Smallest value of ``(-1)^{p-1} sgn(M) V_j(+-x)`` over all j and rows of X."""
    factor = (-1) ** (params.p - 1) * params.sgn
    worst = math.inf
    for x in np.atleast_2d(X):
        for j in range(1, params.n + 1):
            for y in (x, -x):
                worst = min(worst, factor * V_J(params.g, params.alpha, (j,), y))
    return worst
