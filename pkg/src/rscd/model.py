"""Model parameters, coupling classification, the lattice and simplex geometry."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import InvalidIndexError, InvalidInputError, InvalidParameterError
from .rootsys import Weight, check_coprime, root_base

GEOM_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """A quantised type (i) model, parameterised by (n, p, M, g).

    The scale is derived as ``alpha = 2 pi p / (n g + M)`` so that the
    quantisation condition holds by construction.  Use :func:`build_params`
    to get a validated instance.
    """

    n: int
    p: int
    q: int
    M: int
    g: float
    alpha: float

    @property
    def sgn(self) -> int:
        return 1 if self.M > 0 else -1

    @property
    def absM(self) -> int:
        return abs(self.M)

    @property
    def period(self) -> float:
        """``2 pi / alpha``, which equals ``(n g + M) / p``."""
        return (self.n * self.g + self.M) / self.p

    @property
    def gamma(self) -> float:
        """``alpha g / 2 pi``."""
        return self.g / self.period

    @property
    def dimension(self) -> int:
        return math.comb(self.n - 1 + self.absM, self.absM)

    def as_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "q": self.q, "M": self.M, "g": self.g,
                "alpha": self.alpha, "sgnM": self.sgn}


def type_i_interval(n: int, p: int, q: int, sgn: int) -> tuple[Fraction, Fraction]:
    """The open gamma-interval (gamma = alpha g / 2 pi) on the ``sgn`` side of p/n."""
    if sgn > 0:
        return Fraction(p, n) - Fraction(1, n * q), Fraction(p, n)
    return Fraction(p, n), Fraction(p, n) + Fraction(1, n * (n - q))


def build_params(n: int, p: int, M: int, g: float) -> ModelParams:
    """Validate (n, p, M, g) and derive q and alpha."""
    check_coprime(n, p)
    if int(M) != M or M == 0:
        raise InvalidParameterError(f"M must be a nonzero integer, got {M}")
    M = int(M)
    if not g > 0:
        raise InvalidParameterError(f"g must be positive, got {g}")
    if n * g + M <= 0:
        raise InvalidParameterError(f"n g + M = {n * g + M} must be positive for alpha > 0")
    q = pow(p, -1, n)
    alpha = 2 * math.pi * p / (n * g + M)
    params = ModelParams(n, p, q, M, float(g), alpha)
    lo, hi = type_i_interval(n, p, q, params.sgn)
    gamma = params.gamma
    if not float(lo) < gamma < float(hi):
        raise InvalidParameterError(
            f"g = {g} is outside the type (i) interval for p = {p}, sgn(M) = {params.sgn}: "
            f"alpha g / 2pi = {gamma:.12g} not in ({lo}, {hi})"
        )
    # implied by the interval check; kept as a guard
    bound = q if M > 0 else n - q
    if not params.period > bound:
        raise InvalidParameterError(f"2pi/alpha = {params.period} must exceed {bound}")
    return params


@dataclass(frozen=True)
class CouplingClass:
    kind: str  # "type_i", "type_ii" or "excluded"
    p: int | None = None
    q: int | None = None
    sgn: int | None = None


def farey(n: int) -> list[Fraction]:
    """Reduced fractions in [0, 1] with denominator at most n."""
    return sorted({Fraction(k, m) for m in range(1, n + 1) for k in range(m + 1)})


def excluded_gammas(n: int) -> list[Fraction]:
    """The gamma values drawn as excluded points for n particles."""
    return farey(n)


def type_i_intervals(n: int) -> list[tuple[Fraction, Fraction, int, int, int]]:
    out = []
    for p in range(1, n):
        if math.gcd(n, p) != 1:
            continue
        q = pow(p, -1, n)
        for sgn in (1, -1):
            lo, hi = type_i_interval(n, p, q, sgn)
            out.append((lo, hi, p, q, sgn))
    return out


def classify_coupling(n: int, gamma: float, tol: float = 1e-12) -> CouplingClass:
    """Classify ``gamma = alpha g / 2pi`` in (0, 1) as type (i), type (ii) or excluded."""
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, got {n}")
    if not 0 < gamma < 1:
        raise InvalidParameterError(f"gamma must lie in (0, 1), got {gamma}")
    if any(abs(gamma - float(f)) <= tol for f in excluded_gammas(n)):
        return CouplingClass("excluded")
    for lo, hi, p, q, sgn in type_i_intervals(n):
        if float(lo) < gamma < float(hi):
            return CouplingClass("type_i", p, q, sgn)
    return CouplingClass("type_ii")


def excluded_g_values(params: ModelParams) -> list[float]:
    """The finite g-set where a boundary coefficient may be singular.

    ``(1 - sgn(M) A + B 2pi/alpha) / C`` over A = 0..|M|, B = 0..p-1, C = 1..n-1,
    deduplicated (to 1e-12) and sorted.
    """
    T = params.period
    vals = sorted(
        (1 - params.sgn * A + B * T) / C
        for A in range(params.absM + 1)
        for B in range(params.p)
        for C in range(1, params.n)
    )
    out: list[float] = []
    for v in vals:
        if not out or abs(v - out[-1]) > 1e-12:
            out.append(v)
    return out


def is_excluded_g(params: ModelParams, tol: float = 1e-9) -> bool:
    return any(abs(params.g - v) <= tol for v in excluded_g_values(params))


def rho_p(params: ModelParams, g: float | None = None) -> np.ndarray:
    """``g(omega_{1,p}+...+omega_{n-p,p}) + (g - 2pi/alpha)(omega_{n-p+1,p}+...+omega_{n-1,p})``."""
    g = params.g if g is None else g
    n, p = params.n, params.p
    oms = root_base(n, p).fundamental_weights
    out = np.zeros(n)
    for j, om in enumerate(oms, start=1):
        out += (g if j <= n - p else g - params.period) * om.to_array()
    return out


def rho_check_p(params: ModelParams, signed_g: float) -> np.ndarray:
    """``signed_g`` times the sum of all p-base fundamental weights."""
    oms = root_base(params.n, params.p).fundamental_weights
    return signed_g * sum(om.to_array() for om in oms)


def rho_standard(n: int, g: float) -> np.ndarray:
    """``g (omega_1 + ... + omega_{n-1})``, i.e. coordinates ``g ((n+1)/2 - j)``."""
    return g * ((n + 1) / 2 - np.arange(1, n + 1))


def wrap_shift(params: ModelParams) -> np.ndarray:
    """``2pi/alpha (omega_{n-p+1,p} + ... + omega_{n-1,p})``."""
    n, p = params.n, params.p
    oms = root_base(n, p).fundamental_weights
    out = np.zeros(n)
    for j in range(n - p + 1, n):
        out += oms[j - 1].to_array()
    return params.period * out


@dataclass(frozen=True)
class DominantIndex:
    """``mu = sum m_j omega_{j,p}`` with ``m_j >= 0`` and ``sum m_j <= |M|``."""

    m: tuple[int, ...]
    absM: int

    def __post_init__(self):
        if any(v < 0 for v in self.m) or sum(self.m) > self.absM:
            raise InvalidIndexError(f"{self.m} is not in the truncated cone of level {self.absM}")

    @property
    def m_n(self) -> int:
        return self.absM - sum(self.m)


def in_lattice(m: Iterable[int], absM: int) -> bool:
    m = tuple(m)
    return all(v >= 0 for v in m) and sum(m) <= absM


def graded_lex_points(dim: int, level: int) -> list[tuple[int, ...]]:
    """All non-negative integer ``dim``-tuples with sum <= level, graded-lex ordered."""
    pts = []
    for total in range(level + 1):
        block = [c for c in itertools.product(range(total + 1), repeat=dim) if sum(c) == total]
        pts.extend(sorted(block))
    return pts


@dataclass
class Lattice:
    """The ordered index set of the Hilbert space."""

    params: ModelParams
    points: list[tuple[int, ...]]
    index_of: dict[tuple[int, ...], int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Embedded points ``rho_p + sgn(M) mu`` as a (D, n) array."""
        return np.array([lattice_point(self.params, m) for m in self.points])

    def to_json_obj(self) -> list[dict]:
        return [
            {"index": i, "m": list(m), "x": [float(v) for v in x]}
            for i, (m, x) in enumerate(zip(self.points, self.coordinates))
        ]


def enumerate_lattice(params: ModelParams) -> Lattice:
    pts = graded_lex_points(params.n - 1, params.absM)
    return Lattice(params, pts, {m: i for i, m in enumerate(pts)})


def mu_vector(params: ModelParams, m) -> np.ndarray:
    oms = root_base(params.n, params.p).fundamental_weights
    out = np.zeros(params.n)
    for mj, om in zip(m, oms):
        out += mj * om.to_array()
    return out


def lattice_point(params: ModelParams, m) -> np.ndarray:
    """``rho_p + sgn(M) sum m_j omega_{j,p}``."""
    if isinstance(m, DominantIndex):
        m = m.m
    if not in_lattice(m, params.absM):
        raise InvalidIndexError(f"{tuple(m)} is not in the truncated cone of level {params.absM}")
    return rho_p(params) + params.sgn * mu_vector(params, m)


def vertices(params: ModelParams) -> np.ndarray:
    """The n vertices ``rho_p`` and ``rho_p + M omega_{k,p}``."""
    rho = rho_p(params)
    oms = root_base(params.n, params.p).fundamental_weights
    return np.array([rho] + [rho + params.M * om.to_array() for om in oms])


@dataclass(frozen=True)
class SimplexLocation:
    status: str  # "interior", "boundary" or "outside"
    active_facets: tuple[str, ...]
    in_alcove: bool


def in_simplex(params: ModelParams, x, tol: float = GEOM_TOL) -> SimplexLocation:
    """Locate ``x`` relative to the closed simplex of the model.

    Facets are labelled ``"a1".."a{n-1}"`` for ``sgn(M)<a_{j,p}, x - rho_p> = 0``
    and ``"amax"`` for ``sgn(M)<a_max,p, x - rho_p> = |M|``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (params.n,):
        raise InvalidInputError(f"expected a vector of length {params.n}")
    if abs(x.sum()) > tol * max(1.0, np.abs(x).max()):
        raise InvalidInputError(f"point is not in the zero-sum hyperplane (sum = {x.sum()})")
    base = root_base(params.n, params.p)
    d = x - rho_p(params)
    vals = [params.sgn * float(a.to_array() @ d) for a in base.simple_roots]
    top = params.absM - params.sgn * float(base.maximal_root.to_array() @ d)
    slacks = vals + [top]
    labels = [f"a{j}" for j in range(1, params.n)] + ["amax"]
    active = tuple(lab for lab, s in zip(labels, slacks) if abs(s) <= tol)
    T = params.period
    in_alcove = bool(np.all(np.diff(x) < tol) and x[-1] > x[0] - T - tol)
    if min(slacks) < -tol or not in_alcove:
        return SimplexLocation("outside", (), in_alcove)
    return SimplexLocation("boundary" if active else "interior", active, in_alcove)


def barycenter(params: ModelParams) -> np.ndarray:
    return vertices(params).mean(axis=0)


def sample_simplex(params: ModelParams, count: int, rng: np.random.Generator,
                   closed: bool = False) -> np.ndarray:
    """Uniform random points of the simplex via Dirichlet weights on the vertices.

    With ``closed=True`` a third of the points are pushed onto random facets.
    """
    verts = vertices(params)
    w = rng.dirichlet(np.ones(params.n), size=count)
    if closed:
        hit = rng.random(count) < 1 / 3
        drop = rng.integers(0, params.n, size=count)
        w[hit, drop[hit]] = 0.0
        w /= w.sum(axis=1, keepdims=True)
    return w @ verts


def equal_distance_configuration(params: ModelParams) -> np.ndarray:
    """Centred configuration with all neighbour gaps equal to ``2pi/(alpha n)``."""
    n = params.n
    return params.period / n * ((n + 1) / 2 - np.arange(1, n + 1))
