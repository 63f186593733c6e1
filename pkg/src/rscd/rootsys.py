"""Exact combinatorics of the A_{n-1} root system in the p-shifted base.

Weights live in the zero-sum hyperplane of R^n.  Every weight used here has
coordinates in (1/n)Z, so a :class:`Weight` stores the integer vector ``n * x``
and all arithmetic (sums, integer multiples, inner products, dominance tests)
is exact.  Floats only appear through :meth:`Weight.to_array`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class Weight:
    """A vector of the hyperplane ``x_1 + ... + x_n = 0`` with coordinates in (1/n)Z.

    ``scaled`` holds ``n * x`` as integers.
    """

    scaled: tuple[int, ...]

    def __post_init__(self):
        if len(self.scaled) < 2:
            raise InvalidParameterError("a weight needs at least two coordinates")
        if sum(self.scaled) != 0:
            raise InvalidParameterError(f"coordinates {self.coords} do not sum to zero")

    @classmethod
    def from_coords(cls, coords) -> "Weight":
        """Build a weight from rational coordinates (each must lie in (1/n)Z)."""
        n = len(coords)
        scaled = []
        for c in coords:
            s = Fraction(c) * n
            if s.denominator != 1:
                raise InvalidParameterError(f"coordinate {c} is not in (1/{n})Z")
            scaled.append(int(s))
        return cls(tuple(scaled))

    @classmethod
    def zero(cls, n: int) -> "Weight":
        return cls((0,) * n)

    @classmethod
    def unit_difference(cls, n: int, j: int, k: int) -> "Weight":
        """The root ``e_j - e_k`` (1-based indices)."""
        v = [0] * n
        v[j - 1] += n
        v[k - 1] -= n
        return cls(tuple(v))

    @property
    def n(self) -> int:
        return len(self.scaled)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.n) for s in self.scaled)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.scaled, dtype=float) / self.n

    def dot(self, other: "Weight") -> Fraction:
        if other.n != self.n:
            raise InvalidParameterError("dimension mismatch")
        return Fraction(sum(a * b for a, b in zip(self.scaled, other.scaled)), self.n * self.n)

    def int_dot(self, other: "Weight") -> int:
        """Inner product that is known to be an integer (root against weight)."""
        value = self.dot(other)
        if value.denominator != 1:
            raise InvalidParameterError(f"inner product {value} is not integral")
        return int(value)

    def permute(self, perm) -> "Weight":
        """Return ``y`` with ``y_j = x_{perm[j]}`` (``perm`` 1-based, length n)."""
        return Weight(tuple(self.scaled[perm[j] - 1] for j in range(self.n)))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.scaled, other.scaled)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.scaled, other.scaled)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.scaled))

    def __mul__(self, k: int) -> "Weight":
        if not isinstance(k, int):
            return NotImplemented
        return Weight(tuple(k * a for a in self.scaled))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "Weight(" + ", ".join(str(c) for c in self.coords) + ")"


def check_coprime(n: int, p: int) -> None:
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2, got {n}")
    if not 1 <= p <= n - 1:
        raise InvalidParameterError(f"p must lie in 1..{n - 1}, got {p}")
    if math.gcd(n, p) != 1:
        raise InvalidParameterError(f"p not coprime to n (gcd({n}, {p}) = {math.gcd(n, p)})")


def _wrap(j: int, n: int) -> int:
    """Map an integer index to its representative in 1..n."""
    return (j - 1) % n + 1


@lru_cache(maxsize=None)
def simple_roots_p(n: int, p: int) -> tuple[Weight, ...]:
    """Simple roots ``a_{j,p} = e_j - e_{j+p}`` (indices mod n), j = 1..n-1."""
    check_coprime(n, p)
    return tuple(Weight.unit_difference(n, j, _wrap(j + p, n)) for j in range(1, n))


def _solve_exact(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan elimination over the rationals; returns X with A X = B."""
    size = len(a)
    cols = len(b[0])
    aug = [list(a[i]) + list(b[i]) for i in range(size)]
    for c in range(size):
        pivot = next(r for r in range(c, size) if aug[r][c] != 0)
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(size):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [vr - f * vc for vr, vc in zip(aug[r], aug[c])]
    return [row[size:size + cols] for row in aug]


@lru_cache(maxsize=None)
def fundamental_weights_p(n: int, p: int) -> tuple[Weight, ...]:
    """Weights ``omega_{k,p}`` in E_n dual to the p-simple roots.

    Solved exactly from ``<a_{j,p}, omega_{k,p}> = delta_{jk}`` together with
    the zero-sum constraint.
    """
    roots = simple_roots_p(n, p)
    rows = [[Fraction(c) for c in r.coords] for r in roots] + [[Fraction(1)] * n]
    rhs = [[Fraction(int(j == k)) for k in range(n - 1)] for j in range(n - 1)]
    rhs.append([Fraction(0)] * (n - 1))
    sol = _solve_exact(rows, rhs)
    return tuple(Weight.from_coords([sol[i][k] for i in range(n)]) for k in range(n - 1))


@dataclass(frozen=True)
class RootBase:
    """The p-dependent base of A_{n-1} with its dual weights and maximal root."""

    n: int
    p: int
    simple_roots: tuple[Weight, ...]
    fundamental_weights: tuple[Weight, ...]
    maximal_root: Weight

    def simple_coefficients(self, w: Weight) -> tuple[Fraction, ...]:
        """Coefficients of ``w`` in the simple-root basis (``<w, omega_{i,p}>``)."""
        return tuple(w.dot(om) for om in self.fundamental_weights)

    def weight_coefficients(self, w: Weight) -> tuple[Fraction, ...]:
        """Coefficients of ``w`` in the fundamental-weight basis (``<a_{j,p}, w>``)."""
        return tuple(a.dot(w) for a in self.simple_roots)

    def from_weight_coefficients(self, m) -> Weight:
        total = Weight.zero(self.n)
        for mj, om in zip(m, self.fundamental_weights):
            total = total + int(mj) * om
        return total


@lru_cache(maxsize=None)
def root_base(n: int, p: int = 1) -> RootBase:
    roots = simple_roots_p(n, p)
    amax = roots[0]
    for a in roots[1:]:
        amax = amax + a
    return RootBase(n, p, roots, fundamental_weights_p(n, p), amax)


@lru_cache(maxsize=None)
def orbit(n: int, r: int) -> tuple[Weight, ...]:
    """The S_n-orbit of ``omega_r``: all ``sum_{j in J} e_j - (r/n) sum e``, |J| = r.

    Ordered lexicographically by the index set J.
    """
    return tuple(orbit_vector(n, J) for J in orbit_index_sets(n, r))


@lru_cache(maxsize=None)
def orbit_index_sets(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    if n < 2 or not 1 <= r <= n - 1:
        raise InvalidParameterError(f"r must lie in 1..{n - 1}, got {r}")
    return tuple(itertools.combinations(range(1, n + 1), r))


def orbit_vector(n: int, J) -> Weight:
    r = len(J)
    return Weight(tuple(n * (j in J) - r for j in range(1, n + 1)))


def index_set_of(nu: Weight) -> tuple[int, ...]:
    """Recover J from an orbit vector ``nu = sum_{j in J} e_j - (|J|/n) sum e``."""
    top = max(nu.scaled)
    return tuple(j + 1 for j, s in enumerate(nu.scaled) if s == top)


@lru_cache(maxsize=None)
def sigma_p(n: int, p: int) -> tuple[int, ...]:
    """The permutation ``j -> jp mod n`` (values in 1..n) as a 1-based tuple.

    As a coordinate map ``y -> (y_{sigma(1)}, ..., y_{sigma(n)})`` (see
    :func:`apply_sigma_p`) it sends each ``omega_{k,p}`` to a standard
    fundamental weight.
    """
    check_coprime(n, p)
    return tuple(_wrap(j * p, n) for j in range(1, n + 1))


def apply_sigma_p(n: int, p: int, x):
    """Apply sigma_p to a Weight or a real n-vector."""
    perm = sigma_p(n, p)
    if isinstance(x, Weight):
        return x.permute(perm)
    x = np.asarray(x)
    return x[np.asarray(perm) - 1]


def apply_sigma_p_inverse(n: int, p: int, x):
    perm = sigma_p(n, p)
    inv = [0] * n
    for j, s in enumerate(perm, start=1):
        inv[s - 1] = j
    if isinstance(x, Weight):
        return x.permute(tuple(inv))
    x = np.asarray(x)
    return x[np.asarray(inv) - 1]


@lru_cache(maxsize=None)
def sigma_p_index_map(n: int, p: int) -> tuple[int, ...]:
    """``perm`` with ``sigma_p(omega_{k,p}) = omega_{perm[k-1]}``, found by matching."""
    standard = fundamental_weights_p(n, 1)
    out = []
    for om in fundamental_weights_p(n, p):
        image = apply_sigma_p(n, p, om)
        out.append(standard.index(image) + 1)
    return tuple(out)


def map_coefficients_to_standard(n: int, p: int, m) -> tuple[int, ...]:
    """Transport fundamental-weight coefficients in the p-base to the standard base."""
    idx = sigma_p_index_map(n, p)
    out = [0] * (n - 1)
    for k, mk in enumerate(m):
        out[idx[k] - 1] = int(mk)
    return tuple(out)


def dominance_leq(mu: Weight, lam: Weight, base: RootBase) -> bool:
    """``mu <= lam`` in dominance order: ``lam - mu`` is an N_0-combination of simple roots."""
    coeffs = base.simple_coefficients(lam - mu)
    return all(c.denominator == 1 and c >= 0 for c in coeffs)


@dataclass(frozen=True)
class PositiveRoot:
    """A p-positive root with its telescoping decomposition ``sum_{i in I} a_{i,p}``.

    ``wraps`` is |K|, the number of indices of I in (n-p, n]; it equals the
    number of ``-2pi/alpha`` shifts in ``<root, x>`` when the periodic coordinate
    convention is used, so ``<root, rho_p> = |I| g - |K| 2pi/alpha``.
    """

    root: Weight
    indices: tuple[int, ...]
    wraps: int


@lru_cache(maxsize=None)
def positive_roots_p(n: int, p: int) -> tuple[PositiveRoot, ...]:
    """All roots with non-negative coefficients in the p-base.

    The simple roots form the chain ``e_{s_1} - e_{s_2}, ..., e_{s_{n-1}} - e_{s_n}``
    with ``s_i = ip mod n``; the positive roots are ``e_{s_i} - e_{s_k}``, i < k.
    """
    check_coprime(n, p)
    s = sigma_p(n, p)
    out = []
    for i in range(n - 1):
        for k in range(i + 1, n):
            indices = tuple(s[t] for t in range(i, k))
            wraps = sum(1 for t in indices if t > n - p)
            out.append(PositiveRoot(Weight.unit_difference(n, s[i], s[k]), indices, wraps))
    return tuple(out)


@lru_cache(maxsize=None)
def all_roots(n: int) -> tuple[tuple[int, int], ...]:
    """Every root ``e_j - e_k`` (j != k) as a 1-based index pair."""
    return tuple((j, k) for j in range(1, n + 1) for k in range(1, n + 1) if j != k)
