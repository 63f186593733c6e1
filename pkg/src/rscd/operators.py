"""Dense matrices of the difference operators S_r, D_r and H_r on the lattice."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeffs import SINGULAR_TOL, index_masks, sign_table, step
from . import kernels
from .errors import InvalidInputError, InvalidParameterError, SingularValueError
from .model import Lattice, ModelParams, enumerate_lattice
from .rootsys import index_set_of, orbit

KINDS = ("S", "D", "H")


@dataclass(frozen=True)
class LatticeFunction:
    """Values of a function on the lattice, in lattice order."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class OperatorMatrix:
    kind: str
    r: int
    entries: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown operator kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def apply(self, phi) -> np.ndarray:
        values = phi.values if isinstance(phi, LatticeFunction) else np.asarray(phi)
        return self.entries @ values

    def to_json_obj(self) -> dict:
        ent = np.asarray(self.entries, dtype=complex)
        return {
            "kind": self.kind,
            "r": self.r,
            "dim": self.dim,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in ent],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)

    def to_csv(self) -> str:
        ent = np.asarray(self.entries)
        if np.iscomplexobj(ent):
            if np.any(ent.imag != 0):
                raise InvalidInputError("CSV output is only available for real matrices")
            ent = ent.real
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in ent:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def inner_product(phi, psi) -> complex:
    """``sum_mu phi(mu) conj(psi(mu))``."""
    a = phi.values if isinstance(phi, LatticeFunction) else np.asarray(phi, dtype=complex)
    b = psi.values if isinstance(psi, LatticeFunction) else np.asarray(psi, dtype=complex)
    if a.shape != b.shape:
        raise InvalidInputError(f"lattice functions have lengths {a.shape} and {b.shape}")
    return complex(np.sum(a * np.conj(b)))


# ----------------------------------------------------------------------------
# band structure shared by S and D

@dataclass(frozen=True)
class _Band:
    rows: np.ndarray      # source lattice index mu
    cols: np.ndarray      # target lattice index mu + nu
    orbit_pos: np.ndarray  # which orbit vector (column of the V tables)
    index_sets: tuple


@lru_cache(maxsize=None)
def _band(params: ModelParams, r: int) -> _Band:
    lat = enumerate_lattice(params)
    nus = orbit(params.n, r)
    steps = [step(params, nu) for nu in nus]
    rows, cols, pos = [], [], []
    for i, m in enumerate(lat.points):
        for k, d in enumerate(steps):
            j = lat.index_of.get(tuple(a + b for a, b in zip(m, d)))
            if j is not None:
                rows.append(i)
                cols.append(j)
                pos.append(k)
    return _Band(np.array(rows, dtype=int), np.array(cols, dtype=int), np.array(pos, dtype=int),
                 tuple(index_set_of(nu) for nu in nus))


def _check_r(params: ModelParams, r: int) -> None:
    if not 1 <= r <= params.n - 1:
        raise InvalidParameterError(f"r = {r} must lie in 1..{params.n - 1}")


def _v_table(params: ModelParams, Js, X) -> np.ndarray:
    values, min_den = kernels.coeff_products(X, index_masks(params.n, Js), params.alpha, params.g)
    return values, min_den


def _band_values(params: ModelParams, lat: Lattice, band: _Band, sign_root: bool) -> np.ndarray:
    X = lat.coordinates
    vx, dx = _v_table(params, band.index_sets, X)
    if np.any(dx[band.rows, band.orbit_pos] < SINGULAR_TOL):
        raise SingularValueError("pole of V at a lattice point")
    forward = vx[band.rows, band.orbit_pos]
    if not sign_root:
        return forward
    vy, dy = _v_table(params, band.index_sets, -X)
    if np.any(dy[band.cols, band.orbit_pos] < SINGULAR_TOL):
        raise SingularValueError("pole of V at a reflected lattice point")
    radicand = forward * vy[band.cols, band.orbit_pos]
    if np.any(radicand <= 0):
        k = int(np.argmin(radicand))
        raise SingularValueError(f"non-positive radicand {radicand[k]} at row {band.rows[k]}")
    signs = sign_table(params)
    s = np.array([signs[band.index_sets[k]] for k in band.orbit_pos], dtype=float)
    return s * np.sqrt(radicand)


def _banded(params: ModelParams, r: int, sign_root: bool) -> np.ndarray:
    _check_r(params, r)
    lat = enumerate_lattice(params)
    band = _band(params, r)
    out = np.zeros((len(lat), len(lat)))
    if band.rows.size:
        out[band.rows, band.cols] = _band_values(params, lat, band, sign_root)
    return out


def build_S(params: ModelParams, r: int) -> OperatorMatrix:
    """Matrix of S_r: row mu, column mu + nu, entry ``W_nu(x_mu)``."""
    return OperatorMatrix("S", r, _banded(params, r, sign_root=True))


def build_D(params: ModelParams, r: int) -> OperatorMatrix:
    """Matrix of D_r: same band as S_r with entry ``V_nu(x_mu)``."""
    return OperatorMatrix("D", r, _banded(params, r, sign_root=False))


def build_H(params: ModelParams, r: int) -> OperatorMatrix:
    """``(S_r + S_{n-r}) / 2``, real symmetric."""
    _check_r(params, r)
    a = build_S(params, r).entries
    b = a if 2 * r == params.n else build_S(params, params.n - r).entries
    return OperatorMatrix("H", r, 0.5 * (a + b))


def adjoint_check(params: ModelParams, r: int) -> float:
    """``max |S_r - S_{n-r}^dagger|`` over all entries."""
    a = build_S(params, r).entries
    b = build_S(params, params.n - r).entries
    return float(np.max(np.abs(a - b.conj().T)))


def commutator_norm(A, B) -> float:
    """Frobenius norm of ``AB - BA``."""
    a = A.entries if isinstance(A, OperatorMatrix) else np.asarray(A)
    b = B.entries if isinstance(B, OperatorMatrix) else np.asarray(B)
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a @ b - b @ a))
