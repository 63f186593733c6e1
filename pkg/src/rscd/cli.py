"""Command-line front end: ``rscd <command> --n N --p P --M M --g G``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, RSCDError
from .model import (ModelParams, build_params, classify_coupling, enumerate_lattice, excluded_g_values,
                    rho_standard, sample_simplex, type_i_interval)
from .rootsys import check_coprime

SCHEMA_VERSION = 1
DEFAULT_TOLS = {"tol_eigen": 1e-8, "tol_gram": 1e-8, "tol_identity": 1e-10}
COMMANDS = ("validate", "lattice", "operators", "spectrum", "eigenbasis", "verify", "classical")


@dataclass
class RunConfig:
    command: str
    n: int
    p: int
    M: int
    g: float
    tols: dict = field(default_factory=lambda: dict(DEFAULT_TOLS))
    seed: int = 42
    format: str = "json"
    output: str | None = None
    kind: str | None = None
    r: int | None = None


class Report:
    """A JSON document or CSV table plus the exit code it implies."""

    def __init__(self, payload, code: int = 0, table: list[list] | None = None):
        self.payload = payload
        self.code = code
        self.table = table

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            if self.table is None:
                raise InvalidParameterError("this command has no CSV form")
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.table)
            return buf.getvalue()
        doc = {"schema_version": SCHEMA_VERSION}
        doc.update(self.payload)
        return json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _params(cfg: RunConfig) -> ModelParams:
    return build_params(cfg.n, cfg.p, cfg.M, cfg.g)


# ----------------------------------------------------------------------------
# commands

def cmd_validate(cfg: RunConfig) -> Report:
    doc = {"n": cfg.n, "p": cfg.p, "M": cfg.M, "g": cfg.g,
           "sgnM": (1 if cfg.M > 0 else -1) if cfg.M else 0}
    try:
        params = _params(cfg)
    except InvalidParameterError as exc:
        doc.update({"valid": False, "error": str(exc)})
        try:
            check_coprime(cfg.n, cfg.p)
            if cfg.M:
                q = pow(cfg.p, -1, cfg.n)
                lo, hi = type_i_interval(cfg.n, cfg.p, q, doc["sgnM"])
                doc["type_i_interval"] = [str(lo), str(hi)]
                if cfg.n * cfg.g + cfg.M > 0:
                    doc["gamma"] = cfg.g * cfg.p / (cfg.n * cfg.g + cfg.M)
        except (InvalidParameterError, ValueError):
            pass
        return Report(doc, code=2)
    coupling = classify_coupling(params.n, params.gamma)
    nearby = [v for v in excluded_g_values(params) if abs(v - params.g) <= 0.1 * params.g]
    doc.update({
        "valid": True,
        "alpha": params.alpha,
        "q": params.q,
        "gamma": params.gamma,
        "coupling_type": coupling.kind,
        "dimension": params.dimension,
        "excluded_g_nearby": nearby,
    })
    return Report(doc)


def cmd_lattice(cfg: RunConfig) -> Report:
    params = _params(cfg)
    lat = enumerate_lattice(params)
    header = ["index"] + [f"m_{j}" for j in range(1, params.n)] + [f"x_{j}" for j in range(1, params.n + 1)]
    rows = [[i, *m, *map(repr, map(float, x))] for i, (m, x) in enumerate(zip(lat.points, lat.coordinates))]
    return Report({"params": params.as_dict(), "D": len(lat), "points": lat.to_json_obj()},
                  table=[header] + rows)


def cmd_operators(cfg: RunConfig) -> Report:
    from .operators import build_D, build_H, build_S

    params = _params(cfg)
    builders = {"S": build_S, "D": build_D, "H": build_H}
    kinds = [cfg.kind] if cfg.kind else ["S", "D", "H"]
    rs = [cfg.r] if cfg.r else list(range(1, params.n))
    mats = [builders[k](params, r) for k in kinds for r in rs]
    D = params.dimension
    header = ["kind", "r", "row"] + [f"col_{j}" for j in range(D)]
    rows = []
    for mat in mats:
        for i, row in enumerate(np.asarray(mat.entries).real):
            rows.append([mat.kind, mat.r, i, *map(repr, map(float, row))])
    return Report({"params": params.as_dict(), "operators": [m.to_json_obj() for m in mats]},
                  table=[header] + rows)


def cmd_spectrum(cfg: RunConfig) -> Report:
    from .eigen import eigenvalues_H

    params = _params(cfg)
    lat = enumerate_lattice(params)
    values = [eigenvalues_H(params, m) for m in lat.points]
    header = ["index"] + [f"E_{r}" for r in range(1, params.n)]
    rows = [[i, *map(repr, v)] for i, v in enumerate(values)]
    doc = {"params": params.as_dict(), "D": len(lat),
           "eigenvalues": [{"index": i, "lambda": list(m), "E": list(v)}
                           for i, (m, v) in enumerate(zip(lat.points, values))]}
    return Report(doc, table=[header] + rows)


def cmd_eigenbasis(cfg: RunConfig) -> Report:
    from .eigen import eigenbasis, eigenreport

    params = _params(cfg)
    basis = eigenbasis(params)
    header = ["lambda_index", "mu_index", "re", "im"]
    rows = [[i, j, repr(float(z.real)), repr(float(z.imag))]
            for i, row in enumerate(basis.table) for j, z in enumerate(row)]
    return Report(eigenreport(params), table=[header] + rows)


def _macdonald_identity_residual(params: ModelParams, rng) -> float:
    from .coeffs import V_batch
    from .macdonald import elementary_E
    from .rootsys import orbit_index_sets

    X = sample_simplex(params, 50, rng)
    rho = rho_standard(params.n, params.g)
    worst = 0.0
    for r in range(1, params.n):
        total = V_batch(params.g, params.alpha, orbit_index_sets(params.n, r), X).sum(axis=1)
        worst = max(worst, float(np.max(np.abs(total - elementary_E(params.n, params.alpha, r, rho)))))
    return worst


def verify_checks(params: ModelParams, tols: dict, seed: int) -> dict:
    """Every invariant with its residual and the tolerance it is held to."""
    from .classical import sign_pattern_minimum
    from .eigen import (dual_eigen_check, eigenbasis, forward_residual, gram_deviation, n0_product,
                        n0_relative_mismatch, n0_sum, norm_recurrence_deviation, resolution_deviation,
                        self_duality_deviation, spectral_crosscheck)
    from .operators import adjoint_check, build_S, commutator_norm

    rng = np.random.default_rng(seed)
    n = params.n
    S = {r: build_S(params, r).entries for r in range(1, n)}
    comm = max((commutator_norm(S[r], S[s]) / max(np.linalg.norm(S[r]) * np.linalg.norm(S[s]), 1e-300)
                for r in S for s in S), default=0.0)
    eigenbasis(params)
    lat = enumerate_lattice(params)
    dual = max(dual_eigen_check(params, r, lam, mu)
               for r in range(1, n) for lam in lat.points for mu in lat.points)
    spectral = spectral_crosscheck(params, seed=seed, tol=tols["tol_eigen"])
    checks = {
        "commutators": (comm, 1e-9),
        "adjointness": (max(adjoint_check(params, r) for r in S), tols["tol_identity"]),
        "n0_formula": (n0_relative_mismatch(params), 1e-9),
        "macdonald_identity": (_macdonald_identity_residual(params, rng), tols["tol_identity"]),
        "gram": (gram_deviation(params), tols["tol_gram"]),
        "self_duality": (self_duality_deviation(params), 1e-9),
        "forward_eigen": (forward_residual(params), tols["tol_eigen"]),
        "dual_eigen": (dual, tols["tol_eigen"]),
        "norm_recurrence": (norm_recurrence_deviation(params), tols["tol_identity"]),
        "resolution_of_identity": (resolution_deviation(params), 1e-7),
        "spectrum": (spectral.eigenvalue_deviation, tols["tol_eigen"]),
        "overlaps": (spectral.overlap_deviation, 1e-7),
        "sign_pattern": (max(0.0, -sign_pattern_minimum(params, sample_simplex(params, 200, rng, closed=True))),
                         1e-12),
    }
    out = {name: {"residual": res, "tol": tol, "pass": bool(res <= tol)} for name, (res, tol) in checks.items()}
    out["n0_formula"].update({"n0_sum": n0_sum(params), "n0_product": n0_product(params)})
    return out


def cmd_verify(cfg: RunConfig) -> Report:
    params = _params(cfg)
    try:
        checks = verify_checks(params, cfg.tols, cfg.seed)
    except RSCDError as exc:
        return Report({"params": params.as_dict(), "passed": False, "error": f"{type(exc).__name__}: {exc}"},
                      code=1)
    passed = all(c["pass"] for c in checks.values())
    header = ["check", "residual", "tol", "pass"]
    rows = [[k, repr(float(v["residual"])), repr(float(v["tol"])), v["pass"]] for k, v in checks.items()]
    return Report({"params": params.as_dict(), "passed": passed, "checks": checks},
                  code=0 if passed else 1, table=[header] + rows)


def cmd_classical(cfg: RunConfig) -> Report:
    from .classical import (PhasePoint, classical_H, classical_Hr, radicand_identity_check,
                            sign_pattern_minimum)
    from .macdonald import elementary_E
    from .rootsys import orbit_index_sets

    params = _params(cfg)
    rng = np.random.default_rng(cfg.seed)
    n = params.n
    X = sample_simplex(params, 100, rng)
    radicand = max(radicand_identity_check(params.g, params.alpha, J, x)
                   for x in X for r in range(1, n) for J in orbit_index_sets(n, r))
    header = ["sample", "H"] + [f"H_{r}" for r in range(1, n)]
    rows, reflect, still = [], 0.0, []
    for i, x in enumerate(X):
        mom = rng.uniform(-math.pi, math.pi, size=n)
        mom -= mom.mean()
        pt = PhasePoint(x, mom)
        hr = [classical_Hr(params, r, pt) for r in range(1, n)]
        reflect = max(reflect, max(abs(h - classical_Hr(params, r, pt, g=-params.g))
                                   for r, h in zip(range(1, n), hr)))
        rows.append([i, repr(classical_H(params.g, params.alpha, pt)), *map(repr, hr)])
        rest = PhasePoint(x, np.zeros(n))
        still.append([classical_Hr(params, r, rest) for r in range(1, n)])
    rho = rho_standard(n, params.g)
    doc = {
        "params": params.as_dict(),
        "radicand_identity_max": radicand,
        "sign_pattern_min": sign_pattern_minimum(params, sample_simplex(params, 200, rng, closed=True)),
        "reflection_max": reflect,
        "zero_momentum_max": [max(s[r] for s in still) for r in range(n - 1)],
        "ground_energy": [elementary_E(n, params.alpha, r, rho).real for r in range(1, n)],
        "samples": [{"index": r[0], "H": float(r[1]), "H_r": [float(v) for v in r[2:]]} for r in rows],
    }
    return Report(doc, table=[header] + rows)


HANDLERS = {
    "validate": cmd_validate,
    "lattice": cmd_lattice,
    "operators": cmd_operators,
    "spectrum": cmd_spectrum,
    "eigenbasis": cmd_eigenbasis,
    "verify": cmd_verify,
    "classical": cmd_classical,
}


# ----------------------------------------------------------------------------
# argument parsing

def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLS:
        raise argparse.ArgumentTypeError(f"expected one of {sorted(DEFAULT_TOLS)} as name=value, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rscd", description="Quantised compactified RS model toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--M", type=int, required=True)
        sp.add_argument("--g", type=float, required=True)
        sp.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", default=None)
        if name == "operators":
            sp.add_argument("--kind", choices=("S", "D", "H"), default=None)
            sp.add_argument("--r", type=int, default=None)
    return parser


def parse_config(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    tols = dict(DEFAULT_TOLS)
    tols.update(dict(args.tol))
    return RunConfig(args.command, args.n, args.p, args.M, args.g, tols, args.seed, args.format,
                     args.output, getattr(args, "kind", None), getattr(args, "r", None))


def run(cfg: RunConfig) -> tuple[str, int]:
    try:
        report = HANDLERS[cfg.command](cfg)
        return report.render(cfg.format), report.code
    except InvalidParameterError as exc:
        return json.dumps({"schema_version": SCHEMA_VERSION, "valid": False, "error": str(exc)}) + "\n", 2
    except RSCDError as exc:
        return json.dumps({"schema_version": SCHEMA_VERSION, "error": f"{type(exc).__name__}: {exc}"}) + "\n", 1


def main(argv=None) -> int:
    cfg = parse_config(argv)
    text, code = run(cfg)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == 2:
        print("rscd: invalid parameters", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
