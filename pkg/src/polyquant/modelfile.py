"""JSON model files.

Rationals are written as strings ("3", "-1/2"), Gaussian rationals as
["re", "im"] pairs, and weights as {"2πi": [...]}, i.e. rational multiples of
the symbolic unit 2πi. ``emit`` writes a canonical form (sorted keys, two-space
indent), so parse followed by emit is stable byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import linalg as la
from .lattice import PeriodData
from .linalg import GaussRational
from .models import ManifoldPresentation, MonodromyPresentation
from .reps import AbelianRep
from .toric import QRConfig, ReducedModel, ToricBundleModel, reduced_point_model
from .vsympl import ComplexStructureJ, VSymplecticSpace, make_lie_model

SCHEMA_VERSION = "1.0"
KINDS = ("vspace", "rep", "lattice", "presentation", "toric", "monodromy")
UNIT = "2πi"


class ParseError(ValueError):
    pass


class SchemaVersionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ModelFile:
    schema_version: str
    kind: str
    payload: dict


def parse(text: str) -> ModelFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict) or not {"schema_version", "kind", "payload"} <= obj.keys():
        raise ParseError("expected an object with schema_version, kind and payload")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionMismatch(f"schema {obj['schema_version']!r}, expected {SCHEMA_VERSION!r}")
    if obj["kind"] not in KINDS:
        raise ParseError(f"unknown kind {obj['kind']!r}")
    if not isinstance(obj["payload"], dict):
        raise ParseError("payload must be an object")
    return ModelFile(obj["schema_version"], obj["kind"], obj["payload"])


def emit(mf: ModelFile) -> str:
    obj = {"schema_version": mf.schema_version, "kind": mf.kind, "payload": mf.payload}
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_file(path) -> ModelFile:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as e:
        raise ParseError(str(e)) from e


# --- scalar codecs -----------------------------------------------------------------


def enc_q(x) -> str:
    return str(la.frac(x))


def dec_q(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"expected a rational string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {x!r}") from e


def enc_c(x):
    if isinstance(x, GaussRational):
        return [str(x.re), str(x.im)] if x.im != 0 else str(x.re)
    return enc_q(x)


def dec_c(x):
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError(f"complex entries are [re, im], got {x!r}")
        return GaussRational(dec_q(x[0]), dec_q(x[1]))
    return dec_q(x)


def enc_vec(v) -> list:
    return [enc_q(x) for x in v]


def dec_vec(v) -> tuple:
    if not isinstance(v, list):
        raise ParseError(f"expected a list, got {v!r}")
    return tuple(dec_q(x) for x in v)


def enc_mat(m) -> list:
    return [enc_vec(r) for r in m]


def dec_mat(m) -> tuple:
    if not isinstance(m, list):
        raise ParseError(f"expected a matrix, got {m!r}")
    return tuple(dec_vec(r) for r in m)


def enc_weight(w) -> dict:
    return {UNIT: enc_vec(w)}


def dec_weight(w) -> tuple:
    if not isinstance(w, dict) or set(w) != {UNIT}:
        raise ParseError(f"weights are written as {{\"{UNIT}\": [...]}}, got {w!r}")
    return dec_vec(w[UNIT])


def _get(p: dict, key: str, default: Any = ...):
    if key in p:
        return p[key]
    if default is ...:
        raise ParseError(f"missing field {key!r}")
    return default


def _int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{name} must be an integer")
    return x


# --- domain objects ----------------------------------------------------------------


@dataclass(frozen=True)
class VSpaceModel:
    space: VSymplecticSpace
    lie: tuple | None = None
    complex_structure: ComplexStructureJ | None = None
    weights: tuple = ()


@dataclass(frozen=True)
class LatticeInput:
    periods: PeriodData
    basis: tuple | None = None
    nonquantizable_by_fiat: bool = False


def load(mf: ModelFile):
    """Domain object for a parsed file. Invariant violations raise the domain errors."""
    p = mf.payload
    try:
        return _LOADERS[mf.kind](p)
    except (KeyError, TypeError, IndexError) as e:
        raise ParseError(f"malformed {mf.kind} payload: {e}") from e


def _load_vspace(p):
    j = p.get("complex_structure")
    j = ComplexStructureJ(dec_mat(j)) if j is not None else None
    weights = tuple(dec_vec(w) for w in p.get("weights", []))
    if "lie" in p:
        lie = tuple(tuple(dec_vec(r) for r in m) for m in p["lie"])
        return VSpaceModel(make_lie_model(lie), lie, j, weights)
    dim_u, dim_v = _int(_get(p, "dim_u"), "dim_u"), _int(_get(p, "dim_v"), "dim_v")
    omega = tuple(dec_mat(m) for m in _get(p, "omega"))
    return VSpaceModel(VSymplecticSpace(dim_u, dim_v, omega), None, j, weights)


def _load_rep(p):
    gens = tuple(tuple(tuple(dec_c(x) for x in r) for r in g) for g in _get(p, "generators"))
    return AbelianRep(_int(_get(p, "dim_v"), "dim_v"), _int(_get(p, "rank"), "rank"), gens)


def _load_lattice(p):
    dim_v = _int(_get(p, "dim_v"), "dim_v")
    periods = PeriodData(dim_v, tuple(dec_vec(v) for v in _get(p, "periods")))
    basis = p.get("basis")
    basis = tuple(dec_vec(v) for v in basis) if basis is not None else None
    fiat = p.get("nonquantizable_by_fiat", False)
    if not isinstance(fiat, bool):
        raise ParseError("nonquantizable_by_fiat must be a boolean")
    return LatticeInput(periods, basis, fiat)


def _load_presentation(p):
    dim_v = _int(_get(p, "dim_v"), "dim_v")
    periods = p.get("periods")
    periods = PeriodData(dim_v, tuple(dec_vec(v) for v in periods)) if periods is not None else None
    return ManifoldPresentation(
        dim_v,
        tuple(dec_weight(w) for w in _get(p, "weights")),
        tuple(tuple(_int(d, "degree") for d in r) for r in _get(p, "degrees")),
        tuple(_int(g, "genus") for g in p.get("genera", [])),
        periods,
        tuple(_int(m, "multiplicity") for m in p.get("multiplicities", [])),
    )


def _load_toric(p) -> QRConfig:
    pinned = {int(k): tuple(_int(x, "shift") for x in v) for k, v in p.get("pinned", {}).items()}
    model = ToricBundleModel(
        tuple(tuple(_int(d, "degree") for d in r) for r in _get(p, "degrees")),
        tuple(_int(a, "action weight") for a in _get(p, "action")),
        tuple(dec_q(s) for s in _get(p, "shifts")),
        tuple(pinned.items()),
    )
    red = _get(p, "reduced")
    if red.get("from_moment_lines"):
        reduced = ReducedModel(presentation=reduced_point_model(model)[0], from_moment_lines=True)
    elif "presentation" in red:
        reduced = ReducedModel(presentation=_load_presentation(red["presentation"]))
    else:
        reduced = ReducedModel(_int(_get(red, "points"), "points"), _int(_get(red, "rank"), "rank"))
    ks = tuple(_int(k, "k") for k in p.get("k_range", list(range(1, 11))))
    return QRConfig(p.get("name", "toric"), model, reduced, ks, p.get("expect", "≠"))


def _load_monodromy(p):
    return MonodromyPresentation(
        _int(_get(p, "dim_v"), "dim_v"),
        tuple(dec_mat(g) for g in _get(p, "generators")),
        tuple(dec_weight(w) for w in _get(p, "weights")),
        tuple(_int(m, "multiplicity") for m in p.get("multiplicities", [])),
    )


_LOADERS = {
    "vspace": _load_vspace,
    "rep": _load_rep,
    "lattice": _load_lattice,
    "presentation": _load_presentation,
    "toric": _load_toric,
    "monodromy": _load_monodromy,
}


def dump(obj, **extra) -> ModelFile:
    """ModelFile for a domain object (inverse of ``load`` on canonical forms)."""
    if isinstance(obj, VSpaceModel):
        if obj.lie is not None:
            p = {"lie": [enc_mat(m) for m in obj.lie]}
        else:
            s = obj.space
            p = {"dim_u": s.dim_u, "dim_v": s.dim_v, "omega": [enc_mat(m) for m in s.omega]}
        if obj.complex_structure is not None:
            p["complex_structure"] = enc_mat(obj.complex_structure.j)
        if obj.weights:
            p["weights"] = [enc_vec(w) for w in obj.weights]
        kind = "vspace"
    elif isinstance(obj, AbelianRep):
        if not obj.exact:
            raise TypeError("only exact representations are serialized")
        p = {"dim_v": obj.dim_v, "rank": obj.rank,
             "generators": [[[enc_c(x) for x in r] for r in g] for g in obj.generators]}
        kind = "rep"
    elif isinstance(obj, LatticeInput):
        p = {"dim_v": obj.periods.dim_v, "periods": [enc_vec(v) for v in obj.periods.periods]}
        if obj.basis is not None:
            p["basis"] = [enc_vec(v) for v in obj.basis]
        if obj.nonquantizable_by_fiat:
            p["nonquantizable_by_fiat"] = True
        kind = "lattice"
    elif isinstance(obj, ManifoldPresentation):
        p, kind = _dump_presentation(obj), "presentation"
    elif isinstance(obj, QRConfig):
        m = obj.model
        p = {"name": obj.name, "degrees": [list(r) for r in m.degrees], "action": list(m.action),
             "shifts": [enc_q(s) for s in m.shifts], "k_range": list(obj.k_range), "expect": obj.expect}
        if m.pinned:
            p["pinned"] = {str(k): list(v) for k, v in m.pinned}
        r = obj.reduced
        p["reduced"] = ({"from_moment_lines": True} if r.from_moment_lines
                        else {"presentation": _dump_presentation(r.presentation)} if r.presentation is not None
                        else {"points": r.points, "rank": r.rank})
        kind = "toric"
    elif isinstance(obj, MonodromyPresentation):
        p = {"dim_v": obj.dim_v, "generators": [enc_mat(g) for g in obj.generators],
             "weights": [enc_weight(w) for w in obj.weights], "multiplicities": list(obj.multiplicities)}
        kind = "monodromy"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    p.update(extra)
    return ModelFile(SCHEMA_VERSION, kind, p)


def _dump_presentation(m: ManifoldPresentation) -> dict:
    p = {"dim_v": m.dim_v, "weights": [enc_weight(w) for w in m.weights],
         "degrees": [list(r) for r in m.degrees], "genera": list(m.genera),
         "multiplicities": list(m.multiplicities)}
    if m.periods is not None:
        p["periods"] = [enc_vec(v) for v in m.periods.periods]
    return p
