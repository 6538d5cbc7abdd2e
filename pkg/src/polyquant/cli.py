"""``polyquant check|classify|quantize|qr <file> [--k 1..10] [--csv] [--out path]``.

Exit codes: 0 when every verdict passes, 1 on a mathematical verdict failure,
2 on an input error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lattice as lat
from . import linalg as la
from . import models, reps, toric, vsympl
from .modelfile import LatticeInput, ModelFile, ParseError, SchemaVersionMismatch, VSpaceModel, emit, load, read_file

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors that mean "the model violates an invariant" rather than "the file is unusable"
INVARIANT_ERRORS = (
    vsympl.NotSkew, vsympl.JacobiViolation, vsympl.NotCompatible, vsympl.NotSymmetric,
    reps.NotCommuting, reps.NotSkewHermitian, reps.DimensionMismatch, reps.NotFaithful,
    models.InconsistentDegrees, toric.ConfigInvalid, toric.NotTransverse, lat.NotFull, lat.NotABasis,
)


def seed_from_env() -> int:
    return int(os.environ.get("POLYQUANT_SEED", "0"))


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, la.GaussRational):
        return [str(x.re), str(x.im)]
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    results: dict = field(default_factory=dict)
    table: list = field(default_factory=list)
    verdicts: dict = field(default_factory=dict)
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def body(self) -> dict:
        return {"command": self.command, "inputs_digest": self.inputs_digest,
                "results": jsonable(self.results), "table": jsonable(self.table),
                "verdicts": jsonable(self.verdicts)}

    def digest(self) -> str:
        """Hash of everything except timing."""
        return hashlib.sha256(json.dumps(self.body(), sort_keys=True, ensure_ascii=False).encode()).hexdigest()

    def to_json(self) -> str:
        out = self.body()
        out["results_digest"] = self.digest()
        out["timing_s"] = round(self.timing, 6)
        return json.dumps(out, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.table:
            cols = list(self.table[0].keys())
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for row in self.table:
                w.writerow({c: json.dumps(jsonable(row[c]), ensure_ascii=False) if isinstance(row[c], (list, tuple))
                            else jsonable(row[c]) for c in cols})
        return buf.getvalue()


def inputs_digest(mf: ModelFile, ks: Sequence[int] | None) -> str:
    h = hashlib.sha256(emit(mf).encode())
    h.update(repr(list(ks) if ks is not None else None).encode())
    return h.hexdigest()


# --- commands ------------------------------------------------------------------------


def cmd_check(mf: ModelFile, ks=None) -> RunReport:
    rep = RunReport("check", inputs_digest(mf, ks))
    try:
        obj = load(mf)
    except INVARIANT_ERRORS as e:
        rep.verdicts["invariants"] = False
        rep.results["error"] = type(e).__name__
        rep.results["message"] = str(e)
        if isinstance(e, vsympl.NotSkew):
            rep.results["component"] = e.component
        return rep
    rep.verdicts["invariants"] = True
    _CHECKS[mf.kind](obj, rep)
    return rep


def _check_vspace(m: VSpaceModel, rep: RunReport):
    ok, cert = vsympl.is_nondegenerate(m.space)
    rep.results.update(dim_u=m.space.dim_u, dim_v=m.space.dim_v, kernel_certificate=cert)
    rep.verdicts["nondegenerate"] = ok
    if m.lie is not None:
        rep.verdicts["jacobi"] = True
    if m.complex_structure is not None:
        j = m.complex_structure
        compatible = vsympl.compatible_complex_check(j, m.space)
        rep.verdicts["compatible"] = compatible
        if compatible and j.exact:
            plus, minus = vsympl.eigenspace_split(j, m.space)
            rep.verdicts["eigenspaces_lagrangian"] = (vsympl.is_lagrangian(plus, m.space)
                                                      and vsympl.is_lagrangian(minus, m.space))
        if compatible and m.weights:
            dr = vsympl.definiteness_report(j, m.space, m.weights)
            rep.table = [{"weight": w.weight, "inertia": w.inertia, "verdict": w.verdict,
                          "eigenspace_plus": w.eigenspace_verdict_plus,
                          "eigenspace_minus": w.eigenspace_verdict_minus} for w in dr.per_weight]
            rep.verdicts["definiteness_cross_check"] = dr.cross_check


def _check_rep(r: reps.AbelianRep, rep: RunReport):
    ws = reps.weight_decomposition(r)
    rep.results.update(exact=ws.exact, rank=r.rank, dim_v=r.dim_v)
    rep.table = [{"weight": w, "multiplicity": m} for w, m in zip(ws.weights, ws.multiplicities)]
    ok, cert = reps.is_faithful(ws if r.rank else r)
    rep.verdicts["faithful"] = ok
    if ok:
        rep.results["rank_status"] = reps.rank_check(r).status
    else:
        rep.results["kernel_certificate"] = cert


def _check_lattice(li: LatticeInput, rep: RunReport):
    span = lat.span_lattice(li.periods)
    shuffled = list(li.periods.periods)
    random.Random(seed_from_env()).shuffle(shuffled)
    again = lat.span_lattice(lat.PeriodData(li.periods.dim_v, tuple(reversed(shuffled))))
    rep.results.update(hnf=span.basis, rank=span.rank, full=span.full)
    rep.verdicts["hnf_canonical"] = again.basis == span.basis
    if li.basis is not None:
        b = lat.RationalLattice(li.periods.dim_v, li.basis)
        rep.verdicts["basis_full"] = b.full
        if b.full:
            rep.verdicts["basis_prequantum"] = lat.is_prequantum_lattice(b, li.periods)


def _check_presentation(m: models.ManifoldPresentation, rep: RunReport):
    rep.results.update(half_dim=m.half_dim, dim_v=m.dim_v, periods_given=m.periods is not None)
    rep.verdicts["faithful"] = m.faithful()


def _check_toric(c: toric.QRConfig, rep: RunReport):
    ks = c.k_range or (1,)
    pres = c.model.presentation()
    rep.verdicts["oracle_agreement"] = all(toric.holomorphic_dim(c.model, k) == models.rr_index(pres, k) for k in ks)
    rep.verdicts["invariant_bound"] = all(toric.invariant_dim(c.model, k) <= toric.holomorphic_dim(c.model, k)
                                          for k in ks)


def _check_monodromy(p: models.MonodromyPresentation, rep: RunReport):
    try:
        perms = models.monodromy_weight_action(p)
    except models.WeightsNotPermuted as e:
        rep.verdicts["weights_permuted"] = False
        rep.results["message"] = str(e)
        return
    rep.verdicts["weights_permuted"] = True
    rep.table = [{"generator": i, "permutation": q} for i, q in enumerate(perms)]


_CHECKS = {
    "vspace": _check_vspace, "rep": _check_rep, "lattice": _check_lattice,
    "presentation": _check_presentation, "toric": _check_toric, "monodromy": _check_monodromy,
}


def cmd_classify(mf: ModelFile, ks=None) -> RunReport:
    if mf.kind != "lattice":
        raise ParseError("classify expects a lattice file")
    li: LatticeInput = load(mf)
    rep = RunReport("classify", inputs_digest(mf, ks))
    span = lat.span_lattice(li.periods)
    q = lat.is_quantizable(li.periods, nonquantizable_by_fiat=li.nonquantizable_by_fiat)
    rep.results["period_lattice"] = {"basis": span.basis, "rank": span.rank, "full": span.full}
    rep.results["quantizable"] = {
        "quantizable": q.quantizable,
        "minimal_rank_prequantization": q.minimal_rank_prequantization,
        "prequantum_lattice_exists": q.prequantum_lattice_exists,
        "principal_is_prequantum": q.principal_is_prequantum,
        "period_group_is_lattice": q.period_group_is_lattice,
        "notes": q.notes,
    }
    rep.verdicts["quantizable"] = q.quantizable
    if not q.quantizable:
        return rep
    try:
        principal = lat.principal_lattice(li.periods, rng=random.Random(seed_from_env()))
        rep.results["principal"] = {"basis": principal.basis}
        witness = principal
    except lat.NotFullRank as e:
        rep.results["principal"] = {"error": "NotFullRank", "rank": e.lattice.rank, "witness": e.witness.basis}
        witness = e.witness
    basis = li.basis if li.basis is not None else witness.basis
    lattice_b = lat.RationalLattice(li.periods.dim_v, basis)
    rep.verdicts["basis_prequantum"] = lat.is_prequantum_lattice(lattice_b, li.periods)
    ws = lat.classify_minimal(basis)
    rep.results["basis"] = [list(b) for b in basis]
    rep.results["weights_2πi"] = [list(w) for w in ws.weights]
    rep.table = [{"weight_index": i, "unit": "2πi", "weight": w} for i, w in enumerate(ws.weights)]
    rep.verdicts["round_trip"] = lat.weights_to_lattice(ws).basis == lattice_b.basis
    rep.verdicts["pairing_integral"] = lat.pairing_integral(ws, li.periods)
    return rep


def cmd_quantize(mf: ModelFile, ks=None) -> RunReport:
    if mf.kind != "presentation":
        raise ParseError("quantize expects a presentation file")
    m: models.ManifoldPresentation = load(mf)
    ks = list(ks) if ks is not None else list(range(1, 11))
    rep = RunReport("quantize", inputs_digest(mf, ks))
    vol = models.adapted_volume(m)
    rep.results["adapted_volume"] = vol
    rep.table = [{"k": k, "rr_index": models.rr_index(m, k)} for k in ks]
    try:
        g = models.growth_check(m, ks)
    except models.NotPositive as e:
        rep.results["growth"] = {"error": "NotPositive", "message": str(e)}
        rep.verdicts["positive"] = False
        return rep
    rep.verdicts["positive"] = True
    for row, r in zip(rep.table, g.remainders):
        row["remainder"] = r
    rep.results["growth"] = {"leading_coefficient": g.leading, "polynomial": g.polynomial, "notes": g.notes}
    rep.verdicts["leading_equals_volume"] = g.matches
    return rep


def cmd_qr(mf: ModelFile, ks=None) -> RunReport:
    if mf.kind != "toric":
        raise ParseError("qr expects a toric file")
    c: toric.QRConfig = load(mf)
    if ks is not None:
        c = toric.QRConfig(c.name, c.model, c.reduced, tuple(ks), c.expect)
    rep = RunReport("qr", inputs_digest(mf, ks))
    r = toric.qr_experiment(c)
    rep.table = [{"k": x.k, "shifts": x.shifts, "per_weight": x.per_weight, "lhs": x.lhs, "rhs": x.rhs,
                  "verdict": x.verdict} for x in r.rows]
    rep.results.update(name=c.name, expect=c.expect, asymptotic=r.asymptotic, notes=r.notes)
    if c.expect == "=":
        rep.verdicts["matches_expectation"] = r.asymptotic == "="
    else:
        rep.verdicts["matches_expectation"] = r.asymptotic != "=" and r.rows[-1].verdict == "≠"
    return rep


COMMANDS = {"check": cmd_check, "classify": cmd_classify, "quantize": cmd_quantize, "qr": cmd_qr}


def parse_k_range(s: str) -> list[int]:
    """'1..10', '4' or '1,3,5'."""
    try:
        if ".." in s:
            lo, hi = s.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad k range {s!r}") from e


def run(command: str, path: str, ks=None) -> RunReport:
    mf = read_file(path)
    t0 = time.perf_counter()
    rep = COMMANDS[command](mf, ks)
    rep.timing = time.perf_counter() - t0
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="polyquant", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("file")
    ap.add_argument("--k", type=parse_k_range, default=None, help="k range, e.g. 1..10")
    ap.add_argument("--csv", action="store_true", help="emit the result table as CSV")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    args = ap.parse_args(argv)
    try:
        rep = run(args.command, args.file, args.k)
    except (ParseError, SchemaVersionMismatch, toric.ConfigInvalid, ValueError) as e:
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.to_csv() if args.csv else rep.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
