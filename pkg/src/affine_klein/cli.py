"""Command-line front end: ``affine-klein <command> ...``.

Exit codes: 0 success, 1 failed verification suite, 2 argument errors,
3 contract violations, 4 unresolved classification.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .affine import LinExpr, ParamAffineMap
from .classify import (
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    I2,
    FamilyId,
    enumerate_families,
    format_families_table,
    freeness_certificate,
    normalize,
)
from .cohomology import coboundary_delta2, full_cohomology, h2_twisted, monodromy_from_structure, rho
from .errors import ContractViolation, EvaluationError
from .fibration import (
    TRIVIAL_PAIRS_ASSUMPTION,
    FibrationModel,
    PeriodLatticeBasis,
    chern_from_surgery_pair,
    has_global_section,
    lattice_covolume,
    lattices_integral_isomorphic,
)
from .kleingroup import GroupHom, is_free_bounded, relation_holds
from .suites import SUITES, run_suite

SCHEMA_VERSION = "1.0"
SCHEMA_PATH = Path(__file__).with_name("report_schema.json")
BOUND_ENV = "AFFINE_KLEIN_BOUND"
DEFAULT_BOUND = 4


class ArgumentError(Exception):
    pass


class LiteralError(ArgumentError):
    def __init__(self, text: str, pos: int, message: str):
        self.text, self.pos = text, pos
        super().__init__(f"{message}\n  {text}\n  {' ' * pos}^")


# --------------------------------------------------------------------------
# literal parsing

_NAMED = {"I": I2, "B1": B1, "B2": B2, "B3": B3}
_FAMILIES = {"A1": A1, "A2": A2, "A3": A3, "A4": A4}
_NAMED_RE = re.compile(r"\s*(I|B1|B2|B3)\s*$")
_FAMILY_RE = re.compile(r"\s*(A[1-4])\s*\(\s*(-?\d+)\s*\)\s*$")
_MATRIX_RE = re.compile(r"\s*\[\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*\]\s*$")
_NUMBER_RE = re.compile(r"\d+(?:/\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_linear(text: str, full: str, offset: int):
    if m := _NAMED_RE.match(text):
        return _NAMED[m.group(1)]
    if m := _FAMILY_RE.match(text):
        return _FAMILIES[m.group(1)](int(m.group(2)))
    if m := _MATRIX_RE.match(text):
        from .intlinalg import IntMatrix

        return IntMatrix([[int(m.group(1)), int(m.group(2))], [int(m.group(3)), int(m.group(4))]])
    lead = len(text) - len(text.lstrip())
    raise LiteralError(full, offset + lead, "expected I, B1, B2, B3, A1(n)..A4(n) or [[p,q],[r,s]]")


def parse_linexpr(text: str, full: str | None = None, offset: int = 0) -> LinExpr:
    """``p/q`` or linear combinations like ``c*x+d*y+e``."""
    full = full if full is not None else text
    pos = 0
    n = len(text)
    out = LinExpr()

    def skip(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    def fail(p, msg):
        raise LiteralError(full, offset + p, msg)

    pos = skip(pos)
    if pos == n:
        fail(pos, "empty expression")
    first = True
    while pos < n:
        sign = 1
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip(pos + 1)
        elif not first:
            fail(pos, "expected '+' or '-'")
        if pos >= n:
            fail(pos, "dangling sign")
        coeff = Fraction(1)
        name = None
        if m := _NUMBER_RE.match(text, pos):
            try:
                coeff = Fraction(m.group(0))
            except ZeroDivisionError:
                fail(pos, "zero denominator")
            pos = skip(m.end())
            if pos < n and text[pos] == "*":
                pos = skip(pos + 1)
                if not (m2 := _NAME_RE.match(text, pos)):
                    fail(pos, "expected a parameter name after '*'")
                name = m2.group(0)
                pos = skip(m2.end())
            elif _NAME_RE.match(text, pos):
                fail(pos, "expected '*' between coefficient and parameter")
        elif m := _NAME_RE.match(text, pos):
            name = m.group(0)
            pos = skip(m.end())
        else:
            fail(pos, "expected a number or a parameter name")
        out = out + (LinExpr.var(name, sign * coeff) if name else LinExpr(sign * coeff))
        first = False
    return out


def parse_affine_map(text: str) -> ParamAffineMap:
    """``<linear>;<t1>,<t2>``."""
    semi = text.find(";")
    if semi < 0:
        raise LiteralError(text, len(text), "expected ';' between linear part and translation")
    linear = parse_linear(text[:semi], text, 0)
    rest = text[semi + 1 :]
    parts = rest.split(",")
    if len(parts) != 2:
        where = semi + 1 + (len(parts[0]) + 1 + len(parts[1]) if len(parts) > 2 else len(rest))
        raise LiteralError(text, where, "expected exactly two translation components separated by ','")
    t1 = parse_linexpr(parts[0], text, semi + 1)
    t2 = parse_linexpr(parts[1], text, semi + 2 + len(parts[0]))
    try:
        return ParamAffineMap(linear, (t1, t2))
    except ContractViolation as exc:
        raise LiteralError(text, 0, str(exc)) from None


def parse_assignment(text: str | None) -> dict[str, Fraction]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise ArgumentError(f"bad assignment {item!r}, expected name=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise ArgumentError(f"bad value in assignment {item!r}") from None
    return out


def parse_pair(text: str) -> tuple[int, int]:
    try:
        m, n = (int(x) for x in text.split(","))
    except ValueError:
        raise ArgumentError(f"bad pair {text!r}, expected m,n") from None
    return m, n


_BASIS_RE = re.compile(r"\s*\[\s*\[([^\]]*)\]\s*,\s*\[([^\]]*)\]\s*\]\s*$")


def parse_basis(text: str) -> PeriodLatticeBasis:
    m = _BASIS_RE.match(text)
    if not m:
        raise LiteralError(text, 0, "expected a 2x2 basis [[p,q],[r,s]] with rational entries")
    try:
        rows = [tuple(Fraction(x.strip()) for x in g.split(",")) for g in m.groups()]
    except (ValueError, ZeroDivisionError):
        raise LiteralError(text, 0, "bad rational entry") from None
    if any(len(r) != 2 for r in rows):
        raise LiteralError(text, 0, "each row needs two entries")
    return PeriodLatticeBasis(tuple(rows))


# --------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    paper_anchors: list[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "paper_anchors": self.paper_anchors,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> "Report":
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["results"], d["paper_anchors"], d["schema_version"])


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _map_json(f: ParamAffineMap) -> dict:
    return {"linear": f.linear.tolist(), "translation": [str(t) for t in f.translation]}


def _hom_json(h: GroupHom) -> dict:
    return {"a": _map_json(h.image_a), "b": _map_json(h.image_b)}


# --------------------------------------------------------------------------
# commands


def _cmd_families(args) -> tuple[int, str, Report]:
    rows = enumerate_families()
    report = Report(
        "families",
        {},
        {"families": [r.to_json() for r in rows]},
        ["classification-theorem"] + [f"template:{r.label}" for r in rows],
    )
    return 0, format_families_table(rows), report


def _search_bound(args) -> int:
    if args.bound is not None:
        return args.bound
    env = os.environ.get(BOUND_ENV)
    if env is None:
        return DEFAULT_BOUND
    try:
        return int(env)
    except ValueError:
        raise ArgumentError(f"{BOUND_ENV}={env!r} is not an integer") from None


def _cmd_classify(args) -> tuple[int, str, Report]:
    a = parse_affine_map(args.a)
    b = parse_affine_map(args.b)
    sigma = parse_assignment(args.assign)
    h = GroupHom(a, b)
    bound = _search_bound(args)
    inputs = {"a": args.a, "b": args.b, "assign": {k: _frac(v) for k, v in sigma.items()}, "bound": bound}
    if not relation_holds(h):
        raise ContractViolation("the images do not satisfy aba = b")
    missing = [p for p in h.parameters if p not in sigma]
    if missing:
        raise EvaluationError(missing[0])
    rep = normalize(h, sigma, replace_b=not args.no_replace_b)
    results: dict = {"status": rep.status, "family": rep.family.to_json(), "moves": [m.to_json() for m in rep.moves]}
    lines = [f"status: {rep.status}", f"family: {rep.family}"]
    code = 0
    if rep.status == "admissible":
        params = {}
        for k, e in rep.parameters.items():
            params[k] = {"expr": str(e), "value": _frac(e.evaluate(sigma))}
        free = is_free_bounded(rep.canonical_hom, sigma, bound)
        cert = freeness_certificate(rep.family)
        results.update(
            parameters=params,
            canonical=_hom_json(rep.canonical_hom),
            torus={"a": _map_json(rep.torus_structure[0]), "b2": _map_json(rep.torus_structure[1])},
            levi_civita=rep.levi_civita,
            free_up_to_bound=bool(free),
            witness=str(free.witness) if free.witness else None,
            certificate_holds=cert.holds({k: e.evaluate(sigma) for k, e in rep.parameters.items()}),
        )
        lines.append("parameters: " + ", ".join(f"{k} = {v['value']}" for k, v in params.items()))
        lines.append(f"canonical: {rep.canonical_hom}")
        lines.append(f"torus cover: a = {rep.torus_structure[0]}, b^2 = {rep.torus_structure[1]}")
        lines.append(f"Levi-Civita: {'yes' if rep.levi_civita else 'no'}")
        lines.append(f"free up to bound {bound}: {'yes' if free else 'no'}")
    elif rep.status == "rejected":
        results["reason"] = rep.family.reason
        lines.append(f"reason: {rep.family.reason}")
    else:
        results["reason"] = rep.family.reason
        lines.append(f"reason: {rep.family.reason}")
        code = 4
    lines.append("moves: " + ("; ".join(str(m) for m in rep.moves) or "none"))
    anchors = ["classification-theorem", "normalisation-moves"]
    return code, "\n".join(lines) + "\n", Report("classify", inputs, results, anchors)


def _rep_from_args(args):
    if args.rep:
        i = int(args.rep[3:])
        return rho(i, args.n if args.n is not None else 1)
    label = args.family
    n = args.n if label in ("F2", "F4") else None
    if label in ("F2", "F4") and n is None:
        n = 2 if label == "F4" else 1
    return monodromy_from_structure(FamilyId(label, n))


def _cmd_cohomology(args) -> tuple[int, str, Report]:
    r = _rep_from_args(args)
    h2 = h2_twisted(r)
    results = {
        "monodromy": {"label": r.label, "n": r.n, "a": r.rho_a.tolist(), "b": r.rho_b.tolist()},
        "delta2": coboundary_delta2(r).tolist(),
        "H2": h2.to_json(),
    }
    lines = [str(r), f"delta2 = {coboundary_delta2(r)}", f"H^2 = {h2}"]
    notes = []
    if r.label == "rho2" and abs(r.n) == 1:
        notes.append("n = +-1: the Z/n summand is trivial and suppressed")
    if args.full:
        fc = full_cohomology(r)
        results["full"] = {"H0": fc.H0.to_json(), "H1": fc.H1.to_json(), "H2": fc.H2.to_json(), "euler_rank_sum": fc.euler_rank_sum}
        lines += [f"H^0 = {fc.H0}", f"H^1 = {fc.H1}", f"rank alternating sum = {fc.euler_rank_sum}"]
    results["notes"] = notes
    lines += [f"note: {t}" for t in notes]
    inputs = {"rep": args.rep, "family": args.family, "n": args.n, "full": args.full}
    return 0, "\n".join(lines) + "\n", Report("cohomology", inputs, results, ["twisted-h2-lemma", "monodromy-table"])


def _cmd_chern(args) -> tuple[int, str, Report]:
    r = rho(int(args.rep[3:]), args.n if args.n is not None else 1)
    m, n = parse_pair(args.pair)
    c = chern_from_surgery_pair(r, m, n)
    section = has_global_section(FibrationModel(r, c))
    results = {
        "monodromy": {"label": r.label, "n": r.n, "a": r.rho_a.tolist(), "b": r.rho_b.tolist()},
        "ambient": c.ambient.to_json(),
        "coordinates": list(c.coordinates),
        "zero": c.is_zero,
        "global_section": section,
        "assumption": TRIVIAL_PAIRS_ASSUMPTION,
    }
    text = f"{r}\nH^2 = {c.ambient}\nclass of ({m},{n}) = {list(c.coordinates)}\nglobal section: {'yes' if section else 'no'}\nassumption: {TRIVIAL_PAIRS_ASSUMPTION}\n"
    inputs = {"rep": args.rep, "n": args.n, "pair": [m, n]}
    return 0, text, Report("chern", inputs, results, ["surgery-chern-class", "global-section-lemma"])


def _cmd_lattice(args) -> tuple[int, str, Report]:
    if args.covolume:
        l = parse_basis(args.covolume)
        v = lattice_covolume(l)
        return 0, f"covolume = {v}\n", Report("lattice", {"covolume": args.covolume}, {"covolume": _frac(v)}, ["period-lattice-examples"])
    l1, l2 = parse_basis(args.isomorphic[0]), parse_basis(args.isomorphic[1])
    iso = lattices_integral_isomorphic(l1, l2)
    results = {
        "isomorphic": iso,
        "covolumes": [_frac(lattice_covolume(l1)), _frac(lattice_covolume(l2))],
    }
    text = f"integrally isomorphic: {'yes' if iso else 'no'}\ncovolumes = {results['covolumes'][0]}, {results['covolumes'][1]}\n"
    return 0, text, Report("lattice", {"isomorphic": list(args.isomorphic)}, results, ["period-lattice-examples"])


def _cmd_verify(args) -> tuple[int, str, Report]:
    checks = run_suite(args.suite, args.bound)
    ok = all(c.ok for c in checks)
    results = {"passed": ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}
    text = "\n".join(c.line() for c in checks) + "\n"
    return (0 if ok else 1), text, Report("verify", {"suite": args.suite, "bound": args.bound}, results, [f"suite:{args.suite}"])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="also write the JSON report to this file")

    p = _Parser(prog="affine-klein", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("families", parents=[common], help="table of admissible and rejected families")

    c = sub.add_parser("classify", parents=[common], help="normalise a homomorphism and name its family")
    c.add_argument("--a", required=True, help="image of a, e.g. 'I;0,x'")
    c.add_argument("--b", required=True, help="image of b, e.g. 'B1;y,0'")
    c.add_argument("--assign", help="parameter values, e.g. x=1,y=2")
    c.add_argument("--bound", type=int, help=f"freeness search bound (default ${BOUND_ENV} or {DEFAULT_BOUND})")
    c.add_argument("--no-replace-b", action="store_true", help="disable the b -> a b generator replacement")

    h = sub.add_parser("cohomology", parents=[common], help="twisted H^2 for a monodromy")
    g = h.add_mutually_exclusive_group(required=True)
    g.add_argument("--rep", choices=("rho1", "rho2", "rho3", "rho4"))
    g.add_argument("--family", choices=("F1", "F2", "F3", "F4"))
    h.add_argument("--n", type=int, help="discrete parameter (rho4: shear 2n; F4: off-diagonal entry)")
    h.add_argument("--full", action="store_true", help="also compute H^0 and H^1")

    ch = sub.add_parser("chern", parents=[common], help="Chern class of a surgery pair")
    ch.add_argument("--rep", required=True, choices=("rho1", "rho2", "rho3", "rho4"))
    ch.add_argument("--n", type=int)
    ch.add_argument("--pair", required=True, help="m,n")

    la = sub.add_parser("lattice", parents=[common], help="period lattice covolume / integral isomorphism")
    lg = la.add_mutually_exclusive_group(required=True)
    lg.add_argument("--covolume", metavar="BASIS")
    lg.add_argument("--isomorphic", nargs=2, metavar="BASIS")

    v = sub.add_parser("verify", parents=[common], help="run an oracle suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--bound", type=int)
    return p


_COMMANDS = {
    "families": _cmd_families,
    "classify": _cmd_classify,
    "cohomology": _cmd_cohomology,
    "chern": _cmd_chern,
    "lattice": _cmd_lattice,
    "verify": _cmd_verify,
}


def execute(argv: list[str]) -> tuple[int, str, Report | None]:
    """Run one command; returns ``(exit_code, output_text, report)``.

    On failure the output text is the diagnostic and the report is ``None``.
    """
    try:
        args = build_parser().parse_args(argv)
        code, text, report = _COMMANDS[args.command](args)
    except ArgumentError as exc:
        return 2, f"error: {exc}\n", None
    except ContractViolation as exc:
        return 3, f"contract violation: {exc}\n", None
    if args.format == "json":
        text = report.dumps() + "\n"
    if args.out:
        Path(args.out).write_text(report.dumps() + "\n")
    return code, text, report


def main(argv: list[str] | None = None) -> int:
    code, text, _ = execute(sys.argv[1:] if argv is None else argv)
    (sys.stdout if code in (0, 1, 4) else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
