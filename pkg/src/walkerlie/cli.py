"""Command-line entry point.

Every command builds a JSON-serializable report; ``--format text`` renders the
same report as indented text.  Exit codes: 0 verified, 1 verification failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import detsolve, flows, liealg, reduce, walker
from .reference_data import load
from .symexpr import ParseError, param, parse

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    fmt: str = "text"
    out: str | None = None
    degree: int = 1
    only: str | None = None
    path: str | None = None
    word: str = ""
    save: str | None = None
    case: str | None = None
    coeffs: list = field(default_factory=list)


# --------------------------------------------------------------------------
# golden comparisons
# --------------------------------------------------------------------------

_XS = [param(f"X{i}") for i in range(1, 8)]


def _vector(text: str) -> list:
    e = parse(text)
    return [e.diff(x).as_rational() for x in _XS]


def compare_commutators(alg) -> dict:
    gold = load("algebra")["commutators"]
    mism = []
    for i in range(7):
        for j in range(7):
            want = _vector(gold[i][j])
            got = alg.structure[i][j]
            if [Fraction(v) for v in got] != want:
                mism.append({"i": i + 1, "j": j + 1, "computed": liealg.field_str(got), "expected": gold[i][j]})
    return {"matched": 49 - len(mism), "total": 49, "mismatches": mism}


def compare_adjoint(alg, i: int) -> dict:
    gold = load("algebra")["adjoint"][str(i)]
    M = liealg.adjoint_matrix(alg, i)
    if gold == "identity":
        gold = [["1" if r == c else "0" for c in range(7)] for r in range(7)]
    mism = []
    for r in range(7):
        for c in range(7):
            if M[r][c] != parse(gold[r][c]):
                mism.append({"row": r + 1, "col": c + 1, "computed": str(M[r][c]), "expected": gold[r][c]})
    return {"generator": i, "matrix": [[str(e) for e in row] for row in M], "mismatches": mism}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_symmetries(cfg: RunConfig):
    if cfg.degree < 0:
        raise UsageError("degree must be nonnegative")
    ans, basis = detsolve.symmetries(cfg.degree)
    rep = detsolve.report(ans, basis)
    gens = liealg.generators()
    rep["membership"] = {f"X{k + 1}": detsolve.in_span(basis.fields, g) for k, g in enumerate(gens)}
    ok = basis.dimension == 7 if cfg.degree >= 1 else True
    if cfg.degree >= 1:
        ok = ok and all(rep["membership"].values())
    return rep, OK if ok else FAIL


def cmd_tables(cfg: RunConfig):
    alg = liealg.algebra()
    rep = {}
    ok = True
    if cfg.only in (None, "commutators"):
        cm = compare_commutators(alg)
        cm["table"] = [[liealg.field_str(alg.structure[i][j]) for j in range(7)] for i in range(7)]
        rep["commutators"] = cm
        ok = ok and not cm["mismatches"]
    if cfg.only in (None, "adjoint"):
        adj = [compare_adjoint(alg, i) for i in range(1, 8)]
        rep["adjoint"] = adj
        ok = ok and all(not a["mismatches"] for a in adj)
    return rep, OK if ok else FAIL


def _load_solution(path: str) -> flows.SolutionTriple:
    try:
        with open(path) as fh:
            data = json.load(fh)
        return flows.SolutionTriple.from_dict(data)
    except (OSError, json.JSONDecodeError, KeyError, ParseError) as exc:
        raise UsageError(f"cannot read solution file {path}: {exc}") from exc


def _residual_report(sol) -> tuple:
    res = walker.residual_system(sol)
    data = walker.einstein_check(sol)
    ok = all(r.is_zero() for r in res)
    return {
        "solution": sol.as_dict(),
        "residuals": [str(r) for r in res],
        "residual_zero": ok,
        "einstein": data.einstein,
        "lambda": str(data.einstein_factor) if data.einstein else None,
    }, ok


def cmd_verify(cfg: RunConfig):
    rep, ok = _residual_report(_load_solution(cfg.path))
    return rep, OK if ok else FAIL


def cmd_orbit(cfg: RunConfig):
    sol = _load_solution(cfg.path)
    try:
        word = flows.parse_word(cfg.word)
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from exc
    new = flows.orbit(sol, word)
    rep, ok = _residual_report(new)
    rep = {"word": [[i, str(v)] for i, v in word], **rep}
    if cfg.save:
        with open(cfg.save, "w") as fh:
            json.dump(new.as_dict(), fh, indent=2)
            fh.write("\n")
    return rep, OK if ok else FAIL


def cmd_reduce(cfg: RunConfig):
    try:
        key = reduce.case_key(cfg.case)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return reduce.report(key), OK


def cmd_normalize(cfg: RunConfig):
    if len(cfg.coeffs) != 7:
        raise UsageError("normalize takes exactly 7 coefficients")
    try:
        coeffs = [Fraction(c) for c in cfg.coeffs]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coefficient: {exc}") from exc
    if not any(coeffs):
        raise UsageError("the zero vector has no normal form")
    nf = liealg.normalize(coeffs)
    rep = {"input": liealg.field_str(coeffs), **nf.as_dict(),
           "representative": liealg.field_str(nf.vector)}
    return rep, OK


COMMANDS = {
    "symmetries": cmd_symmetries,
    "tables": cmd_tables,
    "verify": cmd_verify,
    "orbit": cmd_orbit,
    "reduce": cmd_reduce,
    "normalize": cmd_normalize,
}


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "\n".join(f"{pad}- {_scalar(v)}" for v in obj)
        lines = []
        for v in obj:
            body = render_text(v, indent + 1)
            lines.append(f"{pad}-\n{body}" if body else f"{pad}- {_scalar(v)}")
        return "\n".join(lines)
    return pad + _scalar(obj)


def _scalar(v) -> str:
    if isinstance(v, (dict, list)):
        return "[]" if isinstance(v, list) else "{}"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="walkerlie", description="Point symmetries of the Einstein-Walker system.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symmetries", help="determining equations and symmetry basis")
    s.add_argument("--degree", type=int, default=1)

    s = sub.add_parser("tables", help="commutator table and adjoint matrices")
    s.add_argument("--only", choices=("commutators", "adjoint"))

    s = sub.add_parser("verify", help="check a solution file")
    s.add_argument("path")

    s = sub.add_parser("orbit", help="transport a solution by a word of flows")
    s.add_argument("path")
    s.add_argument("--word", default="", help='e.g. "5:1,7:1" or "5:s"')
    s.add_argument("--save", help="write the transported solution file")

    s = sub.add_parser("reduce", help="similarity reduction for one case")
    s.add_argument("--case", required=True)

    s = sub.add_parser("normalize", help="optimal-system normal form")
    s.add_argument("coeffs", nargs="*")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    cfg = RunConfig(ns.command, ns.format, ns.out,
                    degree=getattr(ns, "degree", 1), only=getattr(ns, "only", None),
                    path=getattr(ns, "path", None), word=getattr(ns, "word", ""),
                    save=getattr(ns, "save", None), case=getattr(ns, "case", None),
                    coeffs=getattr(ns, "coeffs", []))
    try:
        rep, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    text = json.dumps(rep, indent=2) if cfg.fmt == "json" else render_text(rep)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
