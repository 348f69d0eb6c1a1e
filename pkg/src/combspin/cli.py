"""
Command-line interface.

Every subcommand prints one JSON document on stdout (sorted keys, fixed
indentation, so identical inputs give identical bytes) and a one-line
summary on stderr.  Triangulation arguments are file paths, or
``builtin:<name>`` for a corpus entry.

Exit codes:
    0  success
    2  usage error
    3  invalid input (malformed file, failed triangulation checks)
    4  input is not orientable (spin and spin-c need an orientation)
    5  no solution: no spin structure, no spin-c structure, or a rejected beta
    6  internal invariant violation
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import corpus
from .binary_groups import element_order, enumerate_cover
from .complex import DeltaComplex, TriangulationError, orient_and_w1, parse_and_validate
from .homology import HomologyError, dual_cochain_complex
from .quaternion_models import build_a5_model, build_sigma4_model, model_check, order_histogram
from .spin import NonOrientableError, SpinError, oriented_model, solve_spin_structures
from .spinc import SpinCStructure, twisted_signs, find_spinc, spinc_check

__all__ = ["CommandResult", "run", "main", "EXIT_CODES"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_NONORIENTABLE = 4
EXIT_INFEASIBLE = 5
EXIT_INTERNAL = 6

EXIT_CODES = {
    EXIT_OK: "success",
    EXIT_USAGE: "usage error",
    EXIT_INVALID: "invalid input",
    EXIT_NONORIENTABLE: "input is not orientable",
    EXIT_INFEASIBLE: "no spin / spin-c structure (or beta rejected)",
    EXIT_INTERNAL: "internal invariant violation",
}


@dataclass
class CommandResult:
    status: int
    payload: dict
    summary: str

    def dumps(self) -> str:
        return json.dumps(self.payload, sort_keys=True, indent=2)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="combspin", description="Spin and spin-c structures on triangulated manifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("validate", help="check a triangulation file")
    v.add_argument("file")
    inv = sub.add_parser("invariants", help="orientability, w1, w2 verdict, cohomology")
    inv.add_argument("file")
    sp = sub.add_parser("spin", help="spin structures")
    sp.add_argument("file")
    sp.add_argument("--enumerate", action="store_true", help="list one sign vector per class")
    sp.add_argument("--act", metavar="COCYCLE", help="JSON map facet-class id -> bit, acting on the base")
    sc = sub.add_parser("spinc", help="spin-c structures")
    sc.add_argument("file")
    sc.add_argument("--beta", metavar="COCHAIN", help="JSON map codim-2 class id -> integer")
    co = sub.add_parser("corpus", help="built-in triangulations")
    co.add_argument("name", nargs="?", help="builtin name; omit to list")
    co.add_argument("--export", action="store_true", help="print the triangulation JSON instead")
    gr = sub.add_parser("groups", help="binary cover group statistics")
    gr.add_argument("--model-check", action="store_true", help="verify the quaternion models")
    return p


def _load_complex(arg: str) -> DeltaComplex:
    if arg.startswith("builtin:"):
        try:
            return corpus.builtin(arg[len("builtin:"):]).complex
        except KeyError as exc:
            raise TriangulationError(str(exc.args[0])) from None
    try:
        with open(arg) as fh:
            text = fh.read()
    except OSError as exc:
        raise TriangulationError(f"cannot read {arg}: {exc.strerror}") from None
    return parse_and_validate(text)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise TriangulationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise TriangulationError(f"malformed JSON in {path}: {exc}") from None


def _load_vector(path: str, convert, what: str):
    """Read a cochain file and convert it to model coordinates; bad shapes are invalid input."""
    doc = _load_json(path)
    try:
        return convert(doc)
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise TriangulationError(f"bad {what} in {path}: {exc}") from None


def _cmd_validate(args) -> CommandResult:
    dc = _load_complex(args.file)
    payload = {"valid": True, "dimension": dc.dimension, "simplices": dc.size,
               "face_classes_by_codimension": list(dc.counts())}
    return CommandResult(EXIT_OK, payload, f"valid {dc.dimension}-dimensional triangulation, "
                                           f"{dc.size} simplices")


def _cmd_invariants(args) -> CommandResult:
    dc = _load_complex(args.file)
    o = orient_and_w1(dc)
    dual = dual_cochain_complex(dc)
    payload = {
        "dimension": dc.dimension,
        "simplices": dc.size,
        "face_classes_by_codimension": list(dc.counts()),
        "orientable": o.orientable,
        "w1": {str(i): v for i, v in enumerate(o.w1)},
        "z2_betti": [dual.cohomology(k, "Z2").free_rank for k in range(dc.dimension + 1)],
    }
    if not o.orientable:
        payload["odd_cycle"] = list(o.certificate)
        payload["w2_zero"] = None
        return CommandResult(EXIT_OK, payload, "not orientable; spin invariants undefined")
    payload["orientation"] = list(o.orientation)
    for k in (1, 2):
        h = dual.cohomology(k, "Z")
        payload[f"H{k}"] = {"rank": h.free_rank, "torsion": h.torsion}
    s = solve_spin_structures(dc)
    payload["w2_zero"] = s.feasible
    payload["w2"] = s.to_json()["w2"]
    payload["spin_count"] = s.count
    summary = f"orientable, w2 {'vanishes' if s.feasible else 'is nonzero'}, {s.count} spin structure(s)"
    return CommandResult(EXIT_OK, payload, summary)


def _cmd_spin(args) -> CommandResult:
    dc = _load_complex(args.file)
    s = solve_spin_structures(dc)
    m = s.model
    payload = s.to_json()
    if not s.feasible:
        return CommandResult(EXIT_INFEASIBLE, payload, "no spin structure: w2 is nonzero")
    if args.enumerate:
        payload["classes"] = [m.facet_vector_to_input(x) for x in s.classes()]
    if args.act:
        omega = _load_vector(args.act, m.facet_vector_from_input, "--act cochain")
        if m.circuit_matrix.apply(omega):
            raise TriangulationError("the --act cochain is not a cocycle on the dual 1-cells")
        acted = s.normalize(s.base ^ omega)
        classes = s.classes()
        payload["act"] = {"input": m.facet_vector_to_input(omega), "result": m.facet_vector_to_input(acted),
                          "class_index": classes.index(acted), "same_class": acted == s.normalize(s.base)}
    return CommandResult(EXIT_OK, payload, f"{s.count} spin structure(s)")


def _cmd_spinc(args) -> CommandResult:
    dc = _load_complex(args.file)
    res = find_spinc(dc)
    payload = res.to_json()
    if args.beta:
        m = oriented_model(dc)
        beta = _load_vector(args.beta, m.face2_vector_from_input, "--beta cochain")
        d2 = m.dual.coboundary(2)
        report = {"beta": m.face2_vector_to_input(beta)}
        if d2 is not None and any(d2.apply(beta)):
            report.update(accepted=False, reason="beta is not a cocycle")
            payload["beta_check"] = report
            return CommandResult(EXIT_INFEASIBLE, payload, "beta rejected: not a cocycle")
        x = twisted_signs(m, res.w2, beta)
        if x is None:
            report.update(accepted=False, reason="beta does not reduce to w2 modulo coboundaries")
            payload["beta_check"] = report
            return CommandResult(EXIT_INFEASIBLE, payload, "beta rejected: not a lift of w2")
        st = SpinCStructure(m, tuple(beta), x)
        verdicts = spinc_check(st.trivialization(), beta)
        report.update(accepted=all(verdicts), signs=m.facet_vector_to_input(x))
        payload["beta_check"] = report
        if not all(verdicts):  # pragma: no cover
            raise SpinError("solved signs fail the twisted criterion")
        return CommandResult(EXIT_OK, payload, "beta accepted")
    if not res.exists:
        return CommandResult(EXIT_INFEASIBLE, payload, "no spin-c structure: W3 is nonzero")
    return CommandResult(EXIT_OK, payload, "spin-c structure found")


def _cmd_corpus(args) -> CommandResult:
    if not args.name:
        return CommandResult(EXIT_OK, {"builtins": corpus.builtin_names()}, "available builtins listed")
    try:
        entry = corpus.builtin(args.name)
    except KeyError as exc:
        raise TriangulationError(str(exc.args[0])) from None
    if args.export:
        return CommandResult(EXIT_OK, entry.complex.to_json(), f"exported {entry.name}")
    payload = {"name": entry.name, "description": entry.description, "expected": entry.expected.to_json(),
               "dimension": entry.complex.dimension, "simplices": entry.complex.size}
    return CommandResult(EXIT_OK, payload, f"{entry.name}: {entry.description}")


def _cmd_groups(args) -> CommandResult:
    covers = {
        "sigma4_minus": enumerate_cover(4, even_only=False),
        "a4": enumerate_cover(4, even_only=True),
        "a5": enumerate_cover(5, even_only=True),
    }
    payload = {"covers": {k: {"order": len(v), "order_histogram": {str(a): b for a, b in
                                                                 order_histogram(element_order(x) for x in v).items()}}
                          for k, v in covers.items()}}
    if args.model_check:
        payload["model_check"] = model_check()
        ok = all(r["found"] for r in payload["model_check"].values())
        if not ok:
            return CommandResult(EXIT_INTERNAL, payload, "a quaternion model failed to match its cover")
        return CommandResult(EXIT_OK, payload, "both quaternion models are isomorphic to their covers")
    payload["models"] = {
        "sigma4": {str(a): b for a, b in order_histogram(build_sigma4_model().orders()).items()},
        "a5": {str(a): b for a, b in order_histogram(build_a5_model().orders()).items()},
    }
    return CommandResult(EXIT_OK, payload, "cover group statistics")


_COMMANDS = {
    "validate": _cmd_validate,
    "invariants": _cmd_invariants,
    "spin": _cmd_spin,
    "spinc": _cmd_spinc,
    "corpus": _cmd_corpus,
    "groups": _cmd_groups,
}


def run(argv: Sequence[str]) -> CommandResult:
    try:
        args = _parser().parse_args(list(argv))
    except _Usage as exc:
        return CommandResult(EXIT_USAGE, {"error": "usage", "message": str(exc)}, f"usage error: {exc}")
    try:
        return _COMMANDS[args.command](args)
    except TriangulationError as exc:
        return CommandResult(EXIT_INVALID, {"error": "invalid input", "message": str(exc),
                                            "location": exc.location}, f"invalid input: {exc}")
    except NonOrientableError as exc:
        payload = {"error": "not orientable", "orientable": False, "odd_cycle": list(exc.result.certificate)}
        return CommandResult(EXIT_NONORIENTABLE, payload, str(exc))
    except (SpinError, HomologyError, ArithmeticError) as exc:
        return CommandResult(EXIT_INTERNAL, {"error": "internal", "message": str(exc)},
                             f"internal invariant violation: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.dumps() + "\n")
    sys.stderr.write(result.summary + "\n")
    return result.status


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
