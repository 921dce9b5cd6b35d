"""Command-line verifier for structure documents.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for unreadable input, parse errors and violated preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from .affstruct import (
    PoleAtOriginError,
    check_compatible,
    check_flat,
    check_integrable_system,
    integrate_eta_jet,
    integrate_primitive_jet,
    jet_congruent,
    verify_atlas,
)
from .catalog import EXAMPLES
from .document import StructureDocument, parse_document, print_document
from .expr import ParseError, parse_scalar
from .forms import FormError, MatrixForm
from .polyalg import AlgebraError
from .singular import (
    HigherOrderPoleError,
    LinearDiagonalField,
    PoleOutsideDivisorError,
    check_adapted,
    kernel_basis_decomposition,
    kernel_log_forms,
    resonance_search,
    residue_matrices,
)

__all__ = ["main", "build_parser"]


class InputError(Exception):
    """Bad input or an unmet precondition; maps to exit code 2."""


class Report:
    """Text lines plus a JSON payload for one command."""

    def __init__(self, command: str):
        self.command = command
        self.ok = True
        self.lines: list[str] = []
        self.data: dict = {}
        self.summary = ""

    def fail(self) -> None:
        self.ok = False

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps({"command": self.command, "ok": self.ok, **self.data}, indent=2, ensure_ascii=False) + "\n"
        head = f"{self.command}: {'PASS' if self.ok else 'FAIL'}"
        if self.summary:
            head += f" ({self.summary})"
        return "\n".join([head] + self.lines) + "\n"


# ---------------------------------------------------------------------------
# Formatting helpers
# ---------------------------------------------------------------------------


def _loc(loc) -> str:
    if isinstance(loc, tuple) and all(isinstance(v, int) for v in loc):
        return "[" + ",".join(str(v + 1) for v in loc) + "]"
    if isinstance(loc, int):
        return f"[{loc + 1}]"
    return str(loc)


def _loc_json(loc):
    if isinstance(loc, tuple) and all(isinstance(v, int) for v in loc):
        return [v + 1 for v in loc]
    if isinstance(loc, int):
        return [loc + 1]
    return loc


def _matrix_text(M: MatrixForm, names) -> str:
    return "[" + ", ".join("[" + ", ".join(r) + "]" for r in M.format(names)) + "]"


def _failures(result, names) -> list[dict]:
    return [{"entry": _loc_json(loc), "residual": res.format(names)} for loc, res in result.failures]


def _need(doc: StructureDocument, *fields: str) -> None:
    for f in fields:
        if getattr(doc, f) is None:
            raise InputError(f"document has no {f!r} field")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _residual_check(command: str, label: str, result, names) -> Report:
    rep = Report(command)
    if not result.ok:
        rep.fail()
    for loc, res in result.failures:
        rep.lines.append(f"  {label} at {_loc(loc)}: {res.format(names)}")
    rep.data["identity"] = label
    rep.data["failures"] = _failures(result, names)
    return rep


def cmd_check_flat(doc, args) -> Report:
    _need(doc, "eta")
    return _residual_check("check-flat", "d(eta) - eta^eta", check_flat(doc.eta), doc.variables)


def cmd_check_compatible(doc, args) -> Report:
    _need(doc, "omega", "eta")
    return _residual_check("check-compatible", "d(omega) - eta^omega", check_compatible(doc.pair()), doc.variables)


def cmd_check_integrable(doc, args) -> Report:
    _need(doc, "omega")
    return _residual_check(
        "check-integrable", "d(omega_j)^omega_1^...^omega_q", check_integrable_system(doc.omega), doc.variables
    )


def _atlas_location(loc) -> str:
    if isinstance(loc, tuple):
        return "<-".join(loc)
    return loc


def cmd_check_atlas(doc, args) -> Report:
    _need(doc, "atlas")
    names = doc.variables
    report = verify_atlas(doc.atlas)
    rep = Report("check-atlas")
    rep.ok = report.ok
    findings = []
    for f in report.findings:
        entry = {"condition": f.condition, "location": _atlas_location(f.location), "ok": f.ok, "failures": []}
        for loc, res in f.failures:
            where = f"{f.condition} {_atlas_location(f.location)}"
            if res is None:
                rep.lines.append(f"  {where}: transition matrix is singular")
                entry["failures"].append({"entry": None, "residual": None})
            elif loc is None:
                rep.lines.append(f"  {where}: omega_1^...^omega_q vanishes")
                entry["failures"].append({"entry": None, "residual": res.format(names)})
            else:
                rep.lines.append(f"  {where} at {_loc(loc)}: {res.format(names)}")
                entry["failures"].append({"entry": _loc_json(loc), "residual": res.format(names)})
        findings.append(entry)
    rep.data["findings"] = findings
    bad = len(report.violations)
    rep.summary = f"{bad} of {len(report.findings)} checks failed" if bad else f"{len(report.findings)} checks"
    return rep


def _hyperplanes(doc: StructureDocument, requested: str | None) -> list[int]:
    if requested:
        vars_ = [v.strip() for v in requested.split(",") if v.strip()]
    elif doc.divisor is not None:
        vars_ = list(doc.divisor)
    else:
        raise InputError("no hyperplanes given: use --vars or a 'divisor' field")
    out = []
    for v in vars_:
        if v not in doc.variables:
            raise InputError(f"unknown variable {v!r} in --vars")
        out.append(doc.variables.index(v))
    return out


def _residue_lines(rep: Report, decomp, names) -> None:
    residues = []
    for j, A, const in zip(decomp.hyperplanes, decomp.residues, decomp.residues_constant):
        rep.lines.append(f"  A[{names[j]}] = {_matrix_text(A, names)}")
        if not const:
            rep.lines.append(f"  A[{names[j]}] is not constant")
        residues.append({"variable": names[j], "matrix": A.format(names), "constant": const})
    rep.lines.append(f"  remainder = {_matrix_text(decomp.remainder, names)}")
    if not decomp.remainder_pole_free:
        rep.lines.append("  remainder has poles on the declared hyperplanes")
    rep.data["residues"] = residues
    rep.data["remainder"] = decomp.remainder.format(names)
    rep.data["remainder_pole_free"] = decomp.remainder_pole_free


def cmd_residues(doc, args) -> Report:
    _need(doc, "eta")
    decomp = residue_matrices(doc.eta, _hyperplanes(doc, args.vars))
    rep = Report("residues")
    rep.ok = decomp.ok
    _residue_lines(rep, decomp, doc.variables)
    return rep


def cmd_adapted(doc, args) -> Report:
    _need(doc, "omega", "eta", "witness")
    names = doc.variables
    decomp = residue_matrices(doc.eta, _hyperplanes(doc, None)).with_witness(doc.witness)
    result = check_adapted(doc.pair(), decomp, doc.coordinates)
    rep = Report("adapted")
    rep.ok = result.ok
    _residue_lines(rep, decomp, names)
    checks = []
    for name, res in result.entries:
        rep.lines.append(f"  {name}: {'PASS' if res.ok else 'FAIL'}")
        fails = []
        for loc, r in res.failures:
            where = f"det on {names[loc[1]]} = 0" if isinstance(loc, tuple) and loc and loc[0] == "det" else _loc(loc)
            rep.lines.append(f"    {where}: {r.format(names)}")
            fails.append({"entry": where, "residual": r.format(names)})
        checks.append({"name": name, "ok": res.ok, "failures": fails})
    rep.data["checks"] = checks
    return rep


def _field(doc: StructureDocument) -> LinearDiagonalField:
    _need(doc, "eigenvalues")
    try:
        return LinearDiagonalField(doc.eigenvalues)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_decompose_kernel(doc, args) -> Report:
    _need(doc, "eta")
    field = _field(doc)
    if field.nvars != doc.nvars:
        raise InputError(f"need {doc.nvars} eigenvalues, one per variable")
    system = kernel_log_forms(field)
    names = doc.variables
    kd = kernel_basis_decomposition(doc.eta, system)
    rep = Report("decompose-kernel")
    rep.ok = kd.in_span and all(kd.constancy_flags)
    alphas = [[a.format() for a in v] for v in system.alphas]
    for nu, v in enumerate(alphas, 1):
        rep.lines.append(f"  alpha^{nu} = ({', '.join(v)})")
    rep.lines.append(f"  completion = d({names[kd.completion]})/{names[kd.completion]}")
    for nu, M in enumerate(kd.M, 1):
        rep.lines.append(f"  M{nu} = {_matrix_text(M, names)}")
    rep.lines.append(f"  complement = {_matrix_text(kd.complement, names)}")
    for nu, flag in enumerate(kd.constancy_flags, 1):
        rep.lines.append(f"  dM{nu}^omega^1^...^omega^q: {'zero' if flag else 'nonzero'}")
    rep.data.update(
        alphas=alphas,
        completion=names[kd.completion],
        M=[M.format(names) for M in kd.M],
        complement=kd.complement.format(names),
        constancy_flags=list(kd.constancy_flags),
    )
    return rep


def cmd_integrate(doc, args) -> Report:
    _need(doc, "eta")
    names = doc.variables
    N = args.order
    if N < 1:
        raise InputError("--order must be at least 1")
    rep = Report("integrate")
    flat = check_flat(doc.eta)
    if not flat:
        rep.fail()
        for loc, res in flat.failures:
            rep.lines.append(f"  d(eta) - eta^eta at {_loc(loc)}: {res.format(names)}")
        rep.data["failures"] = _failures(flat, names)
        return rep
    try:
        X = integrate_eta_jet(doc.eta, N)
    except PoleAtOriginError:
        raise InputError("eta has a pole at the origin; jets are expanded there") from None
    Xm = X.to_matrix()
    rep.lines.append(f"  X = {_matrix_text(Xm, names)}")
    rep.data["order"] = N
    rep.data["X"] = Xm.format(names)
    ok_x = jet_congruent(Xm.d(), doc.eta.wedge(Xm), N)
    checks = [("dX = eta X", ok_x)]
    if doc.omega is not None:
        comp = check_compatible(doc.pair())
        if not comp:
            rep.fail()
            rep.lines.append("  omega is not compatible with eta")
        else:
            Y = integrate_primitive_jet(doc.pair(), X, N).to_matrix()
            rep.lines.append(f"  Y = {_matrix_text(Y, names)}")
            rep.data["Y"] = Y.format(names)
            checks.append(("omega = X dY", jet_congruent(doc.omega, Xm.wedge(Y.d()), N)))
    for label, ok in checks:
        rep.lines.append(f"  {label} mod degree {N}: {'PASS' if ok else 'FAIL'}")
        if not ok:
            rep.fail()
    rep.data["checks"] = [{"identity": label, "ok": ok} for label, ok in checks]
    rep.summary = f"order {N}"
    return rep


def cmd_resonances(doc, args) -> Report:
    field = _field(doc)
    if args.bound < 1:
        raise InputError("--bound must be at least 1")
    found = resonance_search(field, args.bound)
    rep = Report("resonances")
    rep.ok = not found
    for v in found:
        rep.lines.append("  (" + ", ".join(str(k) for k in v) + ")")
    rep.summary = f"{len(found)} found with |n_j| <= {args.bound}" if found else f"none with |n_j| <= {args.bound}"
    rep.data.update(bound=args.bound, resonances=[list(v) for v in found])
    return rep


COMMANDS: dict[str, Callable] = {
    "check-flat": cmd_check_flat,
    "check-compatible": cmd_check_compatible,
    "check-integrable": cmd_check_integrable,
    "check-atlas": cmd_check_atlas,
    "residues": cmd_residues,
    "adapted": cmd_adapted,
    "decompose-kernel": cmd_decompose_kernel,
    "integrate": cmd_integrate,
    "resonances": cmd_resonances,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transaffine", description="Verify transversely affine structure data.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("document", help="path to a JSON document, or - for standard input")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if name == "residues":
            p.add_argument("--vars", help="comma-separated hyperplane variables (default: the divisor field)")
        if name == "integrate":
            p.add_argument("--order", type=int, default=4)
        if name == "resonances":
            p.add_argument("--bound", type=int, default=2)
    ex = sub.add_parser("example")
    ex.add_argument("name", choices=sorted(EXAMPLES))
    ex.add_argument("--q", type=int, default=None)
    ex.add_argument("--lambda", dest="lam", default=None,
                    help="eigenvalue (type-i) or comma-separated eigenvalues (type-ii)")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _example(args) -> StructureDocument:
    name = args.name
    if name in ("type-i", "type-ii") and args.lam is not None:
        vals = [parse_scalar(v.strip(), "--lambda") for v in args.lam.split(",")]
    else:
        vals = None
    if name == "type-ii":
        if args.q is not None:
            raise InputError("type-ii takes its size from --lambda, not --q")
        return EXAMPLES[name](vals or (1, 2, -3))
    q = args.q if args.q is not None else (2 if name == "intersection" else 1)
    if q < 1:
        raise InputError("--q must be positive")
    if name == "type-i":
        if vals is not None and len(vals) != 1:
            raise InputError("type-i takes a single --lambda value")
        return EXAMPLES[name](vals[0] if vals else 2, q)
    if args.lam is not None:
        raise InputError(f"{name} does not take --lambda")
    if name == "maurer-cartan" and q > 3:
        raise InputError("maurer-cartan examples are limited to q <= 3")
    return EXAMPLES[name](q)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    out = sys.stdout
    try:
        if args.command == "example":
            out.write(print_document(_example(args)))
            return 0
        doc = parse_document(_read(args.document))
        rep = COMMANDS[args.command](doc, args)
    except (HigherOrderPoleError, PoleOutsideDivisorError) as exc:
        sys.stderr.write(f"error: {exc.describe(doc.variables)}\n")
        return 2
    except (InputError, ParseError, PoleAtOriginError, AlgebraError, FormError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    out.write(rep.render(args.format))
    return 0 if rep.ok else 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
