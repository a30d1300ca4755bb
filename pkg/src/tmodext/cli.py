"""Command-line front end.

Input files follow this JSON schema (matrices row-major, entries in the
expression grammar)::

    {"field": {"p": 3, "e": 1, "modulus": [..]},
     "symbols": ["a", "b"],
     "modules": {"Phi": {"t": [["theta", "T^3"], ["a+T^3", "theta"]], "side": "tau"}},
     "matrices": {"X": [["a*T"]]}}

Exit codes: 0 ok, 2 hypothesis violation, 3 input or parse error,
4 internal invariant violation (including a failed ``verify``).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from . import closed_form as cf
from .errors import InputError, InternalInvariantError, InvalidTModuleError, ParseError, TModExtError
from .expr import check_symbols, format_coeff, format_skew, matrix_to_json, parse_coeff, parse_matrix
from .field import FieldParams
from .latex import matrix_latex
from .linear import LinearForm
from .reduction import (
    TraceStep,
    extension_auto,
    extension_dual,
    extension_invertible,
    extension_triangular,
    generator_ordering,
    replay_trace,
    split_ext0,
)
from .skew import Side, SkewPoly
from .tmodule import SkewMatrix, TModule

COMMANDS = ("ext", "ext0", "dual", "closed-form", "adjoint", "mul", "verify")
METHODS = ("auto", "inverse", "triangular", "closed-form", "dual")
OUTPUTS = ("pretty", "latex", "json")


@dataclass
class JobSpec:
    command: str
    field: FieldParams
    symbols: frozenset
    modules: Dict[str, TModule] = dc_field(default_factory=dict)
    matrices: Dict[str, SkewMatrix] = dc_field(default_factory=dict)
    phi: str = "Phi"
    psi: str = "Psi"
    method: str = "auto"
    output: str = "pretty"
    strict: bool = False
    trace: bool = False
    operands: List[SkewMatrix] = dc_field(default_factory=list)
    document: Optional[dict] = None


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 3), not hypothesis violations."""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def build_parser():
    ap = _ArgumentParser(prog="tmodext", description="Extensions of Anderson t-modules over F_q[t].")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def common(p, modules=True):
        p.add_argument("--input", help="JSON job file ('-' for stdin)")
        p.add_argument("--p", type=int, help="characteristic (overrides the file)")
        p.add_argument("--e", type=int, help="extension degree of F_q over F_p")
        p.add_argument("--modulus", help="comma-separated monic modulus coefficients, low to high")
        p.add_argument("--symbols", help="comma-separated symbol names (overrides the file)")
        p.add_argument("--output", choices=OUTPUTS, default="pretty")
        if modules:
            p.add_argument("--phi", default=None, help="source module name (default Phi)")
            p.add_argument("--psi", default=None, help="target module name (default Psi)")

    for name, help_text in (
        ("ext", "compute Pi_t on Ext^1(Phi, Psi)"),
        ("ext0", "compute Pi_t and split off the G_a^s quotient"),
        ("dual", "compute Pi_t through the adjoint modules (deg Psi > deg Phi)"),
        ("closed-form", "closed-form Pi_t for two Drinfeld modules"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--method", choices=METHODS, default=None)
        p.add_argument("--strict-pseudocode", action="store_true", help="single-sweep reduction, drop out-of-bound terms")
        p.add_argument("--trace", action="store_true", help="include reduction traces")

    p = sub.add_parser("adjoint", help="adjoint of a module (tau <-> sigma)")
    common(p)
    p.add_argument("name", nargs="?", help="module name (default: --phi or Phi)")

    p = sub.add_parser("mul", help="product of two matrices")
    common(p, modules=False)
    p.add_argument("--side", default="tau", help="tau or sigma, for literal operands")
    p.add_argument("left", help="name from the input file, a JSON matrix, or an expression")
    p.add_argument("right")

    p = sub.add_parser("verify", help="re-validate a JSON result and replay its traces")
    common(p, modules=False)
    return ap


# ---------------------------------------------------------------------------
# Parsing


def _load_json(text, where):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines() or [""]
        line = lines[exc.lineno - 1] if exc.lineno - 1 < len(lines) else ""
        token = line[exc.colno - 1 : exc.colno + 9] or "<end>"
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno, token=token, where=where) from None


def _read_input(path):
    if path is None:
        return None
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _field_from(doc, args):
    fdoc = doc.get("field", {}) if isinstance(doc, dict) else {}
    if not isinstance(fdoc, dict):
        raise InputError("'field' must be an object")
    p = args.p if getattr(args, "p", None) is not None else fdoc.get("p")
    e = args.e if getattr(args, "e", None) is not None else fdoc.get("e", 1)
    modulus = fdoc.get("modulus", ())
    if getattr(args, "modulus", None):
        try:
            modulus = [int(x) for x in args.modulus.split(",")]
        except ValueError:
            raise InputError(f"--modulus must be comma-separated integers, got {args.modulus!r}") from None
    generator = fdoc.get("generator", "z")
    if p is None:
        raise InputError("no field given: set field.p in the input or pass --p")
    if not isinstance(p, int) or not isinstance(e, int):
        raise InputError("field.p and field.e must be integers")
    try:
        return FieldParams(p, e, tuple(modulus), generator)
    except (ValueError, ArithmeticError) as exc:
        raise InputError(f"invalid field: {exc}") from None


def _symbols_from(doc, args, field):
    if getattr(args, "symbols", None) is not None:
        syms = [s.strip() for s in args.symbols.split(",") if s.strip()]
    else:
        syms = doc.get("symbols", []) if isinstance(doc, dict) else []
    if not isinstance(syms, list):
        raise InputError("'symbols' must be a list of names")
    return check_symbols(syms, field)


def _side(text, where):
    try:
        return Side.parse(text)
    except (ValueError, KeyError):
        raise InputError(f"{where}: side must be 'tau' or 'sigma', got {text!r}") from None


def _module(mdoc, field, symbols, where):
    if not isinstance(mdoc, dict) or "t" not in mdoc:
        raise InputError(f"{where}: a module is an object with a 't' matrix")
    side = _side(mdoc.get("side", "tau"), where)
    M = parse_matrix(mdoc["t"], field, symbols, side, where=where)
    try:
        return TModule(M)
    except InputError as exc:
        raise InvalidTModuleError(f"{where}: {exc}") from None


def _operand(text, spec, side):
    if text in spec.matrices:
        return spec.matrices[text]
    if text in spec.modules:
        return spec.modules[text].t
    if text.lstrip().startswith("["):
        rows = _load_json(text, "operand")
        return parse_matrix(rows, spec.field, spec.symbols, side, where="operand")
    return parse_matrix([[text]], spec.field, spec.symbols, side, where="operand")


def parse_job(text, args):
    """Build a validated JobSpec from file contents (or None) and parsed flags."""
    command = args.command
    where = getattr(args, "input", None) or "input"
    doc = _load_json(text, where) if text is not None else {}
    if not isinstance(doc, dict):
        raise InputError("the input must be a JSON object")
    field = _field_from(doc, args)
    symbols = _symbols_from(doc, args, field)
    spec = JobSpec(command=command, field=field, symbols=symbols, output=args.output)
    if command == "verify":
        if text is None:
            raise InputError("verify needs --input with a JSON result")
        spec.document = doc
        return spec
    mods = doc.get("modules", {})
    if not isinstance(mods, dict):
        raise InputError("'modules' must be an object")
    for name, m in mods.items():
        spec.modules[name] = _module(m, field, symbols, f"modules.{name}")
    mats = doc.get("matrices", {})
    if not isinstance(mats, dict):
        raise InputError("'matrices' must be an object")
    for name, rows in mats.items():
        side = Side.TAU
        if isinstance(rows, dict):
            side = _side(rows.get("side", "tau"), f"matrices.{name}")
            rows = rows.get("t")
        spec.matrices[name] = parse_matrix(rows, field, symbols, side, where=f"matrices.{name}")
    if command == "mul":
        side = _side(args.side, "--side")
        spec.operands = [_operand(args.left, spec, side), _operand(args.right, spec, side)]
        return spec
    spec.phi = args.phi or "Phi"
    spec.psi = args.psi or "Psi"
    if command == "adjoint":
        spec.phi = args.name or spec.phi
        needed = [spec.phi]
    else:
        needed = [spec.phi, spec.psi]
        spec.method = getattr(args, "method", None) or {"dual": "dual", "closed-form": "closed-form"}.get(
            command, "auto"
        )
        spec.strict = bool(getattr(args, "strict_pseudocode", False))
        spec.trace = bool(getattr(args, "trace", False))
    for name in needed:
        if name not in spec.modules:
            known = ", ".join(sorted(spec.modules)) or "none"
            raise InputError(f"module '{name}' is not defined (known: {known})")
    return spec


# ---------------------------------------------------------------------------
# Running


def _compute(spec):
    phi, psi = spec.modules[spec.phi], spec.modules[spec.psi]
    method = spec.method
    if method == "closed-form":
        return cf.pi_matrix(cf.DrinfeldPair(phi, psi))
    fn = {
        "auto": extension_auto,
        "inverse": extension_invertible,
        "triangular": extension_triangular,
        "dual": extension_dual,
    }[method]
    return fn(phi, psi, strict=spec.strict)


def _pretty_matrix(M):
    if M.rows == 0:
        return "[]"
    cells = [[format_skew(e) for e in row] for row in M.entries]
    widths = [max(len(cells[r][c]) for r in range(M.rows)) for c in range(M.cols)]
    return "\n".join(
        "[ " + "  ".join(cells[r][c].ljust(widths[c]) for c in range(M.cols)).rstrip() + " ]"
        for r in range(M.rows)
    )


def _trace_json(step):
    return {
        "i": step.i + 1,
        "j": step.j + 1,
        "shift": step.shift,
        "multiplier": str(step.multiplier),
        "U": [[format_coeff(x) for x in row] for row in step.U],
    }


def result_to_json(res, spec, trace=False):
    pi = res.pi
    out = {
        "field": {"p": spec.field.p, "e": spec.field.e, "modulus": list(spec.field.modulus)},
        "symbols": sorted(spec.symbols),
        "method": res.method,
        "side": pi.side.name.lower(),
        "strict": bool(res.extra.get("strict", False)),
        "source": {"t": matrix_to_json(res.source.t), "side": res.source.side.name.lower()},
        "target": {"t": matrix_to_json(res.target.t), "side": res.target.side.name.lower()},
        "bounds": res.bounds,
        "ordering": [[g.i + 1, g.j + 1, g.k] for g in res.ordering],
        "dimension": pi.dim,
        "pi": matrix_to_json(pi.t),
    }
    if "case" in res.extra:
        out["case"] = res.extra["case"]
    if res.ext0 is not None:
        out["ext0"] = {
            "s": res.ext0.s,
            "deleted": [d + 1 for d in res.ext0.deleted],
            "pi0": matrix_to_json(res.ext0.pi0.t),
        }
    dropped = res.extra.get("dropped", [])
    if dropped:
        out["dropped"] = [
            {"column": col + 1, "i": i + 1, "j": j + 1, "k": k, "coefficient": str(x)}
            for col, i, j, k, x in dropped
        ]
    if trace:
        out["traces"] = [[_trace_json(s) for s in col] for col in res.traces]
    return out


def _render_result(res, spec):
    if spec.output == "json":
        return json.dumps(result_to_json(res, spec, spec.trace), indent=2)
    if spec.output == "latex":
        parts = [matrix_latex(res.pi.t)]
        if res.ext0 is not None:
            parts.append(f"% s = {res.ext0.s}, deleted {[d + 1 for d in res.ext0.deleted]}")
            parts.append(matrix_latex(res.ext0.pi0.t, note=False))
        return "\n".join(parts)
    lines = [
        f"method: {res.method}",
        f"side: {res.side.name.lower()}",
        f"dimension: {res.dim}",
        f"bounds: {res.bounds}",
        "ordering: " + " ".join(f"{p + 1}:({g.i + 1},{g.j + 1},{g.k})" for p, g in enumerate(res.ordering)),
    ]
    if "case" in res.extra:
        lines.append(f"case: {res.extra['case']}")
    if res.extra.get("strict"):
        dropped = res.extra.get("dropped", [])
        lines.append(f"strict single sweep: {len(dropped)} out-of-bound term(s) dropped")
        for col, i, j, k, x in dropped:
            lines.append(f"  column {col + 1}, entry ({i + 1},{j + 1}), T^{k}: {x}")
    lines.append("Pi_t =")
    lines.append(_pretty_matrix(res.pi.t))
    if res.ext0 is not None:
        lines.append(f"s = {res.ext0.s}")
        lines.append("deleted: " + ", ".join(str(d + 1) for d in res.ext0.deleted))
        lines.append("Pi_t on Ext_0 =")
        lines.append(_pretty_matrix(res.ext0.pi0.t))
    if spec.trace:
        for col, steps in enumerate(res.traces):
            lines.append(f"trace column {col + 1}: {len(steps)} step(s)")
            for s in steps:
                lines.append(f"  ({s.i + 1},{s.j + 1}) shift {s.shift} multiplier {s.multiplier}")
    return "\n".join(lines)


def _render_matrix(M, spec, title):
    if spec.output == "json":
        return json.dumps({"side": M.side.name.lower(), "t": matrix_to_json(M)}, indent=2)
    if spec.output == "latex":
        return matrix_latex(M)
    return f"{title} =\n" + _pretty_matrix(M)


def _reduced_from_pi(pi, col, ordering, bounds, side, F):
    """Rebuild the reduced matrix of one column from Pi_t and the ordering."""
    rows, cols = len(bounds), len(bounds[0]) if bounds else 0
    coeffs = [[{} for _ in range(cols)] for _ in range(rows)]
    for p, (i, j, k) in enumerate(ordering):
        entry = pi.t.entries[p][col]
        form = LinearForm({side.sign * s: w for s, w in enumerate(entry.coeffs)}, F)
        if not form.is_zero():
            coeffs[i][j][k] = form
    zero = LinearForm({}, F)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            d = coeffs[i][j]
            row.append(SkewPoly([d.get(k, zero) for k in range(max(d) + 1)], F, side) if d else SkewPoly.zero(F, side))
        out.append(row)
    return SkewMatrix(out, F, side, rows, cols)


def verify_document(doc, spec):
    """Checks a JSON result; returns report lines, raises InternalInvariantError on failure."""
    F, symbols = spec.field, spec.symbols
    for key in ("pi", "side", "ordering", "bounds"):
        if key not in doc:
            raise InputError(f"result is missing '{key}'")
    side = _side(doc["side"], "side")
    report = []
    try:
        pi = TModule(parse_matrix(doc["pi"], F, symbols, side, where="pi"))
    except InvalidTModuleError as exc:
        raise InternalInvariantError(f"Pi_t is not a t-module: {exc}") from None
    report.append(f"Pi_t is a t-module of dimension {pi.dim}")
    bounds = doc["bounds"]
    ordering = [(i - 1, j - 1, k) for i, j, k in doc["ordering"]]
    if doc.get("method") != "closed-form" and ordering != [tuple(g) for g in generator_ordering(bounds)]:
        raise InternalInvariantError("ordering does not match the bounds")
    if len(ordering) != pi.dim:
        raise InternalInvariantError(f"ordering has {len(ordering)} entries, Pi_t has dimension {pi.dim}")
    report.append("ordering consistent with bounds")
    if "ext0" in doc:
        keep = [p for p in range(pi.dim) if p + 1 not in doc["ext0"]["deleted"]]
        pi0 = parse_matrix(doc["ext0"]["pi0"], F, symbols, side, where="ext0.pi0")
        if pi.t.submatrix(keep, keep) != pi0:
            raise InternalInvariantError("Ext_0 block is not the minor of Pi_t")
        TModule(pi0)
        report.append(f"Ext_0 minor checked (s = {doc['ext0']['s']})")
    traces = doc.get("traces")
    if traces is None:
        report.append("no traces to replay")
        return report
    src = _module(doc["source"], F, symbols, "source")
    tgt = _module(doc["target"], F, symbols, "target")
    dropped = {}
    for d in doc.get("dropped", []):
        dropped.setdefault(d["column"] - 1, []).append(d)
    c = LinearForm.generator(F)
    for col, steps in enumerate(traces):
        i, j, k = ordering[col]
        E = SkewMatrix.elementary(tgt.dim, src.dim, i, j, SkewPoly.monomial(c, k, side))
        V = tgt.t @ E
        red = _reduced_from_pi(pi, col, ordering, bounds, side, F)
        for d in dropped.get(col, []):
            # strict results discard out-of-bound terms; add them back before comparing
            x = LinearForm.from_rational(parse_coeff(d["coefficient"], F, symbols, allow_c=True))
            term = SkewPoly.monomial(x, d["k"], side)
            red = red + SkewMatrix.elementary(red.rows, red.cols, d["i"] - 1, d["j"] - 1, term)
        trace = [
            TraceStep(
                s["i"] - 1,
                s["j"] - 1,
                s["shift"],
                LinearForm.from_rational(parse_coeff(s["multiplier"], F, symbols, allow_c=True)),
                [[parse_coeff(x, F, symbols) for x in row] for row in s["U"]],
            )
            for s in steps
        ]
        if V - red != replay_trace(trace, src, tgt):
            raise InternalInvariantError(f"column {col + 1}: original - reduced differs from the trace sum")
    report.append(f"replayed traces of {len(traces)} column(s)")
    return report


def run_job(spec):
    """Execute a JobSpec; returns the rendered text."""
    cmd = spec.command
    if cmd == "mul":
        A, B = spec.operands
        return _render_matrix(A @ B, spec, "product")
    if cmd == "adjoint":
        return _render_matrix(spec.modules[spec.phi].t.adjoint(), spec, "adjoint")
    if cmd == "verify":
        return "\n".join(verify_document(spec.document, spec) + ["ok"])
    if cmd == "closed-form" and spec.method != "closed-form":
        raise InputError("closed-form only accepts --method closed-form")
    res = _compute(spec)
    if cmd == "ext0":
        split_ext0(res)
    return _render_result(res, spec)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        spec = parse_job(_read_input(getattr(args, "input", None)), args)
        out = run_job(spec)
    except TModExtError as exc:
        kind = {2: "hypothesis not met", 3: "input error", 4: "internal error"}.get(exc.exit_code, "error")
        print(f"tmodext: {kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # an unexpected exception is an engine bug
        print(f"tmodext: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return InternalInvariantError.exit_code
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
