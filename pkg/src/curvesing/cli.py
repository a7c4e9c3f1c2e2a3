"""Command line front end: curve files in, JSON (or text) reports out.

Curve files are JSON::

    {"curves": [{"name": "C",
                 "branches": [{"x": [[4, "1"]],
                               "y": [[9, "1"], [10, "1"], [11, "19/18"]]}]}]}

Coefficients are strings in the exact literal grammar so that no binary
float ever touches them.  Unknown top-level keys are ignored, which lets the
output of ``conjugate`` be read back as a curve file.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

from .branch import BranchParam, primitive_reduce
from .coeff import parse_coeff, render_coeff
from .curves import CurveSet, intersection_matrix, intersection_multiplicity, topologically_equivalent
from .errors import CurveSingError, InputError, ParseError, UnsupportedMultiBranch, ValidationError
from .normalform import BranchAnalysis, analytic_equivalent, analyze_branch, smooth_equivalent
from .powerseries import TruncatedSeries
from .rigidity import classify_linear_map, refutation_sweep, solve_constraints

__all__ = [
    "CurveFile",
    "Report",
    "parse_curve_file",
    "render_curve_file",
    "dispatch",
    "emit_report",
    "parse_report",
    "main",
]

COMMANDS = ("invariants", "normal-form", "equiv", "conjugate", "intersect", "rigidity")


# -- curve files ------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveFile:
    curves: tuple = ()

    def get(self, name: str) -> CurveSet:
        for c in self.curves:
            if c.name == name:
                return c
        raise InputError(f"no curve named {name!r}")

    def names(self) -> list:
        return [c.name for c in self.curves]


_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|true|false|null')


def _line_col(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _scalar_positions(text: str, doc) -> dict:
    """Map the JSON path of every scalar (and key) to its line and column.

    Scalars appear in the token stream in document order, which is also the
    order in which the decoded containers are walked.
    """
    tokens = iter(_TOKEN.finditer(text))
    where = {}

    def walk(node, path):
        if isinstance(node, dict):
            for k, v in node.items():
                next(tokens, None)
                walk(v, path + (k,))
        elif isinstance(node, list):
            for i, v in enumerate(node):
                walk(v, path + (i,))
        else:
            m = next(tokens, None)
            if m is not None:
                where[path] = _line_col(text, m.start())

    walk(doc, ())
    return where


def _path_str(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out.lstrip(".") or "<root>"


def parse_curve_file(data) -> CurveFile:
    """Parse and validate a curve file given as bytes or text."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"curve file is not UTF-8: {exc}") from None
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    where = _scalar_positions(text, doc)

    def fail(msg, path, cls=ValidationError):
        line, col = where.get(tuple(path), (None, None))
        raise cls(msg, line, col, _path_str(path))

    if not isinstance(doc, dict) or not isinstance(doc.get("curves"), list):
        fail("top level must be an object with a 'curves' list", ())
    curves = []
    seen = set()
    for ci, cdoc in enumerate(doc["curves"]):
        cpath = ("curves", ci)
        if not isinstance(cdoc, dict):
            fail("each curve must be an object", cpath)
        name = cdoc.get("name")
        if not isinstance(name, str) or not name:
            fail("curve name must be a non-empty string", cpath + ("name",))
        if name in seen:
            fail(f"duplicate curve name {name!r}", cpath + ("name",))
        seen.add(name)
        bdocs = cdoc.get("branches")
        if not isinstance(bdocs, list) or not bdocs:
            fail("a curve needs a non-empty 'branches' list", cpath)
        branches = []
        for bi, bdoc in enumerate(bdocs):
            bpath = cpath + ("branches", bi)
            if not isinstance(bdoc, dict):
                fail("each branch must be an object with 'x' and 'y'", bpath)
            comps = []
            for key in ("x", "y"):
                comps.append(_parse_component(bdoc.get(key), bpath + (key,), fail))
            if not comps[0] and not comps[1]:
                fail("both components of a branch vanish", bpath)
            branches.append(BranchParam.from_polys(*comps))
        curves.append(CurveSet(name, tuple(branches)))
    return CurveFile(tuple(curves))


def _parse_component(pairs, path, fail) -> dict:
    if not isinstance(pairs, list):
        fail("component must be a list of [exponent, \"coeff\"] pairs", path)
    out = {}
    for i, pair in enumerate(pairs):
        ppath = path + (i,)
        if not isinstance(pair, list) or len(pair) != 2:
            fail("expected an [exponent, \"coeff\"] pair", ppath)
        e, c = pair
        if isinstance(e, bool) or not isinstance(e, int):
            fail("exponent must be an integer", ppath + (0,))
        if e <= 0:
            fail("exponents must be positive: a branch passes through the origin", ppath + (0,))
        if e in out:
            fail(f"exponent {e} listed twice", ppath + (0,))
        if not isinstance(c, str):
            fail("coefficient must be a string literal", ppath + (1,))
        try:
            out[e] = parse_coeff(c)
        except ParseError as exc:
            fail(str(exc), ppath + (1,), ParseError)
    return {e: c for e, c in out.items() if c}


def _series_pairs(s: TruncatedSeries) -> list:
    return [[e, render_coeff(c)] for e, c in s.items()]


def render_curve_file(cf: CurveFile) -> dict:
    return {"curves": [_curve_doc(c) for c in cf.curves]}


def _curve_doc(c: CurveSet) -> dict:
    return {"name": c.name,
            "branches": [{"x": _series_pairs(b.x), "y": _series_pairs(b.y)} for b in c.branches]}


# -- reports ------------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    args: dict = field(default_factory=dict)
    curves: list = field(default_factory=list)
    decisions: list = field(default_factory=list)
    exit_status: int = 0
    error: Optional[dict] = None

    def to_dict(self) -> dict:
        d = {"command": self.command, "args": self.args, "curves": self.curves,
             "decisions": self.decisions, "exit_status": self.exit_status}
        if self.error is not None:
            d["error"] = self.error
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["command"], d.get("args", {}), d.get("curves", []), d.get("decisions", []),
                   d.get("exit_status", 0), d.get("error"))


def emit_report(r: Report, fmt: str = "json") -> bytes:
    """Deterministic serialization: sorted keys, canonical coefficients."""
    d = r.to_dict()
    if fmt == "json":
        return (json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "text":
        lines = []
        _text_lines(d, "", lines)
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def _text_lines(node, prefix, out):
    if isinstance(node, dict):
        for k in sorted(node):
            _text_lines(node[k], f"{prefix}.{k}" if prefix else k, out)
    elif isinstance(node, list) and node and all(isinstance(v, (dict, list)) for v in node) \
            and not all(_is_pair(v) for v in node):
        for i, v in enumerate(node):
            _text_lines(v, f"{prefix}[{i}]", out)
    else:
        out.append(f"{prefix}: {json.dumps(node, sort_keys=True, ensure_ascii=False)}")


def _is_pair(v):
    return isinstance(v, list) and len(v) == 2 and isinstance(v[0], int)


def parse_report(data) -> Report:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return Report.from_dict(json.loads(data))


# -- per-branch records ----------------------------------------------------------------------


def _prepare(b: BranchParam):
    d = b.exponent_gcd()
    return (primitive_reduce(b), d) if d > 1 else (b, 1)


def _branch_record(a: BranchAnalysis, reduced_by: int, with_nf: bool = True) -> dict:
    rec = {
        "v0": a.v0,
        "smooth": a.smooth,
        "precision": a.precision,
        "semigroup": {"generators": list(a.semigroup.generators),
                      "conductor": a.semigroup.conductor},
        "characteristic": list(a.char),
    }
    if reduced_by > 1:
        rec["reduced_by"] = reduced_by
    if not a.smooth:
        rec["v1"] = a.normalized.v1
        rec["lambda_set"] = {"members": list(a.values.members), "bound": a.values.bound}
        rec["lambda"] = a.lam if a.lam is not None else "monomial"
    if with_nf and a.normal_form is not None:
        nf = a.normal_form
        rec["normal_form"] = {
            "coeffs": [[s, render_coeff(c)] for s, c in sorted(nf.coeffs.items())],
            "lambdaNormalized": nf.lambda_normalized,
            "witness_steps": len(nf.witness),
            "witness_replays": nf.replay_matches(),
        }
    return rec


def _analyze(b: BranchParam, prec, with_nf=True):
    b, d = _prepare(b)
    return analyze_branch(b, prec, normal_form=with_nf), d


# -- commands -----------------------------------------------------------------------------


def _selected(cf: CurveFile, name: Optional[str]) -> list:
    return [cf.get(name)] if name else list(cf.curves)


def _cmd_invariants(ns, cf, rep, with_nf=True):
    for c in _selected(cf, ns.curve):
        branches = []
        for b in c.branches:
            a, d = _analyze(b, ns.precision, with_nf)
            branches.append(_branch_record(a, d, with_nf))
        entry = {"name": c.name, "branches": branches}
        if len(c.branches) > 1:
            entry["intersections"] = intersection_matrix(CurveSet(c.name, [_prepare(b)[0] for b in c.branches]))
        rep.curves.append(entry)


def _cmd_normal_form(ns, cf, rep):
    for c in _selected(cf, ns.curve):
        branches = []
        for b in c.branches:
            a, d = _analyze(b, ns.precision)
            rec = {"v0": a.v0, "precision": a.precision}
            if not a.smooth:
                rec["v1"] = a.normalized.v1
                rec["lambda"] = a.lam if a.lam is not None else "monomial"
            rec.update(_branch_record(a, d)["normal_form"])
            branches.append(rec)
        rep.curves.append({"name": c.name, "branches": branches})


def _need_pair(ns, cf):
    if not ns.left or not ns.right:
        raise InputError("this command needs --left and --right")
    return cf.get(ns.left), cf.get(ns.right)


def _cmd_equiv(ns, cf, rep):
    left, right = _need_pair(ns, cf)
    kind = ns.kind
    dec = {"kind": kind, "left": left.name, "right": right.name}
    if kind == "topological":
        res = topologically_equivalent(
            CurveSet(left.name, [_prepare(b)[0] for b in left.branches]),
            CurveSet(right.name, [_prepare(b)[0] for b in right.branches]))
        dec.update(equivalent=res.equivalent, reason=res.reason,
                   bijection=list(res.bijection) if res.bijection else None)
    elif kind == "smooth":
        dec["equivalent"] = smooth_equivalent(
            CurveSet(left.name, [_prepare(b)[0] for b in left.branches]),
            CurveSet(right.name, [_prepare(b)[0] for b in right.branches]))
    else:
        if len(left.branches) != 1 or len(right.branches) != 1:
            raise UnsupportedMultiBranch("analytic equivalence is decided for single branches only")
        a1, d1 = _analyze(left.branches[0], ns.precision)
        a2, d2 = _analyze(right.branches[0], ns.precision)
        res = analytic_equivalent(a1, a2)
        dec.update(equivalent=res.equivalent, certificate=res.certificate,
                   witness_replays=res.replays(), precision=[a1.precision, a2.precision])
    rep.decisions.append(dec)


def _cmd_conjugate(ns, cf, rep):
    for c in _selected(cf, ns.curve):
        rep.curves.append(_curve_doc(c.conj()))


def _cmd_intersect(ns, cf, rep):
    if ns.left or ns.right:
        left, right = _need_pair(ns, cf)
        m = [[intersection_multiplicity(_prepare(b1)[0], _prepare(b2)[0]) for b2 in right.branches]
             for b1 in left.branches]
        rep.decisions.append({"left": left.name, "right": right.name, "intersections": m})
        return
    for c in _selected(cf, ns.curve):
        m = intersection_matrix(CurveSet(c.name, [_prepare(b)[0] for b in c.branches]))
        rep.curves.append({"name": c.name, "intersections": m})


def _cmd_rigidity(ns, cf, rep):
    stats = refutation_sweep(ns.v0, ns.v1, ns.sweep, ns.seed)
    sols = solve_constraints(ns.v0, ns.v1, ns.samples, ns.seed)
    kinds = {}
    for m in sols:
        k = classify_linear_map(m).value
        kinds[k] = kinds.get(k, 0) + 1
    rep.decisions.append({
        "v0": ns.v0, "v1": ns.v1, "seed": ns.seed,
        "sweep": stats,
        "family_members": len(sols),
        "family_classes": kinds,
        "examples": [[render_coeff(m.alpha), render_coeff(m.alphaP),
                      render_coeff(m.beta), render_coeff(m.betaP)] for m in sols[:4]],
    })


_HANDLERS = {
    "invariants": _cmd_invariants,
    "normal-form": _cmd_normal_form,
    "equiv": _cmd_equiv,
    "conjugate": _cmd_conjugate,
    "intersect": _cmd_intersect,
    "rigidity": _cmd_rigidity,
}


def _args_echo(ns) -> dict:
    if ns.command == "rigidity":
        keys = ("v0", "v1", "samples", "sweep", "seed")
    elif ns.command == "equiv":
        keys = ("left", "right", "kind", "precision")
    else:
        keys = ("curve", "left", "right", "precision")
    return {k: getattr(ns, k) for k in keys if getattr(ns, k, None) is not None}


def dispatch(command: str, ns, cf: Optional[CurveFile]) -> Report:
    """Run one command; library errors become a report entry plus exit code."""
    rep = Report(command, _args_echo(ns))
    try:
        if command != "rigidity" and cf is None:
            raise InputError(f"{command} needs a curve file")
        _HANDLERS[command](ns, cf, rep)
    except CurveSingError as exc:
        rep.exit_status = exc.exit_code
        rep.error = _error_doc(exc)
    return rep


def _error_doc(exc) -> dict:
    d = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        if exc.line is not None:
            d["line"], d["column"] = exc.line, exc.column
        if exc.path:
            d["path"] = exc.path
    return d


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="curvesing", description="Invariants and equivalence of plane curve singularities.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="curve file (JSON); optional for rigidity")
    p.add_argument("--curve", help="restrict to one curve")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--kind", choices=("analytic", "smooth", "topological"), default="analytic")
    p.add_argument("--precision", type=int, help="fixed working precision (default: automatic)")
    p.add_argument("--json", action="store_true", help="emit JSON (default is text)")
    p.add_argument("--v0", type=int, default=2)
    p.add_argument("--v1", type=int, default=3)
    p.add_argument("--samples", type=int, default=100, help="family members to verify")
    p.add_argument("--sweep", type=int, default=10000, help="random maps in the refutation sweep")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_intermixed_args(argv)
    cf = None
    rep = None
    if ns.file is not None:
        try:
            with open(ns.file, "rb") as fh:
                cf = parse_curve_file(fh.read())
        except OSError as exc:
            rep = Report(ns.command, _args_echo(ns), exit_status=2,
                         error={"type": "InputError", "message": str(exc)})
        except CurveSingError as exc:
            rep = Report(ns.command, _args_echo(ns), exit_status=exc.exit_code, error=_error_doc(exc))
    if rep is None:
        rep = dispatch(ns.command, ns, cf)
    out = emit_report(rep, "json" if ns.json else "text")
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    return rep.exit_status


if __name__ == "__main__":
    sys.exit(main())
