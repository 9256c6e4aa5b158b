"""Command-line entry point: ``tetratrig <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 non-generic input,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import chokim as ck
from . import e8lattice as e8
from . import picard as pc
from . import suites
from . import tetra as tt
from .config import RunConfig
from .errors import (
    AssignmentAmbiguous,
    DegenerateQuadratic,
    NoConsistentAssignment,
    NotInLattice,
    NotInModuli,
    NotRealizable,
    NoVerifyingOrder,
    TetraTrigError,
    ZeroPoleCollision,
)
from .projgeom import INF, MobiusMap

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NONGENERIC, EXIT_NUMERIC = range(5)

# solver failures that come from special (non-generic) input
_NONGENERIC = {
    ZeroPoleCollision: "cho-kim function",
    DegenerateQuadratic: "principal parameters",
    AssignmentAmbiguous: "principal-parameter ordering",
    NoVerifyingOrder: "psi",
}


# suite names fixed by the command-line contract
SUITE_ALIASES = {
    "thm11": "equivalence",
    "cor12": "cross-ratio",
    "thm13": "regge",
    "thm15": "psi",
    "prop313": "discriminant",
}


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def encode(x):
    """Plain JSON tree: complex as ``{"re", "im"}``, infinity as ``{"inf": true}``."""
    if x is INF or (isinstance(x, float) and math.isinf(x)):
        return {"inf": True}
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, e8.LatticeVec):
        return list(x.d)
    if isinstance(x, pc._IntClass):
        return str(x)
    if isinstance(x, MobiusMap):
        return encode(x.matrix)
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    return x


def decode_number(x):
    if isinstance(x, dict):
        if x.get("inf"):
            return INF
        return complex(x["re"], x["im"])
    return x


def dump(obj, out: str) -> None:
    text = json.dumps(encode(obj), indent=2) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read JSON input: {exc}") from exc


def _spec_from_args(args) -> tt.MetricSpec:
    try:
        if args.json is not None:
            data = _read_json(args.json)
            lengths = data["lengths"]
            if isinstance(lengths, list):
                return tt.MetricSpec.from_tuple(data["geometry"], lengths)
            return tt.MetricSpec.from_json(data)
        if args.values and len(args.values) == 6:
            return tt.MetricSpec.from_tuple(args.geometry, args.values)
    except NotRealizable as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"malformed metric input: {exc}") from exc
    raise CliError(EXIT_INPUT, "give six lengths or --json")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_solve(args):
    spec = _spec_from_args(args)
    try:
        spec.check()
    except NotRealizable as exc:
        raise CliError(EXIT_INPUT, f"not realizable: {exc}") from exc
    try:
        sol = ck.solve_angles(spec)
    except tuple(_NONGENERIC) as exc:
        stage = next(v for k, v in _NONGENERIC.items() if isinstance(exc, k))
        raise CliError(EXIT_NONGENERIC, f"non-generic input at stage '{stage}': {exc}") from exc
    except NoConsistentAssignment as exc:
        raise CliError(EXIT_NUMERIC, f"numerical failure at stage 'angle recovery': {exc}") from exc
    except (TetraTrigError, np.linalg.LinAlgError) as exc:
        raise CliError(EXIT_NUMERIC, f"numerical failure at stage 'setup': {exc}") from exc
    generic = tt.is_generic(tt.length_function(tt.from_metric(spec)))
    return {
        "geometry": spec.geometry,
        "lengths": spec.lengths,
        "angles": sol.angles,
        "psi": sol.psi,
        "principal_parameters": [sol.principal.p1, sol.principal.p2],
        "ck_l": {"zeros": sol.ck_l.zeros, "poles": sol.ck_l.poles},
        "ck_a": {"zeros": sol.ck_a.zeros, "poles": sol.ck_a.poles},
        "angle_values": sol.edge_values,
        "generic": generic,
    }, EXIT_OK


def cmd_verify(args):
    name = SUITE_ALIASES.get(args.suite, args.suite)
    names = list(suites.SUITES) if name == "all" else [name]
    cfg = RunConfig(args.tol or 1e-9, args.seed, args.trials, args.jobs)
    reports = [suites.run_suite(n, cfg, args.tol) for n in names]
    for r in reports:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in reports)
    body = {"passed": ok, "seed": args.seed, "suites": [r.to_json() for r in reports]}
    return body, EXIT_OK if ok else EXIT_FAIL


def cmd_regge(args):
    if len(args.values) != 6:
        raise CliError(EXIT_INPUT, "regge needs six values")
    out = ck.regge_transform(tuple(args.values), args.kind)
    body = {"kind": args.kind, "input": args.values, "output": list(out)}
    if not args.check:
        return body, EXIT_OK
    if args.kind != "lengths":
        raise CliError(EXIT_INPUT, "--check applies to lengths")
    try:
        spec = tt.MetricSpec.from_tuple(args.geometry, args.values)
        image = tt.MetricSpec.from_tuple(args.geometry, out)
        spec.check()
        image.check()
    except NotRealizable as exc:
        raise CliError(EXIT_INPUT, f"not realizable: {exc}") from exc
    a, b = tt.metric_angles_oracle(spec), tt.metric_angles_oracle(image)
    want = ck.regge_transform(a, "angles")
    res = max(abs(math.remainder(b[k] - want[k], 2 * math.pi)) for k in b)
    tol = args.tol or suites.TOLERANCES["regge"]
    body["check"] = {"angles": b, "expected": want, "residual": res, "passed": res < tol}
    return body, EXIT_OK if res < tol else EXIT_FAIL


def parse_vector(text: str) -> e8.LatticeVec:
    """``regge``, a label (``13``, ``e13``, ``I``) or eight doubled coordinates."""
    t = text.strip()
    try:
        if t == "regge":
            return e8.regge_root()
        if "," in t:
            return e8.LatticeVec(tuple(int(x) for x in t.split(",")))
        return e8.e(t[1:] if t.startswith("e") and len(t) > 1 else t)
    except (NotInLattice, ValueError, KeyError) as exc:
        raise CliError(EXIT_INPUT, f"malformed vector {text!r}: {exc}") from exc


def cmd_lattice(args):
    q = args.query
    if q == "roots":
        rs = e8.roots() if args.subsystem == "E8" else e8.sub_roots(args.subsystem)
        return {"subsystem": args.subsystem, "count": len(rs), "roots": list(rs)}, EXIT_OK
    if q == "planes":
        planes = [[e8.LABELS[i] for i in p] for p in e8.affine_planes()]
        return {"count": len(planes), "planes": planes}, EXIT_OK
    if q == "weyl-order":
        return {"group": "W(D6)", "order": e8.weyl_d6_group().order}, EXIT_OK
    if q == "reflect":
        if args.root is None or args.vector is None:
            raise CliError(EXIT_INPUT, "reflect needs --root and --vector")
        v = parse_vector(args.vector)
        if args.root == "regge-composite":
            w = e8.regge_composite()
            return {"element": "regge-composite", "vector": v, "image": w(v)}, EXIT_OK
        r = parse_vector(args.root)
        if not e8.is_root(r):
            raise CliError(EXIT_INPUT, f"{args.root} is not a root")
        return {"root": r, "vector": v, "image": e8.reflect(r, v)}, EXIT_OK
    if q == "project":
        if args.cls is None:
            raise CliError(EXIT_INPUT, "project needs --class")
        try:
            c = pc._pic(args.cls)
            v = pc.project_mod_f(c)
        except TetraTrigError as exc:
            raise CliError(EXIT_INPUT, f"cannot project {args.cls!r}: {exc}") from exc
        except (KeyError, ValueError) as exc:
            raise CliError(EXIT_INPUT, f"malformed class {args.cls!r}: {exc}") from exc
        return {"class": c, "image": v}, EXIT_OK
    raise CliError(EXIT_INPUT, f"unknown query {q}")


def cmd_surface(args):
    r = args.report
    if r == "pairing":
        return {
            "basis": list(pc.PIC_LABELS),
            "gram": pc.PIC_GRAM,
            "signature": pc.signature(pc.PIC_GRAM),
            "blowup_signature": pc.signature(pc.RT_GRAM),
            "canonical_class": pc.canonical_class(),
            "fiber_class": pc.fiber_class(),
            "fiber_components": dict(zip(("F11", "F12", "F21", "F22"), pc.fiber_component_classes())),
        }, EXIT_OK
    if r == "marking":
        iso = pc.reference_marking()
        mism = iso.gram_mismatches()
        body = {"classes": list(iso.classes), "vectors": list(iso.vectors), "picard_gram": iso.pic_gram(), "e8_gram": iso.e8_gram(), "mismatches": mism}
        return body, EXIT_OK if not mism else EXIT_FAIL
    if r == "identities":
        rep = pc.verify_bundle_identities()
        a = pc.bundle_assignment()
        body = {
            "passed": rep.passed,
            "failed": rep.failed,
            "roots_ok": rep.roots_ok,
            "d6_fixed": rep.d6_fixed,
            "first": list(a.first),
            "second": list(a.second),
            "ordering_ties": pc.bundle_ordering_ties(),
        }
        return body, EXIT_OK if rep.ok else EXIT_FAIL
    if r == "2B":
        found = pc.search_2B(pc.l_cls)
        body = {"B": pc.l_cls, "solutions": [list(s) for s in found], "unique": len(found) == 1}
        return body, EXIT_OK if len(found) == 1 else EXIT_FAIL
    raise CliError(EXIT_INPUT, f"unknown report {r}")


def cmd_reconstruct(args):
    spec = _spec_from_args(args)
    try:
        spec.check()
        L = tt.length_function(tt.from_metric(spec))
        t = tt.reconstruct_from_L(L, convention=args.convention)
    except NotRealizable as exc:
        raise CliError(EXIT_INPUT, f"not realizable: {exc}") from exc
    except NotInModuli as exc:
        raise CliError(EXIT_NONGENERIC, f"non-generic input: {exc}") from exc
    except TetraTrigError as exc:
        raise CliError(EXIT_NUMERIC, f"numerical failure at stage 'reconstruction': {exc}") from exc
    M = tt.length_function(t)
    res = max(abs(M(v) - L(v)) / max(abs(M(v)), abs(L(v))) for v in tt.e7l_basis())
    tol = args.tol or suites.TOLERANCES["reconstruct"]
    body = {"convention": args.convention, "quadric": t.quadric.matrix, "basis_residual": res, "passed": res < tol}
    return body, EXIT_OK if res < tol else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="pass threshold (suite default if omitted)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--json", default=None, help="input JSON file, '-' for stdin")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    p = argparse.ArgumentParser(prog="tetratrig", description="Tetrahedron trigonometry through E8 lattice characters.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="dihedral angles from edge lengths")
    s.add_argument("values", nargs="*", type=float, help="lengths 12 13 14 23 24 34")
    s.add_argument("--geometry", choices=tt.GEOMETRIES, default="hyperbolic")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=list(SUITE_ALIASES) + list(suites.SUITES) + ["all"])
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("regge", parents=[common], help="apply the Regge symmetry")
    s.add_argument("values", nargs="+", type=float)
    s.add_argument("--kind", choices=("lengths", "angles"), default="lengths")
    s.add_argument("--geometry", choices=tt.GEOMETRIES, default="hyperbolic")
    s.add_argument("--check", action="store_true", help="verify the angle formulas on the metric tetrahedra")
    s.set_defaults(fn=cmd_regge)

    s = sub.add_parser("lattice", parents=[common], help="E8 lattice queries")
    s.add_argument("query", choices=("roots", "planes", "weyl-order", "reflect", "project"))
    s.add_argument("--subsystem", choices=("E8",) + e8.SUBSYSTEMS, default="E8")
    s.add_argument("--root", default=None, help="root to reflect in: label, 'regge', 'regge-composite' or 8 doubled ints")
    s.add_argument("--vector", default=None)
    s.add_argument("--class", dest="cls", default=None, help="Picard class such as 'l+r-u13-u31'")
    s.set_defaults(fn=cmd_lattice)

    s = sub.add_parser("surface", parents=[common], help="Picard lattice bookkeeping")
    s.add_argument("report", choices=("pairing", "marking", "identities", "2B"))
    s.set_defaults(fn=cmd_surface)

    s = sub.add_parser("reconstruct", parents=[common], help="round trip through the length function")
    s.add_argument("values", nargs="*", type=float)
    s.add_argument("--geometry", choices=tt.GEOMETRIES, default="hyperbolic")
    s.add_argument("--convention", choices=("symmetric", "verbatim"), default="symmetric")
    s.set_defaults(fn=cmd_reconstruct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        RunConfig(args.tol or 1e-9, args.seed, args.trials, args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        body, code = args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    dump(body, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
