"""``ncspace`` command-line front end: deterministic JSON reports and DOT graphs."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import (
    ConstantUnresolvable,
    DegenerateInput,
    NcSpaceError,
    NotZeroDimensional,
    ParseError,
    RelationViolation,
    ShapeError,
    UnboundGenerator,
)
from .exactfield import ExactMatrix, FieldSpec, Scalar
from .presentation import format_source, parse, parse_field, parse_scalar

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_UNKNOWN_MODULE = 4
EXIT_DEGENERATE = 5
EXIT_NOT_ZERO_DIM = 6


class UnknownModule(NcSpaceError):
    pass


# ----------------------------------------------------------------------------
# serialisation helpers

def _real(x: float) -> float | int:
    if isinstance(x, int):
        return x
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    return float(f"{x:.12g}") + 0.0  # +0.0 folds -0.0


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return _real(obj)
    if isinstance(obj, complex):
        return [_real(obj.real), _real(obj.imag)]
    if isinstance(obj, Scalar):
        return obj.format()
    if isinstance(obj, ExactMatrix):
        return [[s.format() for s in row] for row in obj.rows]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def render_report(command: str, digest_source: bytes, results: dict, conventions: dict) -> str:
    report = {
        "command": command,
        "input_digest": "sha256:" + hashlib.sha256(digest_source).hexdigest(),
        "results": _jsonable(results),
        "tool_version": __version__,
        "conventions": _jsonable(conventions),
    }
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _read(path: str) -> tuple[str, bytes]:
    raw = Path(path).read_bytes()
    return raw.decode("utf-8"), raw


def _split_list(values: Sequence[str] | None) -> list[str]:
    out: list[str] = []
    for v in values or []:
        out.extend(x.strip() for x in v.split(",") if x.strip())
    return out


def _family(modules: dict, names: Sequence[str]):
    names = list(names) or list(modules)
    fam = []
    for n in names:
        if n not in modules:
            raise UnknownModule(f"no module named {n!r}; known: {', '.join(modules) or 'none'}")
        fam.append(modules[n])
    return fam


def _args_digest(args: argparse.Namespace) -> bytes:
    items = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return json.dumps(items, sort_keys=True, default=str).encode()


# ----------------------------------------------------------------------------
# commands

def cmd_validate(args) -> tuple[str, int]:
    from .repmod import validate

    text, raw = _read(args.source)
    alg, modules = parse(text, strict=False)
    mods = {}
    bad = []
    for name, rep in modules.items():
        viol = validate(rep)
        mods[name] = {
            "dim": rep.dim,
            "valid": not viol,
            "violations": [v.relation_text for v in viol],
        }
        if viol:
            bad.append(name)
    results = {
        "field": str(alg.field),
        "generators": list(alg.gens),
        "central_generators": list(alg.central),
        "central_elements": {k: v.format() for k, v in alg.central_elements.items()},
        "relations": [r.format() for r in alg.relations],
        "modules": mods,
        "valid": not bad,
        "canonical_source": format_source(alg, modules),
    }
    report = render_report("validate", raw, results, {})
    if bad:
        for name in bad:
            print(f"ncspace: module {name} violates: {'; '.join(mods[name]['violations'])}", file=sys.stderr)
        return report, EXIT_INVALID
    return report, EXIT_OK


def cmd_ext(args) -> tuple[str, int]:
    from .extcalc import ext1

    text, raw = _read(args.source)
    _, modules = parse(text)
    M, N = _family(modules, [args.M, args.N])
    rep = ext1(M, N)
    results = {
        "M": args.M,
        "N": args.N,
        "dim_hom": rep.dim_hom,
        "dim_der": rep.dim_der,
        "dim_inner": rep.dim_inner,
        "dim_ext1": rep.dim_ext1,
        "system_shape": list(rep.system_shape),
        "cocycle_basis": rep.cocycle_basis,
    }
    conv = {"ext": "derivations modulo inner derivations, full relation list"}
    return render_report("ext", raw, results, conv), EXIT_OK


def _height_field(field: FieldSpec, override: str | None) -> tuple[FieldSpec, str]:
    if override:
        return parse_field(override), "caller-supplied"
    if field.characteristic == 0:
        return field, "source field"
    return parse_field("Q"), "Q (source field has positive characteristic)"


def cmd_graph(args) -> tuple[str, int]:
    from .tangent import (
        adjacency_char_poly,
        eigenvalues,
        export_dot,
        hull_skeleton,
        nc_height,
        tangent_graph,
        thread_cap,
    )

    text, raw = _read(args.source)
    alg, modules = parse(text)
    fam = _family(modules, _split_list(args.modules))
    g = tangent_graph(fam, thread_cap())
    hfield, hsource = _height_field(alg.field, args.height_field)
    cp = adjacency_char_poly(g)
    eig = eigenvalues(g.adjacency)
    results = {
        "labels": list(g.labels),
        "ext0": g.ext0,
        "adjacency": g.adjacency,
        "hull_skeleton": hull_skeleton(g).render(),
        "char_poly": list(cp.coeffs),
        "eigenvalues": eig,
        "nc_height": nc_height(g, hfield, args.height),
    }
    conv = {
        "nc_height_mode": args.height,
        "nc_height_field": f"{hfield} ({hsource})",
        "char_poly_order": "constant term first",
    }
    if args.dot:
        Path(args.dot).write_text(export_dot(g), encoding="utf-8", newline="\n")
    return render_report("graph", raw, results, conv), EXIT_OK


def _parse_point(field: FieldSpec, text: str):
    from .heights import ProjectivePoint

    coords = [parse_scalar(c, field) for c in _split_list([text])]
    return ProjectivePoint(field, coords)


def _parse_matrix_text(field: FieldSpec, text: str) -> ExactMatrix:
    rows = [r for r in text.split(";") if r.strip()]
    if not rows:
        raise DegenerateInput("empty matrix")
    return ExactMatrix(field, [[parse_scalar(c, field) for c in _split_list([r])] for r in rows])


def cmd_height(args) -> tuple[str, int]:
    from .heights import (
        absolute_and_log,
        central_height,
        representation_height,
        total_height,
        weil_height,
    )

    kind = args.kind
    conv: dict[str, Any] = {}
    if kind == "weil":
        field = parse_field(args.field)
        if not args.coords:
            raise DegenerateInput("--coords is required")
        p = _parse_point(field, args.coords)
        H, h = absolute_and_log(p)
        results = {"field": str(field), "relative": weil_height(p), "absolute": H, "log": h}
    elif kind == "central":
        field = parse_field(args.field)
        pts = [_parse_point(field, c) for c in (args.point or [])]
        results = {"field": str(field), "central": central_height(pts)}
    elif kind == "rep":
        field = parse_field(args.field)
        mats = [_parse_matrix_text(field, m) for m in (args.matrix or [])]
        results = {
            "field": str(field),
            "representation": representation_height(field, mats, args.archimedean),
        }
        conv = {
            "rep_height_min": "minimum over all supplied matrices",
            "rep_height_archimedean": bool(args.archimedean),
            "valuation_of_zero": 0,
        }
    else:
        central = [float(x) for x in _split_list(args.central)]
        hv = total_height(central, args.rep, args.nc)
        results = {
            "central": list(hv.central),
            "representation": hv.representation,
            "noncommutative": hv.noncommutative,
        }
    return render_report(f"height {kind}", _args_digest(args), results, conv), EXIT_OK


def cmd_classify(args) -> tuple[str, int]:
    from .repmod import classify_family
    from .tangent import thread_cap

    text, raw = _read(args.source)
    alg, modules = parse(text)
    fam = _family(modules, _split_list(args.modules))
    names = _split_list(args.central) or None
    rep = classify_family(fam, names, threads=thread_cap())
    results = {
        "labels": [m.label for m in fam],
        "ext1": rep.ext1,
        "muller_consistent": rep.muller_consistent,
        "fibres": [
            {
                "members": f.members,
                "character": f.character,
                "non_isomorphic": f.non_isomorphic,
                "flag": f.flag,
            }
            for f in rep.fibres
        ],
    }
    conv = {
        "central_elements": names if names is not None else list(alg.central_elements),
        "character": "minimal polynomial of each central element (scalar when linear)",
    }
    return render_report("classify", raw, results, conv), EXIT_OK


def cmd_intersect(args) -> tuple[str, int]:
    from .intersect import intersection_number, make_divisor, parse_commutative

    text, raw = _read(args.source)
    alg, modules = parse(text)
    variables = _split_list(args.vars) or list(alg.central_elements)
    if not variables:
        raise DegenerateInput("no central variables: pass --vars or declare central elements")

    def polys(exprs):
        return [parse_commutative(e, alg.field, variables) for e in exprs or []]

    centre = polys(args.centre)
    D = make_divisor("D", polys(args.D))
    E = make_divisor("E", polys(args.E))
    value = intersection_number(D, E, args.rank, centre)
    results = {
        "variables": variables,
        "centre_relations": [p.format() for p in centre],
        "D": [p.format() for p in D.ideal],
        "E": [p.format() for p in E.ideal],
        "rank": args.rank,
        "intersection_number": value,
    }
    if args.audit:
        results["rank_audit"] = {
            name: {"dim": m.dim, "dim_squared_within_rank": m.dim * m.dim <= args.rank}
            for name, m in modules.items()
        }
    conv = {
        "intersection": "ideal sum I_D + I_E + centre relations",
        "monomial_order": "degrevlex",
        "total_only": True,
    }
    return render_report("intersect", raw + _args_digest(args), results, conv), EXIT_OK


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncspace", description="Noncommutative point computations.")
    ap.add_argument("--version", action="version", version=f"ncspace {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="write the JSON report here (default stdout)")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "parse a source and check every module")
    p.add_argument("source")

    p = add("ext", cmd_ext, "Ext^1 between two modules")
    p.add_argument("source")
    p.add_argument("M")
    p.add_argument("N")

    p = add("graph", cmd_graph, "tangent graph, hull skeleton and nc height")
    p.add_argument("source")
    p.add_argument("modules", nargs="*", help="family members (default: all modules)")
    p.add_argument("--dot", help="write the graph in DOT format")
    p.add_argument("--height", choices=("single", "product"), default="single")
    p.add_argument("--height-field", help="characteristic-0 field for the nc height")

    p = add("height", cmd_height, "Weil, central, representation or total heights")
    p.add_argument("kind", choices=("weil", "central", "rep", "total"))
    p.add_argument("--field", default="Q")
    p.add_argument("--coords", help="comma-separated coordinates, e.g. 't,1'")
    p.add_argument("--point", action="append", help="a central point's coordinates (repeatable)")
    p.add_argument("--matrix", action="append", help="rows separated by ';', entries by ',' (repeatable)")
    p.add_argument("--archimedean", action="store_true")
    p.add_argument("--central", action="append", help="central height values")
    p.add_argument("--rep", type=float, default=0.0)
    p.add_argument("--nc", type=float, default=0.0)

    p = add("classify", cmd_classify, "fibres of a family by central character")
    p.add_argument("source")
    p.add_argument("modules", nargs="*")
    p.add_argument("--central", action="append", help="central element names")

    p = add("intersect", cmd_intersect, "intersection number of two central divisors")
    p.add_argument("source")
    p.add_argument("--vars", action="append", help="central variable names (default: declared central elements)")
    p.add_argument("--centre", action="append", help="a defining relation of the centre (repeatable)")
    p.add_argument("--D", action="append", help="generator of the first divisor's ideal (repeatable)")
    p.add_argument("--E", action="append", help="generator of the second divisor's ideal (repeatable)")
    p.add_argument("--rank", type=int, required=True, help="rank of the algebra over its centre")
    p.add_argument("--audit", action="store_true", help="check dim^2 <= rank for every module")
    return ap


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, ConstantUnresolvable)):
        return EXIT_PARSE
    if isinstance(exc, (RelationViolation, ShapeError, UnboundGenerator)):
        return EXIT_INVALID
    if isinstance(exc, UnknownModule):
        return EXIT_UNKNOWN_MODULE
    if isinstance(exc, DegenerateInput):
        return EXIT_DEGENERATE
    if isinstance(exc, NotZeroDimensional):
        return EXIT_NOT_ZERO_DIM
    return EXIT_OTHER


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except (NcSpaceError, OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"ncspace: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
