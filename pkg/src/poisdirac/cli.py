"""Command line front end.

Subcommands wrap the library: classify, jacobi, pushforward, extend,
phi, embed, bracket.  Reports are dual-emitted: aligned text for humans
(with a version banner), and a sorted-key JSON document for tests;
--porcelain prints the JSON document only, --output writes it to a
file as well.  Output is byte-identical for identical input.

Exit codes: 0 success, 1 parse or validation error, 2 mathematical
precondition failure, 3 property violation (e.g. graph extraction
failed).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .bivector_fields import is_poisson, nonzero_jacobiator_components, pushforward
from .embedding import build_embedding, compare_splittings
from .errors import PreconditionError, PropertyViolationError, SchemaError
from .poisson_linear import (
    canonical_iso,
    classify_subspace,
    cosymplectic_extension,
    embedding_conditions,
    induced_bivector,
)
from .rational_linalg import MatrixQ, Subspace
from .scenario import Scenario, load_scenario_text
from .submanifolds import (
    Parametrized,
    bracket_consistency_check,
    grid_points,
    is_basic_at,
    rank_profile,
)

BANNER = f"# poisdirac {__version__}"


class ReportFailure(Exception):
    """Carries a report that should still be printed, plus an exit code."""

    def __init__(self, exit_code: int, document: dict, text: list[str]) -> None:
        super().__init__(f"exit {exit_code}")
        self.exit_code = exit_code
        self.document = document
        self.text = text


def _fmt_rat(x: Fraction) -> str:
    return str(x)


def _fmt_point(point: Sequence[Fraction]) -> str:
    return "(" + ", ".join(_fmt_rat(x) for x in point) + ")"


def _point_doc(point: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in point]


def _matrix_doc(m: MatrixQ) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.entries]


def _subspace_doc(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": _matrix_doc(s.basis)}


def _bivector_doc(field) -> list[dict]:
    return [
        {"i": i + 1, "j": j + 1, "poly": str(p)}
        for (i, j), p in sorted(field.upper_entries().items())
    ]


def _record_doc(record) -> dict:
    return {
        "dims": {
            "subspace": record.dim_subspace,
            "annihilator": record.dim_annihilator,
            "sharp_annihilator": record.dim_sharp_annihilator,
            "sum": record.dim_sum,
            "characteristic": record.dim_characteristic,
            "leaf": record.dim_leaf,
        },
        "rho_rank": record.rho_rank,
        "flags": {
            "coisotropic": record.coisotropic,
            "cosymplectic": record.cosymplectic,
            "pointwise_poisson_dirac": record.pointwise_poisson_dirac,
            "lagrangian_in_leaf": record.lagrangian_in_leaf,
        },
    }


def _resolve_scenario(path_text: str) -> str:
    path = Path(path_text)
    if path.exists():
        return path.read_text(encoding="utf-8")
    bundled = resources.files("poisdirac").joinpath("scenarios", path_text)
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8")
    raise SchemaError(f"scenario {path_text!r} is neither a file nor a bundled scenario name")


def bundled_scenario_names() -> list[str]:
    base = resources.files("poisdirac").joinpath("scenarios")
    return sorted(p.name for p in base.iterdir() if p.name.endswith(".json"))


def _parse_points_flag(text: str) -> tuple[tuple[Fraction, ...], ...]:
    points = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            points.append(tuple(Fraction(c.strip()) for c in chunk.split(",")))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"--points: {exc}")
    return tuple(points)


def _gather_points(scenario: Scenario, args: argparse.Namespace, dim: int) -> tuple[tuple[Fraction, ...], ...]:
    if args.points is not None:
        return _parse_points_flag(args.points)
    if args.grid is not None:
        return grid_points(dim, args.grid, args.seed, args.count)
    if scenario.points is not None:
        return scenario.points
    return ()


def _require(value, what: str):
    if value is None:
        raise SchemaError(f"scenario is missing the {what} this analysis needs")
    return value


# ---------------------------------------------------------------------------
# subcommands


def _run_classify(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    sub = _require(scenario.submanifold, "submanifold")
    dim = sub.param_dim if isinstance(sub, Parametrized) else sub.ambient_dim
    points = _gather_points(scenario, args, dim)
    profile = rank_profile(pi, sub, points)
    rows_doc = []
    text = ["point | ambient | dim TC | dim #N*C | dim sum | dim char | rho rank | flags"]
    for row in profile.rows:
        r = row.record
        flags = ",".join(
            name for name, on in (
                ("coisotropic", r.coisotropic),
                ("cosymplectic", r.cosymplectic),
                ("poisson-dirac", r.pointwise_poisson_dirac),
            ) if on
        ) or "-"
        text.append(
            f"{_fmt_point(row.sample)} | {_fmt_point(row.ambient)} | {r.dim_subspace} | "
            f"{r.dim_sharp_annihilator} | {r.dim_sum} | {r.dim_characteristic} | {r.rho_rank} | {flags}"
        )
        rows_doc.append({
            "point": _point_doc(row.sample),
            "ambient": _point_doc(row.ambient),
            **_record_doc(row.record),
            "characteristic_basis": _matrix_doc(row.characteristic_basis),
        })
    constant_doc = {
        "dim_tangent": profile.constant.dim_tangent,
        "dim_sharp_conormal": profile.constant.dim_sharp_conormal,
        "dim_sum": profile.constant.dim_sum,
        "dim_characteristic": profile.constant.dim_characteristic,
        "rho_rank": profile.constant.rho_rank,
    }
    text.append("constant on samples: " + ", ".join(f"{k}={v}" for k, v in sorted(constant_doc.items())))
    doc = {
        "analysis": "classify",
        "rows": rows_doc,
        "constant": constant_doc,
        "errors": [{"index": i, "message": msg} for i, msg in profile.errors],
    }
    if profile.errors:
        for i, msg in profile.errors:
            text.append(f"point {i}: REGULARITY FAILURE: {msg}")
        raise ReportFailure(2, doc, text)
    return doc, text


def _run_jacobi(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    bad = nonzero_jacobiator_components(pi)
    poisson = not bad
    text = [f"Poisson: {'yes' if poisson else 'no'}"]
    for (i, j, k), poly in sorted(bad.items()):
        text.append(f"J^{{{i + 1},{j + 1},{k + 1}}} = {poly}")
    doc = {
        "analysis": "jacobi",
        "poisson": poisson,
        "nonzero_jacobiator": [
            {"i": i + 1, "j": j + 1, "k": k + 1, "poly": str(p)} for (i, j, k), p in sorted(bad.items())
        ],
    }
    return doc, text


def _run_pushforward(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    phi = _require(scenario.map, "map")
    phi_inv = _require(scenario.map_inverse, "map_inverse")
    result = pushforward(pi, phi, phi_inv)
    doc = {
        "analysis": "pushforward",
        "result": _bivector_doc(result),
        "poisson_preserved": is_poisson(result) == is_poisson(pi),
    }
    text = ["pushforward entries:"]
    for entry in doc["result"]:
        text.append(f"  Pi^{{{entry['i']},{entry['j']}}} = {entry['poly']}")
    if scenario.expected_bivector is not None:
        matches = result.entries == scenario.expected_bivector.entries
        doc["matches_expected"] = matches
        text.append(f"matches expected: {'yes' if matches else 'no'}")
    return doc, text


def _run_extend(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    point = _require(scenario.point, "evaluation point")
    c = _require(scenario.subspace_c, "subspace_c")
    p = pi.at(point)
    w = cosymplectic_extension(p, c)
    conditions = embedding_conditions(p, c, w)
    record = classify_subspace(p, w)
    induced = induced_bivector(p, w)
    doc = {
        "analysis": "extend",
        "point": _point_doc(point),
        "c": _subspace_doc(c),
        "w": _subspace_doc(w),
        "conditions": {"cond_leaf": conditions.cond_leaf, "cond_int": conditions.cond_int},
        "w_classification": _record_doc(record),
        "induced_bivector": _matrix_doc(induced.pi),
    }
    text = [
        f"extension at {_fmt_point(point)}: dim c = {c.dim} -> dim w = {w.dim}",
        "w basis rows: " + "; ".join(_fmt_point(r) for r in w.basis.entries),
        f"conditions: leaf-cover={conditions.cond_leaf} intersection-exact={conditions.cond_int}",
        f"w cosymplectic: {record.cosymplectic}",
    ]
    return doc, text


def _run_phi(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    point = _require(scenario.point, "evaluation point")
    c = _require(scenario.subspace_c, "subspace_c")
    v = _require(scenario.subspace_v, "subspace_v")
    w = _require(scenario.subspace_w, "subspace_w")
    p = pi.at(point)
    phi = canonical_iso(p, c, v, w)
    pv, pw = induced_bivector(p, v), induced_bivector(p, w)
    poisson_iso = (phi @ pv.pi @ phi.transpose()) == pw.pi
    identity_on_c = all(
        phi.matvec(v.coordinates_of(row)) == w.coordinates_of(row) for row in c.basis.entries
    )
    doc = {
        "analysis": "phi",
        "matrix": _matrix_doc(phi),
        "poisson_isomorphism": poisson_iso,
        "identity_on_c": identity_on_c,
        "v_bivector": _matrix_doc(pv.pi),
        "w_bivector": _matrix_doc(pw.pi),
    }
    text = [
        "phi (v-coordinates -> w-coordinates):",
        *(f"  {_fmt_point(row)}" for row in phi.entries),
        f"poisson isomorphism: {poisson_iso}; identity on c: {identity_on_c}",
    ]
    if not poisson_iso or not identity_on_c:
        raise ReportFailure(3, doc, text)
    return doc, text


def _run_embed(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    data = _require(scenario.dirac_manifold, "dirac_manifold block")
    total = data.base_dim + data.fiber_dim
    if scenario.samples is not None:
        samples = scenario.samples
    elif scenario.sample_grid is not None:
        height, seed, count = scenario.sample_grid
        samples = grid_points(total, height, seed, count)
    else:
        samples = grid_points(total, args.grid or 3, args.seed, args.count)
    result = build_embedding(data, samples)
    doc = {
        "analysis": "embed",
        "total_dim": result.total_dim,
        "variables": list(result.variables),
        "gauge_form": _bivector_doc(result.gauge_form),
        "bivector": _bivector_doc(result.bivector) if result.bivector is not None else None,
        "samples": [
            {
                "point": _point_doc(c.point),
                "graph": c.graph,
                "zero_section_coisotropic": c.zero_section_coisotropic,
                "zero_section_pullback_matches": c.zero_section_pullback_matches,
            }
            for c in result.sample_checks
        ],
    }
    text = [f"total space dimension {result.total_dim}, coordinates {', '.join(result.variables)}"]
    def form_term(e: dict) -> str:
        wedge = f"d{result.variables[e['i'] - 1]}^d{result.variables[e['j'] - 1]}"
        return wedge if e["poly"] == "1" else f"({e['poly']})*{wedge}"

    text.append("gauge form: " + (", ".join(form_term(e) for e in doc["gauge_form"]) or "0"))
    if result.bivector is not None:
        text.append("extracted bivector:")
        for e in doc["bivector"]:
            text.append(f"  Pi^{{{e['i']},{e['j']}}} = {e['poly']}")
    else:
        text.append("no polynomial bivector extracted (pointwise evidence only)")
    ok = all(c.ok for c in result.sample_checks)
    text.append(f"samples checked: {len(result.sample_checks)}, all passing: {ok}")
    if scenario.compare_v0 is not None and scenario.compare_v1 is not None:
        comparison = compare_splittings(data, scenario.compare_v0, scenario.compare_v1, samples)
        doc["comparison"] = {
            "gauge_difference": _bivector_doc(comparison.gauge_difference),
            "closed": comparison.closed,
            "one_form_difference_vanishes_on_base": comparison.one_form_difference_vanishes_on_base,
            "intertwines_at_all_samples": comparison.intertwines_at_all_samples,
        }
        text.append(
            "splitting comparison: closed=%s, primitive vanishes on base=%s, intertwines=%s"
            % (
                comparison.closed,
                comparison.one_form_difference_vanishes_on_base,
                comparison.intertwines_at_all_samples,
            )
        )
        if not (comparison.closed and comparison.one_form_difference_vanishes_on_base and comparison.intertwines_at_all_samples):
            raise ReportFailure(3, doc, text)
    if not ok:
        raise ReportFailure(3, doc, text)
    return doc, text


def _run_bracket(scenario: Scenario, args: argparse.Namespace) -> tuple[dict, list[str]]:
    pi = _require(scenario.bivector, "ambient bivector")
    sub = _require(scenario.submanifold, "submanifold")
    f = _require(scenario.f, "function f")
    g = _require(scenario.g, "function g")
    dim = sub.param_dim if isinstance(sub, Parametrized) else sub.ambient_dim
    points = _gather_points(scenario, args, dim)
    if scenario.point is not None:
        points = points + (scenario.point,)
    if not points:
        raise SchemaError("bracket analysis needs at least one point")
    per_point = []
    text = []
    for q in points:
        f_basic = is_basic_at(f, pi, sub, q)
        g_basic = is_basic_at(g, pi, sub, q)
        entry: dict[str, Any] = {
            "point": _point_doc(q),
            "f_basic": f_basic,
            "g_basic": g_basic,
        }
        if f_basic and g_basic:
            check = bracket_consistency_check(pi, sub, q, f, g)
            entry["bracket"] = str(check.intrinsic)
            entry["via_extension"] = str(check.via_extension)
            entry["consistent"] = check.agree
            text.append(f"{_fmt_point(q)}: {{f,g}} = {check.intrinsic} (extension route agrees: {check.agree})")
        else:
            text.append(f"{_fmt_point(q)}: not basic (f: {f_basic}, g: {g_basic})")
        per_point.append(entry)
    doc = {"analysis": "bracket", "f": str(f), "g": str(g), "per_point": per_point}
    return doc, text


_COMMANDS = {
    "classify": _run_classify,
    "jacobi": _run_jacobi,
    "pushforward": _run_pushforward,
    "extend": _run_extend,
    "phi": _run_phi,
    "embed": _run_embed,
    "bracket": _run_bracket,
}


def _emit(doc: dict, text: list[str], args: argparse.Namespace) -> None:
    rendered = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    if args.porcelain:
        sys.stdout.write(rendered)
    else:
        sys.stdout.write(BANNER + "\n")
        for line in text:
            sys.stdout.write(line + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisdirac",
        description="Exact Poisson/Dirac linear algebra and pointwise analysis of polynomial Poisson patches.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "classify": "rank profile of a submanifold over sample points",
        "jacobi": "symbolic Jacobi identity check of a bivector field",
        "pushforward": "push a bivector field along a polynomial diffeomorphism",
        "extend": "cosymplectic extension of a subspace at a point",
        "phi": "canonical isomorphism between two cosymplectic extensions",
        "embed": "coisotropic embedding of a regular Dirac manifold",
        "bracket": "bracket of basic functions with a consistency cross-check",
    }
    for name, descr in descriptions.items():
        p = sub.add_parser(name, help=descr)
        p.add_argument("--scenario", required=True, help="scenario file path or bundled scenario name")
        p.add_argument("--points", help="extra points, 'p/q,p/q;p/q,p/q'")
        p.add_argument("--grid", type=int, help="height bound for generated sample points")
        p.add_argument("--seed", type=int, default=0, help="seed for generated sample points")
        p.add_argument("--count", type=int, default=25, help="number of generated sample points")
        p.add_argument("--porcelain", action="store_true", help="print the machine-readable document only")
        p.add_argument("--output", help="also write the machine-readable document to this path")
    listing = sub.add_parser("scenarios", help="list bundled scenario files")
    listing.add_argument("--porcelain", action="store_true")
    listing.add_argument("--output", default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenarios":
        doc = {"analysis": "scenarios", "bundled": bundled_scenario_names()}
        _emit(doc, doc["bundled"], args)
        return 0
    try:
        scenario = load_scenario_text(_resolve_scenario(args.scenario))
        doc, text = _COMMANDS[args.command](scenario, args)
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except PreconditionError as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return 2
    except PropertyViolationError as exc:
        sys.stderr.write(f"property violation: {exc}\n")
        return 3
    except ReportFailure as failure:
        _emit(failure.document, failure.text, args)
        return failure.exit_code
    _emit(doc, text, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
