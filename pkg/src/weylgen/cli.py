"""Command-line interface.

Every command assembles a JSON report (the source of truth) and renders it
either as JSON or as a text view of the same content.  Reports are
deterministic byte-for-byte for a fixed configuration.

Exit codes: 0 all checks passed, 1 a verification check failed, 2 input or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cyclotomic import format_scalar
from .errors import VerificationError, WeylgenError
from .crossprod import flipped_shift_action, relation_check
from .groups import (
    DEFAULT_CLOSURE_BOUND,
    FAMILY_BOUNDS,
    MatrixGroup,
    build_family,
    decompose,
    group_spec_json,
    parse_group_spec,
)
from .invariants import build_invariant_system
from .polynomials import default_varnames
from .s3_fixture import check_s3_reproduction
from .weyl import (
    assemble_weyl_generators,
    format_weyl_generator,
    verify_generators,
)

SCHEMA = "weyl-report/1"

OUTPUT_DIR_ENV = "WEYLGEN_OUTPUT_DIR"

FAMILY_HELP = (
    "Sn (rank<=6), Bn (rank<=4), Dn (rank<=4), G (monomial G(m,1,rank), "
    "rank<=3, m<=4), cyclic (diag(zeta_m,1,..), m<=4), trivial"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylgen",
        description="Construct and verify invariant derivation generators "
                    "for pseudo-reflection groups, exactly.",
    )
    parser.add_argument("--version", action="version", version=f"weylgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, group_source: bool = True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", metavar="FILE",
                       help="write the report here instead of stdout; relative "
                            f"paths resolve against ${OUTPUT_DIR_ENV} when set")
        p.add_argument("--seed", type=int, default=0,
                       help="seed recorded in the report (reserved for "
                            "randomized sub-checks)")
        p.add_argument("--verbose", "-v", action="count", default=0)
        if group_source:
            p.add_argument("--family", help=FAMILY_HELP)
            p.add_argument("--rank", type=int, help="family rank n")
            p.add_argument("--m", type=int, default=None,
                           help="cyclotomic parameter for G / cyclic families")
            p.add_argument("--spec", metavar="FILE",
                           help="JSON group specification file")
            p.add_argument("--closure-bound", type=int, default=DEFAULT_CLOSURE_BOUND)
            p.add_argument("--force", action="store_true",
                           help="allow family parameters beyond the shipped bounds")

    add_common(sub.add_parser("list-families", help="list built-in families"),
               group_source=False)
    add_common(sub.add_parser("reflections", help="classify the pseudo-reflections"))
    add_common(sub.add_parser("invariants",
                              help="fundamental invariants, Jacobian and discriminant data"))
    add_common(sub.add_parser("weyl-generators",
                              help="construct the generators d_i and verify them"))
    add_common(sub.add_parser("verify", help="run the four-check verification suite"))
    add_common(sub.add_parser("decompose",
                              help="split into commuting pseudo-reflection factors"))
    cp = sub.add_parser("crossprod-check",
                        help="verify the Weyl relations inside the shift cross product")
    add_common(cp, group_source=False)
    cp.add_argument("--rank", type=int, required=True, help="number of lattice directions n")
    cp.add_argument("--params", type=int, default=0, help="number of central z variables")
    cp.add_argument("--flipped", action="store_true",
                    help="use the deliberately wrong shift convention (expected to fail)")
    add_common(sub.add_parser("reproduce-s3",
                              help="recompute the S3 generators and compare with the "
                                   "stored reference"), group_source=False)
    return parser


def _config_echo(args: argparse.Namespace) -> dict:
    config = {"format": args.format, "seed": args.seed}
    for key in ("family", "rank", "m", "spec", "closure_bound", "force",
                "params", "flipped"):
        if hasattr(args, key):
            config[key] = getattr(args, key)
    return config


def _resolve_group(args: argparse.Namespace) -> MatrixGroup:
    if args.spec:
        try:
            document = Path(args.spec).read_text()
        except OSError as exc:
            raise WeylgenError(f"cannot read spec file {args.spec}: {exc}") from exc
        return parse_group_spec(document, bound=args.closure_bound)
    if not args.family:
        raise WeylgenError("choose a group: --family NAME --rank N, or --spec FILE")
    if args.rank is None:
        raise WeylgenError("--rank is required with --family")
    bounds = FAMILY_BOUNDS.get(args.family)
    if bounds is None:
        raise WeylgenError(
            f"unknown family {args.family!r}; choose from {sorted(FAMILY_BOUNDS)}")
    if not args.force:
        if args.rank > bounds["rank"]:
            raise WeylgenError(
                f"family {args.family}: rank {args.rank} exceeds shipped bound "
                f"{bounds['rank']} (pass --force to override)")
        if "m" in bounds and args.m is not None and args.m > bounds["m"]:
            raise WeylgenError(
                f"family {args.family}: m {args.m} exceeds shipped bound "
                f"{bounds['m']} (pass --force to override)")
    return build_family(args.family, args.rank, args.m, bound=args.closure_bound)


# -- command payloads ---------------------------------------------------------


def _cmd_list_families(args) -> tuple[dict, str]:
    families = []
    for name in sorted(FAMILY_BOUNDS):
        entry = {"name": name, "bounds": FAMILY_BOUNDS[name]}
        families.append(entry)
    return {"families": families}, "pass"


def _cmd_reflections(args) -> tuple[dict, str]:
    from .groups import classify_reflections

    group = _resolve_group(args)
    refs = classify_reflections(group)
    payload = {
        "group": group_spec_json(group),
        "reflection_count": len(refs),
        "reflections": [
            {
                "order": r.order,
                "mu": format_scalar(r.mu),
                "root": [format_scalar(v) for v in r.root],
                "hyperplane_form": [format_scalar(v) for v in r.form],
                "matrix": [[format_scalar(v) for v in row] for row in r.g.rows],
            }
            for r in refs
        ],
    }
    return payload, "pass"


def _invariant_payload(system) -> dict:
    names = default_varnames(system.group.n)
    return {
        "invariants": [p.to_text(names) for p in system.e],
        "degrees": system.degrees,
        "order": system.group.order,
        "reflection_count": len(system.reflections),
        "jacobian_determinant": system.jprime.to_text(names),
        "reflection_product": system.J.to_text(names),
        "scalar_c": format_scalar(system.c),
        "discriminant": {
            "base": system.delta.base.to_text(names),
            "exponent": system.delta.exponent,
        },
    }


def _cmd_invariants(args) -> tuple[dict, str]:
    group = _resolve_group(args)
    system = build_invariant_system(group)
    payload = {"group": group_spec_json(group)}
    payload.update(_invariant_payload(system))
    return payload, "pass"


def _cmd_weyl_generators(args) -> tuple[dict, str]:
    group = _resolve_group(args)
    system = build_invariant_system(group)
    gens = assemble_weyl_generators(system)
    report = verify_generators(gens)
    names = default_varnames(group.n)
    payload = {
        "group": group_spec_json(group),
        "invariants": [p.to_text(names) for p in system.e],
        "degrees": system.degrees,
        "generators": [
            {
                "name": f"d{i + 1}",
                "text": format_weyl_generator(d, names),
                "terms": d.to_json(),
            }
            for i, d in enumerate(gens.d)
        ],
        "verification": report.to_json(),
    }
    return payload, "pass" if report.passed else "fail"


def _cmd_verify(args) -> tuple[dict, str]:
    group = _resolve_group(args)
    system = build_invariant_system(group)
    gens = assemble_weyl_generators(system)
    report = verify_generators(gens)
    payload = {
        "group": group_spec_json(group),
        "degrees": system.degrees,
        "reflection_count": len(system.reflections),
        "verification": report.to_json(),
    }
    return payload, "pass" if report.passed else "fail"


def _cmd_decompose(args) -> tuple[dict, str]:
    group = _resolve_group(args)
    dec = decompose(group, bound=args.closure_bound)
    payload = {
        "group": group_spec_json(group),
        "factors": [
            {
                "order": f.group.order,
                "reflection_count": len(f.reflections),
                "subspace_dimension": len(f.subspace),
                "subspace_basis": [[format_scalar(v) for v in vec] for vec in f.subspace],
            }
            for f in dec.factors
        ],
        "fixed_subspace_dimension": len(dec.fixed_subspace),
        "fixed_subspace_basis": [
            [format_scalar(v) for v in vec] for vec in dec.fixed_subspace
        ],
    }
    return payload, "pass"


def _cmd_crossprod_check(args) -> tuple[dict, str]:
    shift = flipped_shift_action if args.flipped else None
    report = relation_check(args.rank, args.params, shift)
    payload = {
        "rank": args.rank,
        "params": args.params,
        "convention": "epsilon-flipped" if args.flipped else "sigma",
        "relations": report.to_json()["relations"],
    }
    return payload, "pass" if report.passed else "fail"


def _cmd_reproduce_s3(args) -> tuple[dict, str]:
    result = check_s3_reproduction()
    payload = {
        "items": [{"name": name, "passed": ok} for name, ok in result["items"]],
        "verification": result["verification"],
    }
    return payload, "pass" if result["passed"] else "fail"


COMMANDS = {
    "list-families": _cmd_list_families,
    "reflections": _cmd_reflections,
    "invariants": _cmd_invariants,
    "weyl-generators": _cmd_weyl_generators,
    "verify": _cmd_verify,
    "decompose": _cmd_decompose,
    "crossprod-check": _cmd_crossprod_check,
    "reproduce-s3": _cmd_reproduce_s3,
}


# -- rendering ------------------------------------------------------------------


def render_text(report: dict, verbose: int = 0) -> str:
    lines: list[str] = [f"weylgen {report['command']}"]
    payload = report

    def emit(key, value, indent=0):
        lines.append("  " * indent + f"{key}: {value}")

    group = payload.get("group")
    if group:
        fam = group.get("family")
        label = fam["name"] if fam else "custom"
        emit("group", f"{label} (n={group['n']}, order={group['order']}, "
                      f"conductor={group['conductor']})")
    if "families" in payload:
        for fam in payload["families"]:
            emit(fam["name"], fam["bounds"], 1)
    if "invariants" in payload:
        for i, text in enumerate(payload["invariants"]):
            emit(f"e{i + 1}", text, 1)
        emit("degrees", payload["degrees"], 1)
    if "reflection_count" in payload:
        emit("reflections", payload["reflection_count"], 1)
    if "reflections" in payload:
        for r in payload["reflections"]:
            emit("reflection",
                 f"order={r['order']}, mu={r['mu']}, root=({', '.join(r['root'])}), "
                 f"L=({', '.join(r['hyperplane_form'])})", 1)
            if verbose:
                for row in r["matrix"]:
                    emit("row", "[" + ", ".join(row) + "]", 2)
    if "jacobian_determinant" in payload:
        emit("J'", payload["jacobian_determinant"], 1)
        emit("J", payload["reflection_product"], 1)
        emit("c (J' = c J)", payload["scalar_c"], 1)
        delta = payload["discriminant"]
        emit("Delta", f"({delta['base']})^{delta['exponent']}", 1)
    if "generators" in payload:
        for g in payload["generators"]:
            emit(g["name"], g["text"], 1)
    if "factors" in payload:
        for i, f in enumerate(payload["factors"]):
            emit(f"factor {i + 1}",
                 f"order={f['order']}, reflections={f['reflection_count']}, "
                 f"subspace dim={f['subspace_dimension']}", 1)
            if verbose:
                for vec in f["subspace_basis"]:
                    emit("basis", "[" + ", ".join(vec) + "]", 2)
        emit("fixed subspace dim", payload["fixed_subspace_dimension"], 1)
    if "relations" in payload:
        for rel in payload["relations"]:
            emit(rel["name"], "pass" if rel["passed"] else "FAIL", 1)
    if "items" in payload:
        for item in payload["items"]:
            emit(item["name"], "pass" if item["passed"] else "FAIL", 1)
    verification = payload.get("verification")
    if verification:
        for check in verification["checks"]:
            status = "pass" if check["passed"] else f"FAIL (witness {check.get('witness')})"
            emit(check["name"], status, 1)
    if payload.get("status"):
        lines.append(f"result: {payload['status'].upper()}")
    return "\n".join(lines) + "\n"


def _write_output(text: str, args) -> None:
    if args.out:
        path = Path(args.out)
        env_dir = os.environ.get(OUTPUT_DIR_ENV)
        if env_dir and not path.is_absolute():
            path = Path(env_dir) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command]
    try:
        payload, status = handler(args)
    except VerificationError as exc:
        report = {
            "schema": SCHEMA,
            "command": args.command,
            "config": _config_echo(args),
            "verification": exc.report.to_json(),
            "status": "fail",
        }
        _emit_report(report, args)
        return 1
    except WeylgenError as exc:
        sys.stderr.write(f"weylgen: error: {exc}\n")
        return 2
    except (OSError, ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"weylgen: error: {exc}\n")
        return 2
    report = {"schema": SCHEMA, "command": args.command, "config": _config_echo(args)}
    report.update(payload)
    report["status"] = status
    _emit_report(report, args)
    return 0 if status == "pass" else 1


def _emit_report(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = render_text(report, getattr(args, "verbose", 0))
    _write_output(text, args)


if __name__ == "__main__":
    sys.exit(main())
