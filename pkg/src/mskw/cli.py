"""Command-line surface: one JSON document per invocation on stdout,
diagnostics on stderr, exit codes 0 (pass), 1 (usage or budget error),
2 (counterexample or failed verification)."""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path
from typing import Mapping, Sequence

from .errors import (
    BudgetError,
    CapacityError,
    InternalConsistencyError,
    UsageError,
    ValidationError,
)
from .groups import GroupTable, build_group, inverse_set, subset
from .harness import campaign_spec_from_json, run_campaign
from .isoperimetry import PROPER_SUBSET, weak_connectivity
from .moser import build_theta_psi, kappa_v, mader_lemma_check, theorem_main_check
from .constructions import (
    CycleSystem,
    SigmaPermutation,
    ZeroProductCertificate,
    mader_cycles,
    shepherdson_sequence,
    sigma_permutation,
    verify_cycle_system,
    verify_sigma,
    verify_zero_product,
)
from .relations import (
    Relation,
    boundary,
    cayley,
    exterior,
    image,
    relation_from_json,
    relation_to_json,
)

# subcommands whose generator sets are silently augmented with the identity
_AUGMENT_IDENTITY = ("kappa-v", "fragment", "atoms", "spheres", "mskw-check")
# subcommands that reject generator sets containing the identity
_IDENTITY_FREE = ("cycles", "shepherdson")


def _load_doc(value: str):
    """Inline JSON (starts with '{' or '[') or a path to a JSON file."""
    text = value.strip()
    if not text.startswith(("{", "[")):
        text = Path(text).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {value!r}: {exc}") from exc


def _int_list(doc, what: str) -> list[int]:
    if not isinstance(doc, Sequence) or isinstance(doc, (str, bytes)):
        raise UsageError(f"{what} must be a JSON list of integers")
    out = []
    for x in doc:
        if not isinstance(x, int) or isinstance(x, bool):
            raise UsageError(f"{what} must be a JSON list of integers")
        out.append(x)
    return out


def _relation_from_args(
    args, command: str
) -> tuple[Relation, dict | None, list[int] | None]:
    """Build the working relation from --graph, or --group plus --gens."""
    if getattr(args, "graph", None):
        rel = relation_from_json(_load_doc(args.graph))
        return rel, None, None
    if getattr(args, "group", None) is None or getattr(args, "gens", None) is None:
        raise UsageError(f"{command} needs --graph, or both --group and --gens")
    spec = _load_doc(args.group)
    group = build_group(spec)
    gens = _int_list(_load_doc(args.gens), "--gens")
    if command in _AUGMENT_IDENTITY:
        gens = sorted(set(gens) | {group.identity})
    if command in _IDENTITY_FREE and group.identity in gens:
        raise UsageError(
            f"{command} needs an identity-free generator set; drop element "
            f"{group.identity}"
        )
    return cayley(group, frozenset(gens)), spec, gens


def _group_from_args(args) -> tuple[GroupTable, dict]:
    if getattr(args, "group", None) is None:
        raise UsageError("this subcommand needs --group")
    spec = _load_doc(args.group)
    return build_group(spec), spec


def _sets(items) -> list[list[int]]:
    return [sorted(s) for s in items]


def _emit(doc: Mapping, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for line in _text_lines(doc, ""):
            sys.stdout.write(line + "\n")


def _text_lines(value, prefix: str):
    if isinstance(value, Mapping):
        for key in sorted(value):
            inner = value[key]
            if isinstance(inner, Mapping):
                yield f"{prefix}{key}:"
                yield from _text_lines(inner, prefix + "  ")
            else:
                yield f"{prefix}{key}: {json.dumps(inner, sort_keys=True)}"
    else:
        yield f"{prefix}{json.dumps(value, sort_keys=True)}"


# -- subcommand handlers -------------------------------------------------------


def _cmd_group(args) -> int:
    group, _ = _group_from_args(args)
    _emit(
        {
            "order": group.order,
            "identity": group.identity,
            "labels": list(group.labels) if group.labels else None,
            "product": [list(row) for row in group.product],
            "inverse": list(group.inverse),
        },
        args.format,
    )
    return 0


def _cmd_cayley(args) -> int:
    rel, _, _ = _relation_from_args(args, "cayley")
    _emit(relation_to_json(rel), args.format)
    return 0


def _cmd_boundary(args) -> int:
    rel, _, _ = _relation_from_args(args, "boundary")
    if args.set is None:
        raise UsageError("boundary needs --set")
    members = frozenset(_int_list(_load_doc(args.set), "--set"))
    _emit(
        {
            "set": sorted(members),
            "image": sorted(image(rel, members)),
            "boundary": sorted(boundary(rel, members)),
            "exterior": sorted(exterior(rel, members)),
        },
        args.format,
    )
    return 0


def _cmd_spheres(args) -> int:
    rel, _, _ = _relation_from_args(args, "spheres")
    v = args.vertex
    degree = len(rel.successors[v])
    steps = []
    prev = frozenset([v])
    j = 1
    while True:
        applicable = rel.predecessors[v] & prev == {v}
        cur = image(rel, prev)
        step = {
            "j": j,
            "previous_size": len(prev),
            "size": len(cur),
            "applicable": applicable,
            "margin": (len(cur) - len(prev) - degree + 1) if applicable else None,
        }
        steps.append(step)
        if not applicable or cur == prev:
            break
        prev = cur
        j += 1
    _emit({"vertex": v, "degree": degree, "steps": steps}, args.format)
    return 0


def _cmd_atoms(args) -> int:
    rel, _, _ = _relation_from_args(args, "atoms")
    report = weak_connectivity(rel, args.variant, cap=args.cap)
    _emit(
        {
            "kappa": report.kappa,
            "variant": report.variant,
            "atoms": _sets(report.atoms),
            "fragments_sample": _sets(report.fragments),
        },
        args.format,
    )
    return 0


def _cmd_kappa_v(args) -> int:
    rel, _, _ = _relation_from_args(args, "kappa-v")
    report = kappa_v(rel, args.vertex, args.method, cap=args.cap)
    _emit(
        {"kappa_v": report.kappa_v, "K_v": sorted(report.minimal_fragment)},
        args.format,
    )
    return 0


def _cmd_fragment(args) -> int:
    rel, _, _ = _relation_from_args(args, "fragment")
    report = kappa_v(rel, args.vertex, args.method, cap=args.cap)
    _emit(
        {
            "vertex": report.vertex,
            "kappa_v": report.kappa_v,
            "K_v": sorted(report.minimal_fragment),
            "fragments_sample": _sets(report.fragments_sample),
            "method": report.method,
        },
        args.format,
    )
    return 0


def _cmd_theta_psi(args) -> int:
    rel, _, _ = _relation_from_args(args, "theta-psi")
    tp = build_theta_psi(rel, cap=args.cap)
    holds, pair = mader_lemma_check(rel, theta_psi=tp)
    _emit(
        {
            "theta": relation_to_json(tp.theta),
            "psi": _sets(tp.psi),
            "minimal_fragments": _sets(tp.minimal_fragments),
            "mader_lemma_holds": holds,
            "counterexample": list(pair) if pair else None,
        },
        args.format,
    )
    return 0 if holds else 2


def _cmd_mskw_check(args) -> int:
    if args.set is None:
        raise UsageError("mskw-check needs --set for F")
    rel, spec, gens = _relation_from_args(args, "mskw-check")
    group = build_group(spec) if spec else None
    if group is None or gens is None:
        raise UsageError("mskw-check needs --group and --gens (not --graph)")
    f_members = frozenset(_int_list(_load_doc(args.set), "--set"))
    s_sub = subset(group, gens)
    f_sub = subset(group, f_members)
    if inverse_set(s_sub).members & f_members != {group.identity}:
        raise UsageError(
            "F must meet the inverse of S exactly at the identity"
        )
    ok_fin, margin_fin = theorem_main_check(rel, group.identity, f_members, "finite")
    complement = frozenset(range(group.order)) - f_members
    ok_cof, margin_cof = theorem_main_check(
        rel, group.identity, complement, "cofinite"
    )
    _emit(
        {
            "bound": len(s_sub.members) - 1,
            "finite": {"holds": ok_fin, "margin": margin_fin},
            "cofinite": {"holds": ok_cof, "margin": margin_cof},
            "holds": ok_fin and ok_cof,
        },
        args.format,
    )
    return 0 if ok_fin and ok_cof else 2


def _cmd_sigma(args) -> int:
    if args.check_certificate:
        return _check_certificate(args, "sigma-permutation")
    group, spec = _group_from_args(args)
    if args.set is None:
        raise UsageError("sigma needs --set for the domain")
    members = frozenset(_int_list(_load_doc(args.set), "--set"))
    cert = sigma_permutation(group, members)
    _emit(_sigma_doc(spec, cert), args.format)
    return 0


def _sigma_doc(spec: dict, cert: SigmaPermutation) -> dict:
    return {
        "kind": "sigma-permutation",
        "group": spec,
        "domain": sorted(cert.domain),
        "sigma": [list(pair) for pair in cert.mapping],
    }


def _cmd_cycles(args) -> int:
    if args.check_certificate:
        return _check_certificate(args, "cycle-system")
    rel, spec, gens = _relation_from_args(args, "cycles")
    if spec is None or gens is None:
        raise UsageError("cycles needs --group and --gens (not --graph)")
    cert = mader_cycles(rel, args.vertex)
    _emit(
        {
            "kind": "cycle-system",
            "group": spec,
            "gens": sorted(gens),
            "vertex": cert.hub,
            "cycles": [list(c) for c in cert.cycles],
        },
        args.format,
    )
    return 0


def _cmd_shepherdson(args) -> int:
    if args.check_certificate:
        return _check_certificate(args, "zero-product")
    group, spec = _group_from_args(args)
    if args.gens is None:
        raise UsageError("shepherdson needs --gens")
    gens = _int_list(_load_doc(args.gens), "--gens")
    if group.identity in gens:
        raise UsageError(
            "shepherdson needs an identity-free generator set; drop element "
            f"{group.identity}"
        )
    cert = shepherdson_sequence(group, frozenset(gens))
    _emit(
        {
            "kind": "zero-product",
            "group": spec,
            "gens": sorted(gens),
            "sequence": list(cert.sequence),
            "k": cert.k,
            "bound": math.ceil(group.order / len(set(gens))),
        },
        args.format,
    )
    return 0


def _check_certificate(args, expected_kind: str) -> int:
    doc = _load_doc(args.check_certificate)
    if not isinstance(doc, Mapping):
        raise UsageError("certificate must be a JSON object")
    kind = doc.get("kind")
    if kind != expected_kind:
        raise UsageError(
            f"certificate kind {kind!r} does not match this subcommand "
            f"({expected_kind})"
        )
    group = build_group(doc.get("group", {}))
    if kind == "sigma-permutation":
        cert = SigmaPermutation(
            domain=frozenset(_int_list(doc.get("domain", []), "domain")),
            mapping=tuple(
                (int(a), int(b)) for a, b in doc.get("sigma", [])
            ),
        )
        ok, reason = verify_sigma(group, cert)
    elif kind == "cycle-system":
        rel = cayley(group, frozenset(_int_list(doc.get("gens", []), "gens")))
        cert = CycleSystem(
            hub=int(doc.get("vertex", 0)),
            cycles=tuple(tuple(int(v) for v in c) for c in doc.get("cycles", [])),
        )
        ok, reason = verify_cycle_system(rel, cert)
    else:
        cert = ZeroProductCertificate(
            sequence=tuple(_int_list(doc.get("sequence", []), "sequence"))
        )
        ok, reason = verify_zero_product(
            group, _int_list(doc.get("gens", []), "gens"), cert
        )
    _emit({"valid": ok, "reason": reason}, args.format)
    return 0 if ok else 2


def _cmd_verify(args) -> int:
    if args.spec is None:
        raise UsageError("verify needs --spec")
    doc = _load_doc(args.spec)
    spec = campaign_spec_from_json(doc)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    report = run_campaign(spec, jobs=args.jobs)
    sys.stderr.write(f"wall_time_s: {report.wall_time_s:.3f}\n")
    _emit(report.to_json_dict(include_wall_time=False), args.format)
    return 0 if report.ok() else 2


# -- parser --------------------------------------------------------------------


def _add_common(sub, *, graph=False, group=False, gens=False, vertex=None,
                set_flag=False, cap=False, method=False, cert=False):
    if group:
        sub.add_argument("--group", help="group spec, inline JSON or a file path")
    if gens:
        sub.add_argument("--gens", help="generator list, inline JSON or a file path")
    if graph:
        sub.add_argument("--graph", help="graph document, inline JSON or a file path")
    if vertex == "required":
        sub.add_argument("--vertex", type=int, required=True)
    elif vertex == "optional":
        sub.add_argument("--vertex", type=int, default=0)
    if set_flag:
        sub.add_argument("--set", help="vertex/element list, inline JSON or a path")
    if cap:
        sub.add_argument("--cap", type=int, default=22, help="enumeration cap")
    if method:
        sub.add_argument(
            "--method",
            choices=("enumeration", "flow", "both-agree"),
            default="enumeration",
        )
    if cert:
        sub.add_argument(
            "--check-certificate",
            help="verify a previously emitted certificate instead of building",
        )
    sub.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mskw",
        description="Exact boundary, fragment, and certificate machinery "
        "for finite vertex-transitive relations.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser("group", help="build and dump a group table"),
                group=True)
    _add_common(subs.add_parser("cayley", help="emit a Cayley relation as graph JSON"),
                group=True, gens=True, graph=False)
    _add_common(subs.add_parser("boundary", help="image, boundary, exterior of a set"),
                graph=True, group=True, gens=True, set_flag=True)
    _add_common(subs.add_parser("spheres", help="iterated images with growth margins"),
                graph=True, group=True, gens=True, vertex="optional")
    atoms = subs.add_parser("atoms", help="weak connectivity, fragments, atoms")
    atoms.add_argument(
        "--variant",
        choices=("paper-definition", "proper-subset"),
        default=PROPER_SUBSET,
    )
    _add_common(atoms, graph=True, group=True, gens=True, cap=True)
    _add_common(subs.add_parser("kappa-v", help="per-vertex connectivity"),
                graph=True, group=True, gens=True, vertex="required",
                cap=True, method=True)
    _add_common(subs.add_parser("fragment", help="full per-vertex fragment report"),
                graph=True, group=True, gens=True, vertex="required",
                cap=True, method=True)
    _add_common(subs.add_parser("theta-psi", help="fragment subgraph and psi sets"),
                graph=True, group=True, gens=True, cap=True)
    _add_common(subs.add_parser("mskw-check", help="product-growth bound for (F,S)"),
                group=True, gens=True, set_flag=True)
    _add_common(subs.add_parser("sigma", help="displacement permutation certificate"),
                group=True, set_flag=True, cert=True)
    _add_common(subs.add_parser("cycles", help="cycle system through a vertex"),
                group=True, gens=True, vertex="optional", cert=True)
    _add_common(subs.add_parser("shepherdson", help="short zero-product sequence"),
                group=True, gens=True, cert=True)
    verify = subs.add_parser("verify", help="run a verification campaign")
    verify.add_argument("--spec", help="campaign spec, inline JSON or a file path")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--format", choices=("json", "text"), default="json")
    return parser


_HANDLERS = {
    "group": _cmd_group,
    "cayley": _cmd_cayley,
    "boundary": _cmd_boundary,
    "spheres": _cmd_spheres,
    "atoms": _cmd_atoms,
    "kappa-v": _cmd_kappa_v,
    "fragment": _cmd_fragment,
    "theta-psi": _cmd_theta_psi,
    "mskw-check": _cmd_mskw_check,
    "sigma": _cmd_sigma,
    "cycles": _cmd_cycles,
    "shepherdson": _cmd_shepherdson,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (UsageError, ValidationError, CapacityError, BudgetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except InternalConsistencyError as exc:
        sys.stderr.write(f"internal consistency error: {exc}\n")
        return 2


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
