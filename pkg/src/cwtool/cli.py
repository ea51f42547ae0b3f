"""Command-line interface. Every command prints one JSON document on stdout.

Exit status: 0 success, 1 a mathematical check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from cwtool.config import DEFAULT_CAPS


@dataclass
class CliConfig:
    group_cap: int = DEFAULT_CAPS.group_order
    enumeration_cap: int = DEFAULT_CAPS.enumeration
    closure_cap: int = DEFAULT_CAPS.closure_maps
    degree: int = 64
    samples: int = 40
    seed: int = 20240101
    threads: int = 1
    output: str | None = None


class UsageError(Exception):
    pass


def _emit(doc, cfg: CliConfig):
    text = json.dumps(doc, indent=2, sort_keys=True)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _formring(ref):
    from cwtool.presets import UnknownPreset, load_formring
    try:
        return load_formring(ref)
    except (UnknownPreset, FileNotFoundError) as exc:
        raise UsageError(f"unknown form ring {ref!r}") from exc


def _code(ref, formring=None):
    from cwtool.codes import code_from_json
    from cwtool.presets import UnknownPreset, get_code
    try:
        return get_code(ref, formring)
    except UnknownPreset:
        pass
    try:
        with open(ref) as fh:
            spec = json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"unknown code {ref!r}") from exc
    return code_from_json(spec, _formring(formring) if formring else None)


def _int_list(s):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {s!r}") from exc


# ---------------------------------------------------------------------------
# commands

def cmd_formring_validate(a, cfg):
    from cwtool.qform import symmetric_idempotents
    fr = _formring(a.ref)
    R = fr.R
    return 0, {
        "name": fr.name, "ring_order": R.size, "module_order": fr.V.size, "phi_order": len(fr.Phi),
        "level": fr.L, "J": [R.fmt(int(x)) for x in fr.J], "epsilon": R.fmt(fr.epsilon),
        "ker_lambda_order": len(fr.ker_lambda),
        "symmetric_idempotents": [[R.fmt(x) for x in t] for t in symmetric_idempotents(fr)],
        "valid": True,
    }


def _group(a, cfg):
    from cwtool.cwgroup import build_group
    return build_group(_formring(a.ref), a.genus, cap=cfg.group_cap)


def cmd_group_build(a, cfg):
    G = _group(a, cfg)
    return 0, {"formring": a.ref, "genus": a.genus, "order": G.order, "conductor": G.L, "dimension": G.n,
               "generators": len(G.generators)}


def cmd_group_center(a, cfg):
    from cwtool.cwgroup import scalar_center
    G = _group(a, cfg)
    return 0, {"formring": a.ref, "genus": a.genus, "order": G.order, "center": scalar_center(G)}


def cmd_group_molien(a, cfg):
    from cwtool.cwgroup import molien
    G = _group(a, cfg)
    series = molien(G, a.degree)
    if a.rationalize:
        series = series.rationalize(_int_list(a.rationalize))
    return 0, {"formring": a.ref, "genus": a.genus, "order": G.order, **series.to_json()}


def _parse_orbits(spec, fr):
    from cwtool.cwgroup import orbits_under
    from cwtool.finring import units
    if spec == "units":
        return orbits_under(fr, units(fr.R), "left")
    try:
        orbits = json.loads(spec)
    except json.JSONDecodeError:
        with open(spec) as fh:
            orbits = json.load(fh)
    return [[fr.R.parse(x) if isinstance(x, str) else int(x) for x in o] for o in orbits]


def cmd_group_symmetrize(a, cfg):
    from cwtool.cwgroup import NotCompatible, molien, symmetrize
    fr = _formring(a.ref)
    G = _group(a, cfg)
    orbits = _parse_orbits(a.orbits, fr)
    try:
        S = symmetrize(G, orbits, a.convention, cap=cfg.group_cap)
    except NotCompatible as exc:
        return 1, {"formring": a.ref, "compatible": False, "reason": str(exc)}
    out = {"formring": a.ref, "compatible": True, "degree": S.n, "order": S.order,
           "orbits": [[fr.R.fmt(x) for x in o] for o in orbits]}
    if a.degree:
        out.update(molien(S, a.degree).to_json())
    return 0, out


def cmd_code_cwe(a, cfg):
    from cwtool.codes import cwe_m
    C = _code(a.code, a.formring)
    p = cwe_m(C, a.genus)
    return 0, {"code": C.name, "length": C.length, "size": C.size, "genus": a.genus, **p.to_json()}


def cmd_code_check_type(a, cfg):
    from cwtool.codes import dual_and_selfdual_check, isotropy_check
    C = _code(a.code, a.formring)
    d = dual_and_selfdual_check(C)
    iso = isotropy_check(C)
    ok = d["self_dual"] and iso
    return (0 if ok else 1), {"code": C.name, "formring": C.fr.name, "size": C.size, **d,
                              "isotropic": iso, "type": ok}


def cmd_invariance_check(a, cfg):
    from cwtool.codes import cwe_m, invariance_check
    from cwtool.cwgroup import build_group
    C = _code(a.code, a.formring)
    p = cwe_m(C, a.genus)
    G = build_group(C.fr, a.genus, cap=cfg.group_cap)
    gens = [bool(invariance_check(p, g, a.mode, k=cfg.samples, seed=cfg.seed)) for g in G.generators]
    rng = np.random.default_rng(cfg.seed)
    pick = sorted(int(i) for i in rng.choice(G.order, size=min(a.random, G.order), replace=False))
    rand = [bool(invariance_check(p, G.element(i), "sampled", k=cfg.samples, seed=cfg.seed)) for i in pick]
    ok = all(gens) and all(rand)
    return (0 if ok else 1), {"code": C.name, "formring": C.fr.name, "genus": a.genus, "mode": a.mode,
                              "generators": gens, "random_elements": len(rand),
                              "random_invariant": all(rand), "invariant": ok}


def cmd_hypco_analyze(a, cfg):
    from cwtool.hypco import projective_consistency
    fr = _formring(a.ref)
    return 0, {"formring": a.ref, **projective_consistency(fr, a.genus, words=a.words)}


def cmd_preset_list(a, cfg):
    from cwtool.presets import CODE_NAMES, FORMRING_NAMES
    return 0, {"formrings": FORMRING_NAMES, "codes": CODE_NAMES}


def cmd_preset_export(a, cfg):
    from cwtool.presets import UnknownPreset, formring_to_json, get_code_spec
    try:
        return 0, formring_to_json(a.name)
    except UnknownPreset:
        pass
    try:
        spec = get_code_spec(a.name)
    except UnknownPreset as exc:
        raise UsageError(f"unknown preset {a.name!r}") from exc
    from cwtool.presets import get_formring
    fr = get_formring(spec.formring)
    rows = [[fr.R.fmt(x) if isinstance(x, (int, np.integer)) else x for x in r] for r in spec.rows]
    return 0, {"name": spec.name, "formring": spec.formring, "length": len(rows[0]), "rows": rows}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cwtool", description="Clifford-Weil groups of form rings and their codes")
    p.add_argument("--group-cap", type=int, default=DEFAULT_CAPS.group_order)
    p.add_argument("--enumeration-cap", type=int, default=DEFAULT_CAPS.enumeration)
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=20240101)
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is single-threaded")
    p.add_argument("--output", "-o")
    sub = p.add_subparsers(dest="area", required=True)

    fr = sub.add_parser("formring").add_subparsers(dest="cmd", required=True)
    x = fr.add_parser("validate")
    x.add_argument("ref")
    x.set_defaults(fn=cmd_formring_validate)

    gr = sub.add_parser("group").add_subparsers(dest="cmd", required=True)
    for name, fn in [("build", cmd_group_build), ("center", cmd_group_center), ("molien", cmd_group_molien),
                     ("symmetrize", cmd_group_symmetrize)]:
        x = gr.add_parser(name)
        x.add_argument("ref")
        x.add_argument("--genus", type=int, default=1)
        x.set_defaults(fn=fn)
        if name == "molien":
            x.add_argument("--degree", type=int, required=True)
            x.add_argument("--rationalize")
        if name == "symmetrize":
            x.add_argument("--orbits", required=True, help="JSON list of element lists, a JSON file, or 'units'")
            x.add_argument("--convention", choices=["row", "column"], default="row")
            x.add_argument("--degree", type=int, default=0)

    co = sub.add_parser("code").add_subparsers(dest="cmd", required=True)
    x = co.add_parser("cwe")
    x.add_argument("--code", required=True)
    x.add_argument("--formring")
    x.add_argument("--genus", type=int, default=1)
    x.set_defaults(fn=cmd_code_cwe)
    x = co.add_parser("check-type")
    x.add_argument("--code", required=True)
    x.add_argument("--formring")
    x.set_defaults(fn=cmd_code_check_type)

    inv = sub.add_parser("invariance").add_subparsers(dest="cmd", required=True)
    x = inv.add_parser("check")
    x.add_argument("--code", required=True)
    x.add_argument("--formring")
    x.add_argument("--genus", type=int, default=1)
    x.add_argument("--mode", choices=["symbolic", "sampled"], default="symbolic")
    x.add_argument("--random", type=int, default=50, help="random group elements checked in sampled mode")
    x.set_defaults(fn=cmd_invariance_check)

    hy = sub.add_parser("hypco").add_subparsers(dest="cmd", required=True)
    x = hy.add_parser("analyze")
    x.add_argument("ref")
    x.add_argument("--genus", type=int, default=1)
    x.add_argument("--words", type=int, default=100)
    x.set_defaults(fn=cmd_hypco_analyze)

    pr = sub.add_parser("preset").add_subparsers(dest="cmd", required=True)
    x = pr.add_parser("list")
    x.set_defaults(fn=cmd_preset_list)
    x = pr.add_parser("export")
    x.add_argument("name")
    x.set_defaults(fn=cmd_preset_export)
    return p


def run(argv=None) -> int:
    from cwtool.codes import CodeError
    from cwtool.cwgroup import GroupError
    from cwtool.cyclo import CycError
    from cwtool.finring import CapExceeded, RingError
    from cwtool.hypco import HypcoError
    from cwtool.qform import FormError

    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = CliConfig(group_cap=a.group_cap, enumeration_cap=a.enumeration_cap, samples=a.samples,
                    seed=a.seed, threads=a.threads, output=a.output)
    DEFAULT_CAPS.enumeration = cfg.enumeration_cap
    try:
        code, doc = a.fn(a, cfg)
    except UsageError as exc:
        print(f"cwtool: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, cfg)
        return 1
    except (RingError, FormError, CycError, GroupError, CodeError, HypcoError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, cfg)
        return 1
    _emit(doc, cfg)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
