"""Command line entry point.

Every command writes one canonical JSON report to stdout and a short
summary to stderr.  Exit status: 0 certified / verified, 1 not established /
not verified, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

from . import __version__
from .abelscheck import check
from .arithgrp import cohopf_embed, is_inner, verify_nonhopf
from .homology import homology
from .nilpotent import build_u
from .specfile import SpecFile, SpecParseError, parse_spec
from .torus import WeightLattice, is_zero_mod_P, weight_table

COMMANDS = ("homology", "weights", "check", "nonhopf", "outer", "cohopf")
NEEDS_SPEC = ("homology", "weights", "check", "nonhopf")

SUCCESS = ("Certified", "Verified", "Computed", "Outer")


class InputError(Exception):
    pass


def _frac(x) -> str:
    return str(Fraction(x))


def _matrix(rows) -> list[list[str]]:
    return [[_frac(x) for x in r] for r in rows]


def _weight_entry(w, lat: WeightLattice, **extra) -> dict:
    return {"weight": list(w), "mod_P_zero": is_zero_mod_P(w, lat), **extra}


def _homology_payload(spec: SpecFile, args) -> tuple[str, dict]:
    pattern = spec.to_pattern()
    u = build_u(pattern)
    res = homology(u, graded=not args.ungraded)
    payload = {
        "graded": res.graded,
        "dim_u": u.dim,
        "wedge2_dim": res.wedge2_dim,
        "rank_d2": res.rank_d2,
        "ker_d2_dim": res.ker_d2_dim,
        "rank_d3": res.rank_d3,
        "h1_dim": res.h1_dim,
        "h2_dim": res.h2_dim,
        "per_weight": None,
    }
    if res.graded:
        lat = WeightLattice.of(pattern)
        payload["per_weight"] = [_weight_entry(w, lat, h1=a, h2=b) for w, (a, b) in sorted(res.per_weight.items())]
    return "Computed", payload


def _weights_payload(spec: SpecFile, args) -> tuple[str, dict]:
    pattern = spec.to_pattern()
    u = build_u(pattern)
    lat = WeightLattice.of(pattern)
    table = weight_table(u)
    basis = [
        _weight_entry(table[a], lat, index=a, block=[v.i_block, v.j_block], row=v.row, col=v.col)
        for a, v in enumerate(u.basis)
    ]
    return "Computed", {"dim_u": u.dim, "d": lat.d, "p_basis": [list(v) for v in lat.p_basis], "basis": basis}


def _counted(ws, lat) -> list[dict]:
    return [_weight_entry(w, lat, multiplicity=n) for w, n in sorted(Counter(ws).items())]


def _check_payload(spec: SpecFile, args) -> tuple[str, dict]:
    pattern = spec.to_pattern()
    rep = check(pattern)
    lat = WeightLattice.of(pattern)
    hom = rep.homology
    payload = {
        "cond_i": rep.cond_i,
        "cond_ii": {"passed": rep.cond_ii_passed, "rank_one_blocks": list(rep.cond_ii_blocks)},
        "cond_iii": {"passed": rep.cond_iii_passed, "offending_pairs": [[list(a), list(b)] for a, b in rep.cond_iii_pairs]},
        "cond_iv": {
            "passed": rep.cond_iv_passed,
            "offending_weights": [list(w) for w in rep.cond_iv_weights],
            "note": rep.cond_iv_note,
            "form": "strong: zero is not a weight of H2",
        },
        "failed": list(rep.failed),
        "h1_dim": hom.h1_dim,
        "h2_dim": hom.h2_dim,
        "h1_weights": _counted(hom.h1_weights, lat),
        "h2_weights": _counted(hom.h2_weights, lat),
    }
    return rep.verdict, payload


def _prime(spec: SpecFile | None, args) -> int:
    p = args.prime if args.prime is not None else (spec.prime if spec else None)
    if p is None:
        raise InputError("nonhopf needs a prime (spec file `prime = ...` or --prime)")
    return p


def _nonhopf_payload(spec: SpecFile, args) -> tuple[str, dict]:
    p = _prime(spec, args)
    try:
        pattern = SpecFile(spec.blocks, spec.kinds, p).to_pattern()
        rep = verify_nonhopf(pattern, p, samples=args.samples, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    witness = None
    if rep.preimage_witness is not None:
        c, pre = rep.preimage_witness
        witness = {"coset": _matrix(c.to_fractions()), "preimage": _matrix(pre.to_fractions())}
    payload = {
        "p": p,
        "samples": rep.samples,
        "seed": args.seed,
        "alpha_is_homomorphism": rep.automorphism,
        "alpha_round_trip": rep.round_trip,
        "closure": rep.closure,
        "center_is_central": rep.central,
        "center_image_index": rep.center_index,
        "expected_kernel_size": rep.expected_index,
        "kernel_size": rep.kernel_size,
        "kernel_maps_to_identity": rep.kernel_maps_to_identity,
        "kernel_witness": [_frac(x) for x in rep.kernel_witness],
        "well_defined": rep.well_defined,
        "surjective_on_samples": rep.surjective_on_samples,
        "surjectivity_witness": witness,
    }
    return ("Verified" if rep.ok else "NotVerified"), payload


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.command} needs {' '.join(missing)}")


def _outer_payload(spec, args) -> tuple[str, dict]:
    _require(args, "n", "m", "g")
    n, m = args.n, args.m
    if len(args.g) != m * m:
        raise InputError(f"--g needs {m * m} integers, got {len(args.g)}")
    g = [args.g[i * m:(i + 1) * m] for i in range(m)]
    try:
        w = is_inner(g, n, m)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    witness = None if w is None else {"epsilon": w.epsilon, "s": [list(r) for r in w.s], "M": [list(r) for r in w.M]}
    return ("Inner" if w else "Outer"), {"n": n, "m": m, "g": g, "inner": w is not None, "witness": witness}


def _cohopf_payload(spec, args) -> tuple[str, dict]:
    _require(args, "n", "m", "k")
    try:
        rep = cohopf_embed(args.k, args.n, args.m, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    payload = {"k": rep.k, "n": rep.n, "m": rep.m, "homomorphism": rep.homomorphism,
               "injective": rep.injective, "index": rep.index, "expected_index": rep.k ** (rep.n * rep.m)}
    return ("Verified" if rep.ok else "NotVerified"), payload


HANDLERS = {
    "homology": _homology_payload,
    "weights": _weights_payload,
    "check": _check_payload,
    "nonhopf": _nonhopf_payload,
    "outer": _outer_payload,
    "cohopf": _cohopf_payload,
}


def _flag_echo(args) -> dict:
    return {k: getattr(args, k) for k in ("prime", "ungraded", "seed", "samples", "n", "m", "k", "g")}


def run(command: str, spec: SpecFile | None, args: argparse.Namespace) -> tuple[int, dict]:
    """Execute one command; returns the exit code and the report."""
    if command in NEEDS_SPEC and spec is None:
        raise InputError(f"{command} needs a spec file")
    verdict, payload = HANDLERS[command](spec, args)
    report = {
        "tool": "abelscert",
        "version": __version__,
        "command": command,
        "input": {"spec": spec.as_dict() if spec else None, "flags": _flag_echo(args)},
        "payload": payload,
        "verdict": verdict,
    }
    return (0 if verdict in SUCCESS else 1), report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abelscert", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("specfile", nargs="?", type=Path)
    ap.add_argument("--prime", type=int)
    ap.add_argument("--ungraded", action="store_true", help="use the unsliced homology computation")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--n", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--k", type=int)
    ap.add_argument("--g", type=_int_list)
    return ap


def _summary(report: dict) -> str:
    p = report["payload"]
    cmd = report["command"]
    if cmd == "homology":
        return f"dim u = {p['dim_u']}, H1 = {p['h1_dim']}, H2 = {p['h2_dim']}"
    if cmd == "check" and p["failed"]:
        return f"{report['verdict']}: conditions {', '.join(p['failed'])} failed"
    if cmd == "nonhopf":
        return f"{report['verdict']}: kernel of the induced endomorphism has {p['kernel_size']} cosets"
    if cmd == "cohopf":
        return f"{report['verdict']}: index {p['index']}"
    return report["verdict"]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = None
    try:
        if args.specfile is not None:
            try:
                text = args.specfile.read_text(encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot read {args.specfile}: {exc.strerror}") from exc
            try:
                spec = parse_spec(text)
            except SpecParseError as exc:
                raise InputError(f"{args.specfile}: {exc}") from exc
        if args.prime is not None and args.command != "nonhopf":
            spec = SpecFile(spec.blocks, spec.kinds, args.prime) if spec else None
        if spec is not None:
            try:
                spec.to_pattern()
            except ValueError as exc:
                raise InputError(str(exc)) from exc
        code, report = run(args.command, spec, args)
    except InputError as exc:
        print(f"abelscert: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(report))
    print(_summary(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
