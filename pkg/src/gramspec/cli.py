"""Command-line interface: JSON in, JSON out, deterministic under a fixed seed.

Exit codes: 0 success / feasible, 1 usage or bad input, 2 infeasible or
negative result, 3 numerical failure.  Errors go to stderr as JSON objects.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import binary as binary_mod
from . import gram, hermitian, kummer, sdp
from . import polytope as polytope_mod
from .config import Config, DEFAULT
from .errors import (GramspecError, Infeasible, NewtonPolytopeViolation, NotPSD,
                     NumericalFailure, RealRoot, RepeatedRoot)
from .poly import BinaryForm
from .serialize import (certificate_to_dict, matrix_to_dict, meshes_to_obj,
                        poly_from_dict, poly_to_dict, polytope_from_dict,
                        polytope_to_dict)

_NEGATIVE = (Infeasible, NotPSD, RealRoot, RepeatedRoot, NewtonPolytopeViolation)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _fail(exc: Exception, code: int) -> int:
    print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}},
                     sort_keys=True), file=sys.stderr)
    return code


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_config(args) -> Config:
    cfg = Config.from_json(args.config) if args.config else DEFAULT
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _load_form(path: str) -> BinaryForm:
    return BinaryForm.from_polynomial(poly_from_dict(_load_json(path)))


def _cmd_decompose(args) -> int:
    cfg = _load_config(args)
    f = poly_from_dict(_load_json(args.input))
    P = polytope_from_dict(_load_json(args.polytope)) if args.polytope else None
    space = gram.gram_space(f, P)
    sol = (sdp.minimize_rank(space, trials=args.trials, config=cfg)
           if args.rank_min else sdp.solve_feasibility(space, cfg))
    if sol.status == "infeasible":
        _emit({"status": "infeasible",
               "certificate_matrix": matrix_to_dict(sol.certificate)})
        return 2
    out = {"status": sol.status, "rank": sol.numerical_rank,
           "gram_matrix": matrix_to_dict(sol.point)}
    if args.rational:
        if space.mode != "rational":
            raise ValueError("--rational needs exact rational input coefficients")
        cert = None
        for max_den in (10**3, 10**6, 10**9):
            A = gram.round_to_rational_gram(space, sol.x, max_den)
            try:
                cert = gram.rational_sos(space, A)
                break
            except NotPSD:
                continue
        if cert is None:
            raise NotPSD("no rational PSD Gram matrix found by rounding; "
                         "the spectrahedron may have empty interior")
        out["certificate"] = certificate_to_dict(cert)
    else:
        cert = gram.extract_sos(space, sol.point, cfg)
        out["certificate"] = certificate_to_dict(cert)
    out["residual"] = out["certificate"]["residual"]
    _emit(out)
    return 0


def _cmd_enumerate_rank2(args) -> int:
    f = _load_form(args.input)
    mats, counts = binary_mod.enumerate_rank2(f, args.which)
    payload = {"counts": counts, "matrices": []}
    for m in mats:
        payload["matrices"].append({
            "matrix": matrix_to_dict(m.matrix),
            "kind": m.partition.kind,
            "block": list(m.partition.block),
            "psd": m.psd,
        })
    _emit(payload)
    return 0


def _cmd_kummer_opt(args) -> int:
    cfg = _load_config(args)
    f = _load_form(args.input)
    a = kummer.SexticCoeffs.from_form(f)
    c = tuple(Fraction(part) for part in args.objective.split(","))
    if len(c) != 3:
        raise ValueError("objective must be three comma-separated numbers")
    res = kummer.optimize_closed_form(a, c, cfg)

    def cp_dict(cp):
        return {"value": cp.value, "xyz": [float(v) for v in cp.xyz],
                "matrix": matrix_to_dict(cp.matrix), "psd": cp.psd, "rank": cp.rank}

    _emit({
        "objective": [float(v) for v in c],
        "discriminant": res.discriminant,
        "critical_values": list(res.critical_values) if res.critical_values else None,
        "rank3": [cp_dict(cp) for cp in res.rank3],
        "vertex_values": sorted(v for v, _ in res.vertex_values),
        "complex_vertex_values": [[v.real, v.imag] for v in res.complex_vertex_values],
        "maximum": cp_dict(res.maximum),
        "minimum": cp_dict(res.minimum),
    })
    return 0


def _cmd_surface_sample(args) -> int:
    cfg = _load_config(args)
    f = _load_form(args.input)
    a = kummer.SexticCoeffs.from_form(f)
    meshes = kummer.sample_surface(a, resolution=args.res,
                                   dual_radius=args.dual_radius, config=cfg)
    meshes_to_obj(meshes, args.out)
    _emit({"out": args.out,
           "meshes": [{"name": m.name, "vertices": int(len(m.vertices)),
                       "faces": int(len(m.faces))} for m in meshes]})
    return 0


def _cmd_pataki(args) -> int:
    if args.hermitian:
        if args.c is None:
            raise ValueError("--hermitian needs --c (codimension in Herm_N)")
        lo, hi = polytope_mod.hermitian_pataki_interval(args.N, args.c)
        _emit({"N": args.N, "c": args.c,
               "convention": "c = real codimension of the affine space in Herm_N",
               "interval": [lo, hi], "ranks": list(range(lo, hi + 1))})
    else:
        if args.m is None:
            raise ValueError("need --m (dimension of the affine space)")
        lo, hi = polytope_mod.pataki_interval(args.N, args.m)
        _emit({"N": args.N, "m": args.m,
               "convention": "m = dimension of the affine space in Sym_N",
               "interval": [lo, hi], "ranks": list(range(lo, hi + 1))})
    return 0


def _cmd_classify_polytope(args) -> int:
    P = polytope_from_dict(_load_json(args.input))
    profile = polytope_mod.toric_profile(P)
    out = profile.to_dict()
    out["polytope"] = polytope_to_dict(P)
    _emit(out)
    return 0


def _cmd_hermitian(args) -> int:
    cfg = _load_config(args)
    f = _load_form(args.input)
    if args.op == "enumerate":
        ones = hermitian.enumerate_herm_rank1(f)
        _emit({"count": len(ones),
               "matrices": [matrix_to_dict(r.matrix) for r in ones]})
        return 0
    if args.op == "lowrank":
        if args.s is None:
            raise ValueError("--op lowrank needs --s")
        res = hermitian.low_rank_sum(f, args.s, cfg)
        _emit({
            "s": args.s,
            "rank_bound": res.rank_bound,
            "sum_rank": res.sum_rank,
            "real_sum_rank": res.real_sum_rank,
            "rank_ones": [matrix_to_dict(A) for A in res.rank_ones],
            "shared_factor": poly_to_dict(res.shared_factor),
        })
        return 0
    raise ValueError(f"unknown hermitian op {args.op!r}")


def _cmd_hurwitz(args) -> int:
    cert = gram.hurwitz_sos(args.r)
    _emit({"r": args.r,
           "target": poly_to_dict(gram.norm_product_form(args.r, args.r)),
           "certificate": certificate_to_dict(cert)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gramspec",
                                 description="Sum-of-squares certificates via Gram spectrahedra")
    ap.add_argument("--config", help="JSON config file overriding defaults")
    ap.add_argument("--seed", type=int, default=None, help="seed for stochastic steps")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="SOS feasibility / decomposition of a polynomial")
    p.add_argument("--input", required=True)
    p.add_argument("--polytope", default=None)
    p.add_argument("--rank-min", action="store_true", dest="rank_min")
    p.add_argument("--rational", action="store_true")
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("enumerate-rank2", help="rank-2 Gram matrices of a positive binary form")
    p.add_argument("--input", required=True)
    p.add_argument("--which", default="psd", choices=["psd", "real", "all", "complex-count"])
    p.set_defaults(func=_cmd_enumerate_rank2)

    p = sub.add_parser("kummer-opt", help="closed-form linear optimization for a binary sextic")
    p.add_argument("--input", required=True)
    p.add_argument("--objective", required=True, help="c1,c2,c3")
    p.set_defaults(func=_cmd_kummer_opt)

    p = sub.add_parser("surface-sample", help="mesh the spectrahedron boundary and dual surface")
    p.add_argument("--input", required=True)
    p.add_argument("--res", type=int, default=48)
    p.add_argument("--out", required=True)
    p.add_argument("--dual-radius", type=float, default=None, dest="dual_radius")
    p.set_defaults(func=_cmd_surface_sample)

    p = sub.add_parser("pataki", help="rank intervals for extreme points of generic sections")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--hermitian", action="store_true")
    p.set_defaults(func=_cmd_pataki)

    p = sub.add_parser("classify-polytope", help="toric degree data and length prediction")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_classify_polytope)

    p = sub.add_parser("hermitian", help="Hermitian rank-one enumeration / low-rank sums")
    p.add_argument("--input", required=True)
    p.add_argument("--op", required=True, choices=["enumerate", "lowrank"])
    p.add_argument("--s", type=int, default=None)
    p.set_defaults(func=_cmd_hermitian)

    p = sub.add_parser("hurwitz", help="exact bilinear identities for r in {1,2,4,8}")
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=_cmd_hurwitz)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _NEGATIVE as exc:
        return _fail(exc, 2)
    except NumericalFailure as exc:
        return _fail(exc, 3)
    except (GramspecError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
