"""Command-line front end: ``plqi {validate,certify,distort,construct,commutator}``.

Every command prints a JSON report that embeds its full configuration.
Exit codes: 0 success or pass, 1 check failed, 2 invalid input.
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from .certify import PLDeltaCertificate, certify
from .complex import INTERSECTION_TOL, validate
from .distortion import MapUnderTest, SamplePlan, bound_check, sample_distortion
from .errors import PLQIError
from .io import load_complex, load_map, read_json, save_complex, save_map, write_json

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def _emit(report, out):
    text = json.dumps(report, indent=2)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    print(text)


def _config(args, **extra):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg.update(extra)
    return cfg


def cmd_validate(args):
    c = load_complex(args.complex)
    tol = args.tolerance if args.tolerance is not None else INTERSECTION_TOL
    report = validate(c, tol=tol)
    _emit({"command": "validate", "config": _config(args), "report": report.to_dict()}, args.out)
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_certify(args):
    m = load_map(args.map)
    cert = certify(m, convexity=args.convexity, seed=args.seed)
    _emit({"command": "certify", "config": _config(args), "certificate": cert.to_dict()}, args.out)
    return EXIT_OK


def _map_under_test(args):
    data = read_json(args.input)
    if isinstance(data, dict) and "vertex_images" in data:
        return MapUnderTest(load_map(args.input)), "pl"
    fn = cons.from_spec(data)
    dim = args.dim or _spec_dim(data)
    if dim is None:
        raise PLQIError("cannot infer the ambient dimension of this spec; pass --dim")
    return MapUnderTest.ball(fn, args.radius, dim=dim), "analytic"


def _spec_dim(spec):
    params = spec.get("params", {}) or {}
    if "axis" in params:
        return len(params["axis"])
    if "n" in params:
        return int(params["n"])
    if "v" in params:
        return len(params["v"])
    if spec.get("kind") == "compose":
        for child in params.get("maps", []):
            d = _spec_dim(child)
            if d:
                return d
    return None


def cmd_distort(args):
    mut, mode = _map_under_test(args)
    k = args.k
    cert = None
    if args.check_against:
        cert = PLDeltaCertificate.from_dict(read_json(args.check_against).get("certificate")
                                            or read_json(args.check_against))
    strat = args.stratification
    if strat is None:
        # cross-simplex pairs are only covered by a global constant
        strat = 1.0 if mode == "pl" and cert is not None and cert.k_global is None else 0.5
    plan = SamplePlan(seed=args.seed, pair_count=args.pairs, stratification=strat)
    report = sample_distortion(mut, plan)
    if k is None and cert is not None:
        k = cert.k_global if (mode == "pl" and cert.k_global is not None) else cert.k_simplex
    out = {"command": "distort", "config": _config(args, stratification=strat, mode=mode),
           "report": report.to_dict()}
    code = EXIT_OK
    if k is not None:
        check = bound_check(report, k)
        out["verdict"] = {"k": k, "passed": check.passed, "margin": check.margin}
        code = EXIT_OK if check.passed else EXIT_FAIL
    _emit(out, args.out)
    return code


def cmd_construct(args):
    outdir = Path(args.out_dir)
    files = {}
    if args.kind == "disc-swap":
        K, Kp = cons.disc_swap_complexes(args.n)
        save_complex(K, outdir / "K.json")
        save_complex(Kp, outdir / "Kprime.json")
        save_map(cons.disc_swap_pl_map(args.n), outdir / "hprime.json", "K.json", "Kprime.json")
        files = {"source": "K.json", "target": "Kprime.json", "map": "hprime.json"}
    elif args.kind == "cone":
        axis = args.axis or [0.0] * (args.n - 1) + [1.0]
        write_json(cons.cone_map(np.asarray(axis, dtype=float)).to_spec(), outdir / "cone.json")
        files = {"spec": "cone.json"}
    elif args.kind == "case1":
        f = cons.Scale(args.scale)
        w = cons.witness_discs(f, args.n, count=args.count, seed=args.seed)
        g = cons.case1_map(args.n, w.discs)
        write_json(f.to_spec(), outdir / "f.json")
        write_json(g.to_spec(), outdir / "g.json")
        write_json({"points": w.points.tolist(), "radii": w.discs.radii.tolist()},
                   outdir / "points.json")
        files = {"f": "f.json", "g": "g.json", "points": "points.json"}
    _emit({"command": "construct", "config": _config(args), "files": files}, None)
    return EXIT_OK


def _points(args):
    if args.points:
        data = read_json(args.points)
        pts = data["points"] if isinstance(data, dict) else data
        return np.asarray(pts, dtype=float)
    if args.ray:
        ray = np.asarray(args.ray, dtype=float)
        return np.arange(1, args.count + 1)[:, None] * ray
    raise PLQIError("give --points or --ray")


def cmd_commutator(args):
    f = cons.from_spec(read_json(args.f_spec))
    g = cons.from_spec(read_json(args.g_spec))
    pts = _points(args)
    gaps = cons.commutator_series(f, g, pts)
    _emit({
        "command": "commutator",
        "config": _config(args),
        "points": pts.tolist(),
        "gaps": gaps.tolist(),
        "strictly_increasing": bool(np.all(np.diff(gaps) > 0)),
    }, args.out)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="also write the report here")
    common.add_argument("--tolerance", type=float, default=None,
                        help="intersection tolerance for complex validation")

    p = argparse.ArgumentParser(prog="plqi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common])
    s.add_argument("complex")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("certify", parents=[common])
    s.add_argument("map")
    s.add_argument("--convexity", choices=["auto", "assume", "none"], default="auto")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("distort", parents=[common])
    s.add_argument("input", help="simplicial map file or analytic map spec")
    s.add_argument("--pairs", type=int, default=10_000)
    s.add_argument("--check-against", dest="check_against", default=None,
                   help="certificate file supplying k")
    s.add_argument("--k", type=float, default=None)
    s.add_argument("--radius", type=float, default=1.0, help="sampling ball radius (specs)")
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--stratification", type=float, default=None)
    s.set_defaults(func=cmd_distort)

    s = sub.add_parser("construct", parents=[common])
    s.add_argument("kind", choices=["disc-swap", "cone", "case1"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--out-dir", dest="out_dir", default=".")
    s.add_argument("--axis", type=float, nargs="+", default=None)
    s.add_argument("--scale", type=float, default=2.0, help="f = scale(lambda) for case1")
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("commutator", parents=[common])
    s.add_argument("f_spec")
    s.add_argument("g_spec")
    s.add_argument("--points", default=None)
    s.add_argument("--ray", type=float, nargs="+", default=None)
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_commutator)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PLQIError, OSError, ValueError) as exc:
        print(json.dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
