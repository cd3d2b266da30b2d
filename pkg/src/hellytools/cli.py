"""Command-line driver: ``hellytools <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import math
import os
import sys
from fractions import Fraction

from . import analytics, constructions, engine, io, lattice, liftings
from .geometry import GeometryError
from .norms import l2_diameter_exact, rho_diameter

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


# ---------------------------------------------------------------------------
# output


def _scalar(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple, dict)):
        return io.dumps(v).replace("\n", " ").replace("  ", "").strip()
    return v


def render(obj, fmt: str, rows_key: str | None = None) -> str:
    if fmt == "json":
        return io.dumps(obj)
    rows = obj.get(rows_key) if rows_key and isinstance(obj, dict) else None
    if fmt == "csv":
        buf = _io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k in sorted(obj):
                w.writerow([k, _scalar(obj[k])])
        return buf.getvalue()
    # table
    lines = []
    if rows:
        cols = list(rows[0])
        widths = [max(len(c), *(len(str(_scalar(r[c]))) for r in rows)) for c in cols]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            lines.append("  ".join(str(_scalar(r[c])).ljust(w) for c, w in zip(cols, widths)))
        others = {k: v for k, v in obj.items() if k != rows_key}
    else:
        others = obj
    width = max((len(k) for k in others), default=0)
    for k in sorted(others):
        lines.append(f"{k.ljust(width)}  {_scalar(others[k])}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _jobs(args):
    return args.jobs if args.jobs is not None else engine.default_jobs()


def cmd_check(args):
    if args.colorful:
        fams = [io.load_family(p) for p in args.colorful]
        colors = engine.ColorfulFamilies(tuple(fams))
        pred = io.parse_predicate(args.predicate, colors.dim)
        rep = engine.check_colorful(colors, pred, cap=args.cap, samples=args.samples, seed=args.seed)
        return rep.to_json()
    if args.family is None or args.subset_size is None:
        raise UsageError("check needs --family and --subset-size (or --colorful)")
    family = io.load_family(args.family)
    if not 1 <= args.subset_size <= len(family):
        raise UsageError(f"--subset-size must lie in [1, {len(family)}]")
    pred = io.parse_predicate(args.predicate, family.dim)
    rep = engine.check_helly(family, args.subset_size, pred, cap=args.cap, samples=args.samples,
                             seed=args.seed, jobs=_jobs(args))
    out = rep.to_json()
    out["helly_transfer"] = rep.helly_transfer
    return out


def cmd_diameter(args):
    family = io.load_family(args.family)
    norm = io.resolve_norm(args.norm, family.dim)
    bodies = family.bodies
    if norm is None:
        diam = l2_diameter_exact(bodies)
        return {"norm": "l2", "squared": str(diam.squared), "value_float": math.sqrt(diam.squared),
                "pair": [[str(x) for x in p] for p in diam.pair]}
    cert = rho_diameter(bodies, norm)
    return {"norm": norm.name, "value": str(cert.value), "direction": [str(x) for x in cert.direction],
            "index": cert.index, "pair": [[str(x) for x in p] for p in cert.attaining_pair]}


def cmd_lattice(args):
    family = io.load_family(args.family)
    w = lattice.contains_k_colinear(family.bodies, args.k)
    return {"k": args.k, "witness": w.to_json() if w else "none"}


def _parse_vec(text):
    return tuple(Fraction(x) for x in text.split(","))


def cmd_lift(args):
    family = io.load_family(args.family)
    d = family.dim
    members = []
    meta = {"kind": args.kind, "base_dim": d}
    if args.kind == "width":
        if not args.v:
            raise UsageError("width lift needs --v")
        v = _parse_vec(args.v)
        meta["v"] = [str(x) for x in v]
        lifts = [(i, liftings.lift_width(b, v).polytope) for i, b in family.members]
    elif args.kind == "discrete":
        if args.k is None:
            raise UsageError("discrete lift needs --k")
        if args.v:
            v = _parse_vec(args.v)
        else:
            bound = max(liftings.step_bound(b, args.k) for b in family.bodies)
            v = liftings.generic_direction(d, bound)
        meta.update({"v": [str(x) for x in v], "k": args.k})
        lifts = [(i, liftings.lift_discrete(b, args.k, v).polytope) for i, b in family.members]
    elif args.kind == "boundary":
        norm = io.resolve_norm(args.norm, d)
        if norm is None or args.facet is None:
            raise UsageError("boundary lift needs a polytope --norm and --facet")
        meta.update({"norm": norm.name, "facet": args.facet})
        lifts = [(i, liftings.lift_boundary(b, norm, args.facet).polytope) for i, b in family.members]
    else:
        norm = io.resolve_norm(args.norm, d)
        if norm is None:
            raise UsageError("product lift needs a polytope --norm")
        target = Fraction(args.target)
        meta.update({"norm": norm.name, "target": str(target)})
        lifts = [(i, liftings.lift_product(b, norm, target).polytope) for i, b in family.members]
    members = tuple(lifts)
    lifted = engine.Family(members[0][1].dim, members)
    out = io.family_to_json(lifted, lift=meta)
    if args.out:
        io.write_json(args.out, out)
        return {"written": args.out, "members": len(members), "dim": lifted.dim, "lift": meta}
    return out


def _params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--params entries look like key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_generate(args):
    p = _params(args.params)
    jobs = _jobs(args)
    try:
        if args.construction == "discrete-tight":
            family, rep = constructions.gen_discrete_tight(int(p.get("d", 2)), jobs=jobs)
        elif args.construction == "minkowski-tight":
            d = int(p.get("d", 2))
            norm = io.resolve_norm(p.get("norm", "linf"), d)
            if norm is None:
                raise UsageError("minkowski-tight needs a polytope norm")
            family, rep = constructions.gen_minkowski_tight(norm, d, jobs=jobs)
        else:
            family, rep = constructions.gen_nonpolytope_demo(int(p.get("n", 3)), int(p.get("m_gon", 12)), jobs=jobs)
    except constructions.ConstructionError as e:
        raise VerificationFailure(str(e)) from None
    report = rep.to_json()
    if args.out:
        io.save_family(args.out, family)
        if args.report:
            io.write_json(args.report, report)
        return {"family": args.out, "members": len(family), "verification": report}
    return {"family": io.family_to_json(family), "verification": report}


def cmd_gamma(args):
    rows = []
    for c in args.c:
        g = analytics.gamma(c, args.dmax)
        rows.append({"c": c, "gamma": g.value, "argmin": g.argmin, "gaussian_limit": g.gaussian_limit})
    out = {"d_max": args.dmax, "flags": ["truncated inf"], "rows": rows}
    if args.per_d and len(args.c) == 1:
        out["per_d"] = analytics.gamma(args.c[0], args.dmax).as_dict()["per_d"]
    return out


def cmd_beta(args):
    rows = []
    for c in args.c:
        g = analytics.gamma(c, args.dmax).value
        b = analytics.beta_from_gamma(args.alpha, g, args.d, args.colorful)
        rows.append({"alpha": args.alpha, "c": c, "d": args.d, "gamma": g, "beta": b,
                     "colorful": args.colorful, "vacuous": analytics.is_vacuous(b)})
    return {"d_max": args.dmax, "flags": ["truncated inf"], "rows": rows}


def cmd_certify(args):
    family = io.load_family(args.family)
    norm = io.resolve_norm(args.norm, family.dim)
    if norm is None:
        raise UsageError("certify needs a polytope norm")
    try:
        cert = engine.certify_diameter(family, norm, args.steps, jobs=_jobs(args))
    except engine.HypothesisFailure as e:
        raise VerificationFailure(str(e), {"refused": True, "subset": list(e.subset or ())}) from None
    out = cert.to_json()
    out["rows"] = out.pop("steps")
    return out


COMMANDS = {
    "check": (cmd_check, None),
    "diameter": (cmd_diameter, None),
    "lattice": (cmd_lattice, None),
    "lift": (cmd_lift, None),
    "generate": (cmd_generate, None),
    "gamma": (cmd_gamma, "rows"),
    "beta": (cmd_beta, "rows"),
    "certify": (cmd_certify, "rows"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: $HELLY_JOBS or 1)")

    p = _Parser(prog="hellytools", description="Exact Helly-type checks for convex families.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="evaluate a predicate on every m-subfamily")
    s.add_argument("--family")
    s.add_argument("--subset-size", type=int)
    s.add_argument("--predicate", required=True)
    s.add_argument("--colorful", nargs="+", metavar="FAMILY")
    s.add_argument("--cap", type=int, default=engine.DEFAULT_CAP)
    s.add_argument("--samples", type=int, default=engine.DEFAULT_SAMPLES)

    s = sub.add_parser("diameter", parents=[common], help="exact diameter of the full intersection")
    s.add_argument("--family", required=True)
    s.add_argument("--norm", default="linf")

    s = sub.add_parser("lattice", parents=[common], help="k colinear integer points in the intersection")
    s.add_argument("--family", required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("lift", parents=[common], help="lift every member of a family")
    s.add_argument("--family", required=True)
    s.add_argument("--kind", choices=(liftings.WIDTH, liftings.DISCRETE, liftings.BOUNDARY, liftings.PRODUCT),
                   required=True)
    s.add_argument("--v", help="comma separated rationals")
    s.add_argument("--k", type=int)
    s.add_argument("--norm", default="linf")
    s.add_argument("--facet", type=int)
    s.add_argument("--target", default="1")
    s.add_argument("--out")

    s = sub.add_parser("generate", parents=[common], help="build and verify an extremal family")
    s.add_argument("--construction", choices=("minkowski-tight", "discrete-tight", "nonpolytope-demo"),
                   required=True)
    s.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    s.add_argument("--out", help="family file to write")
    s.add_argument("--report", help="verification JSON to write (with --out)")

    s = sub.add_parser("gamma", parents=[common], help="two-cap volume constant")
    s.add_argument("--c", type=float, nargs="+", required=True)
    s.add_argument("--dmax", type=int, default=200)
    s.add_argument("--per-d", action="store_true")

    s = sub.add_parser("beta", parents=[common], help="fractional diameter constant")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--c", type=float, nargs="+", required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--dmax", type=int, default=200)
    s.add_argument("--colorful", action="store_true")

    s = sub.add_parser("certify", parents=[common], help="iterated lower bounds on the norm-diameter")
    s.add_argument("--family", required=True)
    s.add_argument("--norm", default="linf")
    s.add_argument("--steps", type=int, default=20)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)
    if args.jobs is not None:
        os.environ["HELLY_JOBS"] = str(args.jobs)
    fn, rows_key = COMMANDS[args.command]
    try:
        out = fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (io.FormatError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as e:
        print(f"verification failed: {e}", file=sys.stderr)
        if e.payload is not None:
            sys.stdout.write(render(e.payload, args.format))
        return EXIT_FAIL
    sys.stdout.write(render(out, args.format, rows_key))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
