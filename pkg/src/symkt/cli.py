"""Command-line front end: identity suites, field verification, geodesics.

Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error.
Reports go to stdout as text, or to a file as canonical JSON via --json.
All configuration is by flags; no environment variables.
"""

import argparse
import sys

import numpy as np

from . import io as tio
from .classify import classify
from .constructors import build_constructor, constructor_catalog, stable_stream
from .errors import ConfigError, DomainError, SymktError
from .fields import constant_field
from .geodesic import geodesic_drift
from .manifolds import EmbeddedSphere, manifold_from_key
from .suites import geometry_suite, identity_suite

__all__ = ["main", "run_identities", "run_verify", "run_geodesic"]


def _write_report(doc, args):
    text = tio.dumps_report(doc)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    return text


def _print_suite(report, args):
    doc = report.to_dict()
    _write_report(doc, args)
    if not args.json:
        for case in report.cases:
            mark = "pass" if case.passed else "FAIL"
            print(f"[{mark}] {case.name}: {case.max_residual:.3e} "
                  f"({'<=' if case.kind == 'residual' else '>='} {case.tol:.1e})")
    print(f"suite={report.suite} seed={report.seed} "
          f"cases={len(report.cases)} pass={report.passed}")
    return 0 if report.passed else 1


def run_identities(args):
    report = identity_suite(dims=args.dims, degrees=args.degrees,
                            trials=args.trials, seed=args.seed)
    return _print_suite(report, args)


def _parse_params(args):
    raw = getattr(args, "params", None)
    if not raw:
        return None
    import json

    try:
        if raw.startswith("@"):
            with open(raw[1:]) as fh:
                doc = json.load(fh)
        else:
            doc = json.loads(raw)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"bad --params blob: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("--params must decode to a JSON object")
    return doc


def _load_field(args):
    base = manifold_from_key(args.manifold)
    if args.field_file:
        K = tio.load_tensor(args.field_file)
        if K.dim != base.dim:
            raise ConfigError(
                f"field file dimension {K.dim} != manifold dimension {base.dim}"
            )
        return constant_field(base, K, name=f"file:{args.field_file}"), None
    if not args.construct:
        raise ConfigError("need --construct KEY or --field-file PATH")
    catalog = constructor_catalog()
    if args.construct not in catalog:
        raise ConfigError(f"unknown constructor key {args.construct!r}")
    entry = catalog[args.construct]
    if entry.manifold_key != args.manifold:
        raise ConfigError(
            f"constructor {args.construct!r} lives on {entry.manifold_key!r}, "
            f"not {args.manifold!r}"
        )
    field, entry = build_constructor(args.construct, base=base, seed=args.seed,
                                     params=_parse_params(args))
    return field, entry


def run_verify(args):
    field, entry = _load_field(args)
    report = classify(field, samples=args.samples, tol=args.tol, seed=args.seed)
    if args.dump_samples:
        with open(args.dump_samples, "w") as fh:
            for rec in report.sample_records():
                fh.write(tio.dumps_report(rec))
    doc = report.to_dict()
    if entry is not None:
        doc["expected"] = dict(sorted(entry.expected.items()))
        mismatches = {
            k: report.verdicts[k]
            for k, v in entry.expected.items()
            if report.verdicts.get(k) != v
        }
        doc["matches_expected"] = not mismatches
        if entry.negative_check:
            observed = report.max_residuals[entry.negative_check]
            doc["negative_control"] = {
                "check": entry.negative_check,
                "min_residual": entry.min_residual,
                "observed": observed,
                "pass": observed >= entry.min_residual,
            }
    _write_report(doc, args)
    if not args.json:
        for k in sorted(report.verdicts):
            print(f"{k}: {'yes' if report.verdicts[k] else 'no'}")
        for k in sorted(report.max_residuals):
            v = report.max_residuals[k]
            if v is not None:
                print(f"residual {k}: {v:.3e}")
    ok = True
    if entry is not None:
        ok = doc.get("matches_expected", True)
        if entry.negative_check:
            ok = ok and doc["negative_control"]["pass"]
    print(f"field={field.name} manifold={field.base.key} pass={ok}")
    return 0 if ok else 1


def run_geodesic(args):
    field, entry = _load_field(args)
    base = field.base
    rng = stable_stream(args.seed, "cli-geodesic")
    rows = []
    ok = True
    for t in range(args.trajectories):
        x0 = base.sample_point(rng)
        v0 = rng.standard_normal(base.coord_dim)
        if isinstance(base, EmbeddedSphere):
            v0 = base.tangent_projection(x0, v0)
        v0 = v0 / np.linalg.norm(v0)
        if base.key.startswith("euclidean"):
            x0 = 0.2 * x0
            v0 = 0.05 * v0
        try:
            drift = geodesic_drift(field, x0, v0, args.steps, args.dt)
            rows.append({"trajectory": t, "drift": drift, "status": "ok"})
        except DomainError:
            rows.append({"trajectory": t, "drift": None, "status": "left-domain"})
            continue
        if args.max_drift is not None and drift > args.max_drift:
            ok = False
    doc = {
        "suite": "geodesic",
        "seed": args.seed,
        "field": field.name,
        "manifold": base.key,
        "steps": args.steps,
        "dt": args.dt,
        "trajectories": rows,
        "pass": ok,
    }
    _write_report(doc, args)
    if not args.json:
        for row in rows:
            d = row["drift"]
            print(f"trajectory {row['trajectory']}: "
                  f"{'drift %.3e' % d if d is not None else row['status']}")
    print(f"geodesic field={field.name} pass={ok}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="symkt",
        description="Symmetric tensor calculus and Killing tensor verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_id = sub.add_parser("identities", help="run the algebraic identity suite")
    p_id.add_argument("--dims", default="2..5", help="dimension range LO..HI")
    p_id.add_argument("--degrees", default="0..4", help="degree range LO..HI")
    p_id.add_argument("--trials", type=int, default=50)
    p_id.add_argument("--seed", type=int, default=42)
    p_id.add_argument("--json", metavar="PATH", default=None)
    p_id.set_defaults(func=run_identities)

    p_ver = sub.add_parser("verify", help="classify a constructed field")
    p_ver.add_argument("--manifold", required=True)
    p_ver.add_argument("--construct", default=None)
    p_ver.add_argument("--field-file", dest="field_file", default=None)
    p_ver.add_argument("--params", default=None,
                       help="constructor parameter blob: JSON object or @file")
    p_ver.add_argument("--samples", type=int, default=100)
    p_ver.add_argument("--tol", type=float, default=1e-9)
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--json", metavar="PATH", default=None)
    p_ver.add_argument("--dump-samples", dest="dump_samples", metavar="PATH",
                       default=None,
                       help="write one {point, residuals} record per line")
    p_ver.set_defaults(func=run_verify)

    p_geo = sub.add_parser("geodesic", help="first-integral drift along geodesics")
    p_geo.add_argument("--manifold", required=True)
    p_geo.add_argument("--construct", default=None)
    p_geo.add_argument("--field-file", dest="field_file", default=None)
    p_geo.add_argument("--steps", type=int, default=10000)
    p_geo.add_argument("--dt", type=float, default=1e-3)
    p_geo.add_argument("--trajectories", type=int, default=5)
    p_geo.add_argument("--max-drift", dest="max_drift", type=float, default=None)
    p_geo.add_argument("--seed", type=int, default=42)
    p_geo.add_argument("--json", metavar="PATH", default=None)
    p_geo.set_defaults(func=run_geodesic)

    p_suite = sub.add_parser("geometry", help="run the geometric suite")
    p_suite.add_argument("--samples", type=int, default=60)
    p_suite.add_argument("--tol", type=float, default=1e-9)
    p_suite.add_argument("--seed", type=int, default=42)
    p_suite.add_argument("--drift-steps", dest="drift_steps", type=int,
                         default=10000)
    p_suite.add_argument("--drift-dt", dest="drift_dt", type=float, default=1e-3)
    p_suite.add_argument("--json", metavar="PATH", default=None)
    p_suite.set_defaults(func=lambda a: _print_suite(
        geometry_suite(samples=a.samples, tol=a.tol, seed=a.seed,
                       drift_steps=a.drift_steps, drift_dt=a.drift_dt), a))

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SymktError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
