"""Command-line front end.

Exit status: 0 confirmed, 1 mathematical failure (not a PP/CPP, fixture
mismatch, census discrepancy), 2 usage error, 3 violated hypothesis.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

from .criteria import (
    Bbd3Params,
    ZieveInput,
    bbd3_hypothesis,
    general_cpp_check,
    scalar_cpp_check,
    zieve_check,
)
from .errors import FieldError, HypothesisViolation, ZeroCValue
from .ff_core import make_mu3, parse_field
from .oracle import check_pp_cpp
from .polyshape import (
    Bbd3Variant,
    CycloTrinomial,
    build_delta_family,
    build_gamma_family,
    dense_coefficients,
    format_dense,
)
from .reproduce import run_fixtures
from .search import (
    Certificate,
    census,
    census_csv,
    certify_general,
    certify_scalar,
    counterexample_scan,
    reverify,
    scan_metadata,
    scan_range,
    scan_scalar_families,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_HYPOTHESIS = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _add_shape_args(p):
    p.add_argument("--field", help='"p" or "p^n"')
    p.add_argument("--r", type=int, help="exponent r >= 1")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--delta", help="cube root of unity for the delta family")
    g.add_argument("--gamma", help="constant term for the gamma family")
    g.add_argument("--c", nargs=3, metavar=("C1", "COMEGA", "COMEGA2"),
                   help="values of c on (1, omega, omega^2)")
    p.add_argument("--omega", help="primitive cube root fixing the mu3 order "
                                   "(defaults to delta, else the smallest root)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fibercpp",
        description="Permutation and complete-permutation checks for X^r c(X^((q-1)/3)).",
    )
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="criterion reports plus the exhaustive verdict")
    _add_shape_args(p)
    p.add_argument("--pp-only", action="store_true", help="succeed when f alone permutes")
    p.add_argument("--certificate", help="JSON-Lines file of certificates to re-verify")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("certify", help="emit a certificate for one trinomial")
    _add_shape_args(p)
    p.add_argument("--criterion", choices=("auto", "scalar", "general"), default="auto")
    p.add_argument("--out")

    p = sub.add_parser("search", help="stream certificates (or failure records)")
    p.add_argument("--field")
    p.add_argument("--q-min", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--failures", action="store_true",
                   help="scan q = 1 mod 3, q != 1 mod 9 for failures of f + X")
    p.add_argument("--prime-powers", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("census", help="per-q summary table")
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--prime-powers", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("reproduce-paper", help="recompute the pinned worked examples")
    p.add_argument("--only", action="append", help="fixture name (109, 163, 199, 7, 31, 13, 25, 343)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--inject-mismatch", help=argparse.SUPPRESS)
    p.add_argument("--out")
    return ap


@contextlib.contextmanager
def _sink(path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh
    else:
        yield sys.stdout


def _trinomial(args) -> tuple[CycloTrinomial, int | None, int | None]:
    if not args.field or args.r is None:
        raise UsageError("--field and --r are required")
    if args.delta is None and args.gamma is None and args.c is None:
        raise UsageError("one of --delta, --gamma, --c is required")
    if args.r < 1:
        raise UsageError("--r must be positive")
    F = parse_field(args.field)
    delta = gamma = None
    omega = F.parse(args.omega) if args.omega else None
    if args.delta is not None:
        delta = F.parse(args.delta)
        if omega is None and delta != 1:
            omega = delta
    ctx = make_mu3(F, omega)
    if delta is not None:
        return build_delta_family(ctx, delta, args.r), delta, None
    if args.gamma is not None:
        gamma = F.parse(args.gamma)
        return build_gamma_family(ctx, gamma, args.r), None, gamma
    return CycloTrinomial(ctx, args.r, tuple(F.parse(c) for c in args.c)), None, None


def _scalar_applicable(t: CycloTrinomial) -> bool:
    F, s = t.field, t.ctx.s
    return (F.q % 9 == 1 and (t.r - 1) % s == 0
            and all(F.pow(c, s) == 1 for c in t.c_table))


def verify_report(t, delta=None, gamma=None) -> dict:
    F = t.field
    report = {"trinomial": t.to_json(),
              "f_dense": format_dense(F, dense_coefficients(t)),
              "F_dense": format_dense(F, dense_coefficients(t, plus_x=True))}
    z = zieve_check(ZieveInput.from_trinomial(t))
    report["zieve"] = {"is_pp": z.is_pp, "gcd_ok": z.coprime,
                       "mu3_image": [F.format(u) for u in z.mu_d_image]}
    if delta is not None or gamma is not None:
        params = (Bbd3Params(Bbd3Variant.DELTA, t.r, delta=delta) if delta is not None
                  else Bbd3Params(Bbd3Variant.GAMMA, t.r, gamma=gamma))
        h = bbd3_hypothesis(t.ctx, params)
        report["bbd3"] = {"holds": h.holds, "witness": F.format(h.witness),
                          "gcd_r_q_minus_1": h.r_coprime}
    if 0 not in t.c_table:
        g = general_cpp_check(t)
        report["general"] = {**g.to_json(F), "failed": g.failed, "diagnostics": g.diagnostics}
    if _scalar_applicable(t):
        report["scalar"] = scalar_cpp_check(t).to_json(F)
    report["oracle"] = check_pp_cpp(t).to_json(F)
    return report


def _print_text(report, out):
    t = report["trinomial"]
    print(f"F_{t['q']}  r={t['r']}  c={t['c']}  (omega={t['omega']})", file=out)
    print(f"f = {report['f_dense']}", file=out)
    print(f"f + X = {report['F_dense']}", file=out)
    for key in ("zieve", "bbd3", "general", "scalar"):
        if key in report:
            print(f"{key}: {json.dumps(report[key])}", file=out)
    o = report["oracle"]
    print(f"oracle: f PP={o['f_is_pp']}  f+X PP={o['F_is_pp']}  CPP={o['is_cpp']}", file=out)
    for name in ("f", "F"):
        if "collision" in o[name]:
            c = o[name]
            print(f"  {name}: {c['collision'][0]} and {c['collision'][1]} -> {c['image']}"
                  f" (preimages {c['preimages']})", file=out)


def cmd_verify(args) -> int:
    if args.certificate:
        return _verify_certificates(args)
    t, delta, gamma = _trinomial(args)
    report = verify_report(t, delta, gamma)
    with _sink(args.out) as out:
        if args.format == "json":
            print(json.dumps(report), file=out)
        else:
            _print_text(report, out)
    o = report["oracle"]
    ok = o["f_is_pp"] if args.pp_only else o["is_cpp"]
    return EXIT_OK if ok else EXIT_FAIL


def _verify_certificates(args) -> int:
    status = EXIT_OK
    with open(args.certificate, encoding="utf-8") as fh, _sink(args.out) as out:
        for line in fh:
            if not line.strip():
                continue
            cert = Certificate.from_json(json.loads(line))
            t = cert.trinomial()
            cpp = check_pp_cpp(t).is_cpp
            try:
                same = reverify(cert)
            except HypothesisViolation:
                same = False
            print(json.dumps({"field": str(cert.spec), "r": cert.r, "is_cpp": cpp,
                              "matches_certificate": same}), file=out)
            if not (cpp and same):
                status = EXIT_FAIL
    return status


def cmd_certify(args) -> int:
    t, delta, _ = _trinomial(args)
    mode = args.criterion
    if mode == "auto":
        mode = "scalar" if _scalar_applicable(t) else "general"
    if mode == "general" and 0 in t.c_table:
        raise ZeroCValue("c must be nonzero on mu3")
    cert = (certify_scalar if mode == "scalar" else certify_general)(t, delta)
    if cert is None:
        print(f"{mode} criterion not satisfied", file=sys.stderr)
        return EXIT_FAIL
    with _sink(args.out) as out:
        print(json.dumps(cert.to_json()), file=out)
    return EXIT_OK if cert.oracle_confirmed else EXIT_FAIL


def cmd_search(args) -> int:
    if args.failures:
        if args.q_min is None or args.q_max is None:
            raise UsageError("--failures needs --q-min and --q-max")
        records = counterexample_scan(args.q_min, args.q_max, workers=args.workers)
        with _sink(args.out) as out:
            meta = {"meta": scan_metadata()}
            print(json.dumps(meta), file=out)
            for rec in records:
                print(json.dumps(rec.to_json()), file=out)
        return EXIT_OK
    if args.field:
        certs = scan_scalar_families(parse_field(args.field), args.k_max)
    elif args.q_min is not None and args.q_max is not None:
        certs = scan_range(args.q_min, args.q_max, args.k_max,
                           prime_powers=args.prime_powers, workers=args.workers)
    else:
        raise UsageError("give --field or both --q-min and --q-max")
    with _sink(args.out) as out:
        for cert in certs:
            print(json.dumps(cert.to_json()), file=out)
    return EXIT_OK if all(c.oracle_confirmed for c in certs) else EXIT_FAIL


def cmd_census(args) -> int:
    if args.q_max > 10_000:
        raise UsageError("--q-max is limited to 10000")
    rows = census(args.q_max, args.k_max, prime_powers=args.prime_powers, workers=args.workers)
    with _sink(args.out) as out:
        if args.format == "csv":
            out.write(census_csv(rows))
        elif args.format == "json":
            for row in rows:
                print(json.dumps(row.as_dict()), file=out)
        else:
            for row in rows:
                d = row.as_dict()
                print("  ".join(f"{k}={v}" for k, v in d.items()), file=out)
    return EXIT_FAIL if any(r.discrepancies for r in rows) else EXIT_OK


def cmd_reproduce_paper(args) -> int:
    try:
        checks = run_fixtures(args.only, corrupt=args.inject_mismatch, seed=args.seed)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    with _sink(args.out) as out:
        for c in checks:
            if args.format == "json":
                print(json.dumps({"fixture": c.fixture, "check": c.label, "ok": c.ok,
                                  "expected": repr(c.expected), "computed": repr(c.computed)}),
                      file=out)
            else:
                mark = "ok  " if c.ok else "FAIL"
                print(f"{mark} [{c.fixture}] {c.label}: expected {c.expected!r}, "
                      f"computed {c.computed!r}", file=out)
        bad = [c for c in checks if not c.ok]
        if args.format == "text":
            print(f"{len(checks) - len(bad)}/{len(checks)} checks match", file=out)
    return EXIT_FAIL if bad else EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "certify": cmd_certify,
    "search": cmd_search,
    "census": cmd_census,
    "reproduce-paper": cmd_reproduce_paper,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except HypothesisViolation as exc:
        print(f"hypothesis violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
