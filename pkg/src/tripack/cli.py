"""Command-line driver: ``tripack solve|bench|check-lemmas|verify-cert|oracle``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad usage or
unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import lpcert
from .alg3 import BACKENDS, StarBackendError
from .analysis import RATIO, check_lemma_suite
from .core import (InstanceError, InvalidSolution, format_rational, load_instance,
                   validate_packing)
from .generate import KINDS, GeneratorSpec, generate
from .matching import WeightedGraph, max_weight_matching_exact_size
from .oracle import OracleLimitExceeded, OracleLimits, opt_3pp
from .solve import ALGORITHMS, solve

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_COLUMNS = ("instance_id", "seed", "n", "w_p1", "w_p2", "w_p3", "w_best", "opt",
               "ratio_num", "ratio_den", "lemma_failures", "millis")


class UsageError(Exception):
    pass


def _q(x):
    return "" if x is None else str(format_rational(x))


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows, columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _record(instance_id, seed, n, weights, best, opt=None, lemma_failures=None, millis=0) -> dict:
    ratio = None
    if opt is not None and opt > 0:
        ratio = Fraction(best) / opt
    return {
        "instance_id": instance_id, "seed": "" if seed is None else seed, "n": n,
        "w_p1": _q(weights.get("1")), "w_p2": _q(weights.get("2")), "w_p3": _q(weights.get("3")),
        "w_best": _q(best), "opt": _q(opt),
        "ratio_num": "" if ratio is None else ratio.numerator,
        "ratio_den": "" if ratio is None else ratio.denominator,
        "lemma_failures": "" if lemma_failures is None else lemma_failures,
        "millis": millis,
    }


# ---- solve -----------------------------------------------------------------------

def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    t0 = time.perf_counter()
    res = solve(inst, args.alg, args.star_backend)
    millis = round((time.perf_counter() - t0) * 1000) if args.timing else 0
    if args.format == "csv":
        _write(args, _csv_text([_record(args.input, None, inst.n, res.weights, res.weight,
                                        millis=millis)]))
    else:
        _write(args, _json_text({
            "algorithm": res.algorithm,
            "weight": format_rational(res.weight),
            "weights": {k: format_rational(v) for k, v in res.weights.items()},
            "paths": [list(p) for p in res.packing.paths],
            "labels": res.packing.labels(inst.n),
        }))
    return EXIT_OK


# ---- bench -------------------------------------------------------------------------

def _bench_one(job):
    spec, index, with_oracle, with_lemmas, star_backend, limits, timing = job
    inst = generate(spec, index)
    t0 = time.perf_counter()
    res = solve(inst, "best", star_backend)
    opt, failures = None, None
    if with_lemmas:
        rep = check_lemma_suite(inst, index, star_backend, limits)
        opt, failures = rep.opt, rep.failures
    elif with_oracle:
        opt = opt_3pp(inst, limits)[1]
    millis = round((time.perf_counter() - t0) * 1000) if timing else 0
    return _record(index, spec.seed + index, inst.n, res.weights, res.weight, opt, failures, millis)


def cmd_bench(args) -> int:
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    limits = OracleLimits.from_env()
    spec = GeneratorSpec(args.kind, args.n, args.weight_bound, args.seed, args.input)
    if spec.kind == "fig1":
        n = 6
    elif spec.kind == "file":
        n = load_instance(spec.path).n
    else:
        n = spec.n
    if (args.with_oracle or args.with_lemmas) and n > limits.max_n_packing:
        raise UsageError(f"n = {n} exceeds the oracle limit {limits.max_n_packing}")
    jobs = [(spec, i, args.with_oracle, args.with_lemmas, args.star_backend, limits, args.timing)
            for i in range(args.count)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs, chunksize=max(1, len(jobs) // (4 * args.jobs))))
    else:
        rows = [_bench_one(j) for j in jobs]
    rows.sort(key=lambda r: r["instance_id"])

    ratios = [Fraction(r["ratio_num"], r["ratio_den"]) for r in rows if r["ratio_num"] != ""]
    lemma_fail = sum(r["lemma_failures"] or 0 for r in rows)
    below = sum(q < RATIO for q in ratios)
    summary = {
        "count": len(rows),
        "min_ratio": str(min(ratios)) if ratios else None,
        "mean_ratio": str(sum(ratios, Fraction(0)) / len(ratios)) if ratios else None,
        "below_10_17": below,
        "lemma_failures": lemma_fail,
    }
    if args.format == "json":
        _write(args, _json_text({"rows": rows, "summary": summary}))
    else:
        _write(args, _csv_text(rows))
        print(" ".join(f"{k}={v}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_FAIL if below or lemma_fail else EXIT_OK


# ---- check-lemmas -------------------------------------------------------------------

def cmd_check_lemmas(args) -> int:
    inst = load_instance(args.input)
    limits = OracleLimits.from_env()
    if inst.n > limits.max_n_packing:
        raise UsageError(f"n = {inst.n} exceeds the oracle limit {limits.max_n_packing}")
    rep = check_lemma_suite(inst, args.input, args.star_backend, limits)
    if args.format == "json":
        _write(args, _json_text(rep.to_json()))
    elif args.format == "csv":
        rows = []
        for c in rep.checks:
            h = c.headline()
            rows.append({"check": c.name, "lhs": "" if h is None else str(h.lhs),
                         "rhs": "" if h is None else str(h.rhs),
                         "status": "skip" if c.skipped else ("pass" if c.ok else "FAIL")})
        _write(args, _csv_text(rows, ("check", "lhs", "rhs", "status")))
    else:
        lines = []
        for c in rep.checks:
            h = c.headline()
            status = "skip" if c.skipped else ("pass" if c.ok else "FAIL")
            detail = "" if h is None else f"  {h.name}: {h.lhs} {'==' if h.equal else '>='} {h.rhs}"
            lines.append(f"{status:4}  {c.name}{detail}")
        for v in rep.lp_violations:
            lines.append(f"FAIL  lp_point {v}")
        lines.append(f"OPT = {rep.opt}; failures = {rep.failures}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---- verify-cert -----------------------------------------------------------------------

def cmd_verify_cert(args) -> int:
    if args.emit_lp:
        _write(args, lpcert.emit_lp())
        return EXIT_OK
    if args.lambda_file:
        with open(args.lambda_file, encoding="utf-8") as fh:
            try:
                cert = lpcert.DualCertificate.from_json(fh.read())
            except (ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"bad certificate file: {exc}") from exc
    else:
        cert = lpcert.DualCertificate.default()
    t0 = time.perf_counter()
    mismatches = lpcert.transcription_mismatches()
    dual = lpcert.verify_dual(cert)
    point = lpcert.verify_worst_case_point()
    ok = not mismatches and dual.certifies_target and point.feasible and point.tight
    elapsed = time.perf_counter() - t0

    if args.format == "json":
        _write(args, _json_text({
            "dual_rows": [{"variable": v, "lhs": str(l), "bound": str(b), "pass": s}
                          for v, l, b, s in dual.rows],
            "dual_feasible": dual.feasible, "objective": str(dual.objective),
            "violated": dual.violated, "transcription_mismatches": mismatches,
            "point_feasible": point.feasible,
            "c1": str(point.c1), "c2": str(point.c2), "c3": str(point.c3),
            "pass": ok,
        }))
    elif args.format == "csv":
        rows = [{"variable": v, "lhs": str(l), "bound": str(b), "status": "pass" if s else "FAIL"}
                for v, l, b, s in dual.rows]
        _write(args, _csv_text(rows, ("variable", "lhs", "bound", "status")))
    else:
        lines = [f"{'row':8} {'lhs':>10}    bound  status"]
        for v, l, b, s in dual.rows:
            lines.append(f"{v:8} {str(l):>10} <= {str(b):>5}  {'pass' if s else 'FAIL'}")
        for msg in dual.violated:
            if msg.startswith("lambda"):
                lines.append(f"violated: {msg}")
        for msg in mismatches:
            lines.append(f"transcription: {msg}")
        lines.append(f"dual constraints: {len(dual.rows)}, feasible: {dual.feasible}")
        lines.append(f"objective: {dual.objective}")
        lines.append(f"worst-case point feasible: {point.feasible}; "
                     f"c1 = {point.c1}, c2 = {point.c2}, c3 = {point.c3}")
        lines.append(f"{'PASS' if ok else 'FAIL'} ({elapsed * 1000:.1f} ms)")
        _write(args, "\n".join(lines) + "\n")
    if not ok and dual.violated:
        print("violated: " + "; ".join(dual.violated), file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# ---- oracle -------------------------------------------------------------------------

def cmd_oracle(args) -> int:
    inst = load_instance(args.input)
    limits = OracleLimits.from_env()
    if args.matching_size is not None:
        res = max_weight_matching_exact_size(WeightedGraph.complete(inst.weights), args.matching_size)
        out = {"matching_size": args.matching_size, "weight": format_rational(res.total_cost),
               "edges": sorted(list(e) for e in res.matching.edges)}
    else:
        packing, opt = opt_3pp(inst, limits)
        if validate_packing(inst, packing):
            raise InvalidSolution("oracle returned an invalid packing")
        out = {"opt": format_rational(opt), "paths": [list(p) for p in packing.paths]}
    if args.format == "csv":
        _write(args, _csv_text([{k: json.dumps(v) if isinstance(v, list) else v
                                 for k, v in out.items()}], tuple(out)))
    else:
        _write(args, _json_text(out))
    return EXIT_OK


# ---- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="report format")

    p = argparse.ArgumentParser(prog="tripack", description="Maximum-weight perfect 3-path packing.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="run one algorithm or the best of three")
    s.add_argument("--input", required=True)
    s.add_argument("--alg", choices=ALGORITHMS, default="best")
    s.add_argument("--star-backend", choices=BACKENDS, default="auto")
    s.add_argument("--timing", action="store_true", help="fill the millis column")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", parents=[common], help="batch run on generated instances")
    b.add_argument("--kind", choices=KINDS, default="uniform-int")
    b.add_argument("--n", type=int, default=6)
    b.add_argument("--count", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--weight-bound", type=int, default=100)
    b.add_argument("--input", help="instance file for --kind file")
    b.add_argument("--with-oracle", action="store_true")
    b.add_argument("--with-lemmas", action="store_true")
    b.add_argument("--star-backend", choices=BACKENDS, default="auto")
    b.add_argument("--jobs", type=int, default=1, help="worker processes")
    b.add_argument("--timing", action="store_true",
                   help="fill the millis column (the CSV is then no longer reproducible)")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("check-lemmas", parents=[common], help="evaluate the analysis inequalities")
    c.add_argument("--input", required=True)
    c.add_argument("--star-backend", choices=BACKENDS, default="auto")
    c.set_defaults(func=cmd_check_lemmas)

    v = sub.add_parser("verify-cert", parents=[common], help="check the LP dual certificate")
    v.add_argument("--lambda-file", help="JSON list of 55 values, or {\"scale\": k, \"lambdas\": [...]}")
    v.add_argument("--emit-lp", action="store_true", help="print the primal LP and exit")
    v.set_defaults(func=cmd_verify_cert)

    o = sub.add_parser("oracle", parents=[common], help="brute-force optimum")
    o.add_argument("--input", required=True)
    o.add_argument("--matching-size", type=int, help="report a maximum-weight matching of this size instead")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InstanceError, OracleLimitExceeded, StarBackendError, OSError) as exc:
        print(f"tripack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidSolution as exc:
        print(f"tripack: invalid solution: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"tripack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
