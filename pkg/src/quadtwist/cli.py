"""
Command-line front end.

Every command accepts ``--config FILE``: a flat ``key = value`` text file
whose keys are the long flag names (``sigma``, ``X``, ``cache-dir``, ...) or
their dotted aliases (``test.sigma``, ``run.X``, ``cache.dir``, ...).
Explicit flags override the file.  Lines starting with ``#`` are ignored.

Exit codes: 0 success, 2 usage, 3 range or cache problem, 4 accuracy
contract violated.
"""

import argparse
import json
import logging
import math
import os
import sys



from . import arith, coeffs, density as dens, poisson, testfn
from .errors import AccuracyError, CacheError, EmptyFamilyError, RangeError

log = logging.getLogger("quadtwist")

CACHE_ENV = "QUADTWIST_CACHE_DIR"
EXIT_OK, EXIT_USAGE, EXIT_RANGE, EXIT_ACCURACY = 0, 2, 3, 4
POISSON_TOL = 1e-6
GAUSS_TOL = 1e-9

ALIASES = {
    "family.kind": "family",
    "test.kind": "test-kind",
    "test.sigma": "sigma",
    "weight.a": "weight-a",
    "weight.b": "weight-b",
    "run.X": "X",
    "run.mode": "mode",
    "run.Z": "Z",
    "poisson.c": "c",
    "poisson.height": "height",
    "poisson.step": "step",
    "cache.dir": "cache-dir",
}


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(float(v)) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# --- parser ------------------------------------------------------------------

def _common(p):
    g = p.add_argument_group("common")
    g.add_argument("--config", help="flat key = value file; flags override it")
    g.add_argument("--format", choices=("text", "csv", "json"), default="text")
    g.add_argument("--out", help="write the result here instead of stdout")
    g.add_argument("--cache-dir", help=f"cache directory (default: ${CACHE_ENV})")
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("-v", "--verbose", action="store_true")


def _family_args(p, sigma_list=False):
    p.add_argument("--family", choices=("gl1", "delta", "sym2delta"), default="gl1")
    p.add_argument("--test-kind", choices=tuple(testfn.PAIRS), default="fejer")
    if sigma_list:
        p.add_argument("--sigma", type=_float_list, default=[0.5, 0.8, 1.0])
    else:
        p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--weight-a", type=float, default=1.0)
    p.add_argument("--weight-b", type=float, default=2.0)
    p.add_argument("--X", type=_float_list, default=[1e4])
    p.add_argument("--Z", type=float, default=None, help="default log^3 X")


def _contour_args(p):
    p.add_argument("--c", type=float, default=1.25)
    p.add_argument("--height", type=float, default=1000.0)
    p.add_argument("--step", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadtwist",
                                     description="One-level density of quadratic twist families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="sieve primes and optionally cache them")
    p.add_argument("--limit", type=lambda s: int(float(s)), default=10 ** 6)

    p = sub.add_parser("tau", help="build (or load) the Ramanujan tau table")
    p.add_argument("--N", type=lambda s: int(float(s)), default=10 ** 5)
    p.add_argument("--show", type=int, default=10, help="print tau(1..show)")

    p = sub.add_parser("density", help="empirical one-level density per X")
    _family_args(p)
    p.add_argument("--mode", choices=dens.MODES, default="simplified")

    p = sub.add_parser("density-sweep", help="density over X x sigma x mode")
    _family_args(p, sigma_list=True)
    p.add_argument("--mode", type=lambda s: s.split(","), default=list(dens.MODES))

    p = sub.add_parser("poisson-check", help="Poisson summation identity for prime q")
    p.add_argument("--q", type=_int_list, default=[3, 5, 7, 11, 13])
    p.add_argument("--X", type=_float_list, default=[5.0, 50.0])
    p.add_argument("--weight-a", type=float, default=1.0)
    p.add_argument("--weight-b", type=float, default=2.0)
    _contour_args(p)

    p = sub.add_parser("gauss-check", help="quadratic Gauss sums against i^a sqrt(q)")
    p.add_argument("--qmax", type=int, default=200)

    p = sub.add_parser("delta-check", help="(1/x) sum a(p^2) log p, which tends to -delta")
    p.add_argument("--family", choices=("gl1", "delta", "sym2delta"), default="gl1")
    p.add_argument("--x", type=_float_list, default=[1e4, 1e5, 1e6])

    p = sub.add_parser("kernel", help="symplectic prediction for a test function")
    p.add_argument("--test-kind", choices=tuple(testfn.PAIRS), default="fejer")
    p.add_argument("--sigma", type=_float_list, default=[1.0])

    p = sub.add_parser("split-check", help="S = S_M + S_R for several Z")
    _family_args(p)
    p.add_argument("--Zs", type=_float_list, default=None,
                   help="default 1, 10, log^3 X, sqrt(b X)")

    for p in sub.choices.values():
        _common(p)
    parser.subcommands = sub.choices
    return parser


def read_config(path):
    """Parse a flat key = value file into {flag-name: raw string}."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key = key.strip()
            out[ALIASES.get(key, key)] = value.strip()
    return out


def _apply_config(parser, argv):
    """Re-parse with config values spliced in ahead of the explicit flags."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    values = read_config(args.config)
    sub = parser.subcommands[args.command]
    flags = {a.option_strings[-1].lstrip("-"): a for a in sub._actions if a.option_strings}
    unknown = sorted(set(values) - set(flags) - {"config"})
    if unknown:
        valid = sorted(set(flags) - {"help", "config"}) + sorted(k for k, v in ALIASES.items() if v in flags)
        raise UsageError(f"unknown config key(s) {', '.join(unknown)}; valid keys: {', '.join(valid)}")
    spliced = []
    for key, value in values.items():
        if key == "config":
            continue
        action = flags[key]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                spliced.append(action.option_strings[-1])
        else:
            spliced += [action.option_strings[-1], value]
    return parser.parse_args([argv[0]] + spliced + list(argv[1:]))


# --- helpers -----------------------------------------------------------------

def _cache_dir(args):
    return args.cache_dir or os.environ.get(CACHE_ENV) or None


def _provider(kind, need_prime, args):
    if kind == "gl1":
        return coeffs.provider_gl1()
    N = max(int(math.ceil(need_prime)), 10)
    tau = coeffs.cached_tau_table(N, _cache_dir(args))
    return coeffs.provider_delta(tau) if kind == "delta" else coeffs.provider_sym2_delta(tau)


_DEGREE = {"gl1": 1, "delta": 2, "sym2delta": 3}


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_out(args, records, columns=None, text_lines=None):
    if args.format == "json":
        return json.dumps(records, indent=1) + "\n"
    if args.format == "csv" or text_lines is None:
        cols = columns or (list(records[0]) if records else [])
        rows = [",".join(cols)] + [",".join(str(r[c]) for c in cols) for r in records]
        return "\n".join(rows) + "\n"
    return "\n".join(text_lines) + "\n"


# --- commands ----------------------------------------------------------------

def cmd_sieve(args):
    tables = arith.build_tables(args.limit)
    rec = {"limit": args.limit, "prime_count": int(tables.primes.size),
           "largest_prime": int(tables.primes[-1])}
    cache = _cache_dir(args)
    if cache:
        os.makedirs(cache, exist_ok=True)
        path = os.path.join(cache, "primes.bin")
        arith.save_primes(path, tables.primes)
        rec["cache"] = path
    _emit(args, _records_out(args, [rec], text_lines=[f"{k} {v}" for k, v in rec.items()]))
    return EXIT_OK


def cmd_tau(args):
    table = coeffs.cached_tau_table(args.N, _cache_dir(args))
    show = min(args.show, table.N)
    recs = [{"n": n, "tau": table[n]} for n in range(1, show + 1)]
    if args.format == "json":
        text = json.dumps({"N": table.N, "values": [r["tau"] for r in recs]}) + "\n"
    else:
        text = _records_out(args, recs, ["n", "tau"], [f"{r['n']}\t{r['tau']}" for r in recs])
    _emit(args, text)
    return EXIT_OK


def _density_reports(args, sigmas, modes):
    w = testfn.bump_weight(args.weight_a, args.weight_b)
    M = _DEGREE[args.family]
    for s in sigmas:
        dens.check_admissible(M, s)
    need_p = max(X ** (M * s) for X in args.X for s in sigmas)
    need = max(need_p, max(args.X) * args.weight_b)
    tables = arith.build_tables(int(math.ceil(need)) + 1)
    provider = _provider(args.family, need_p, args)
    reports = []
    for X in args.X:
        for s in sigmas:
            pair = testfn.make_pair(args.test_kind, s)
            for mode in modes:
                spec = dens.FamilySpec(X, w, provider, pair, mode, args.Z)
                rep = dens.density(spec, tables, threads=args.threads)
                log.info("X=%g sigma=%g %s: D=%.6f", X, s, mode, rep.empirical_D)
                reports.append(rep)
    return reports


def _write_reports(args, reports):
    if args.format == "json":
        text = json.dumps([r.as_dict() for r in reports], indent=1) + "\n"
    else:
        text = dens.DensityReport.csv_header() + "".join(r.to_csv_row() for r in reports)
    _emit(args, text)


def cmd_density(args):
    _write_reports(args, _density_reports(args, [args.sigma], [args.mode]))
    return EXIT_OK


def cmd_density_sweep(args):
    bad = [m for m in args.mode if m not in dens.MODES]
    if bad:
        raise UsageError(f"unknown mode(s) {bad}; choose from {dens.MODES}")
    _write_reports(args, _density_reports(args, args.sigma, args.mode))
    return EXIT_OK


def cmd_poisson_check(args):
    contour = poisson.MellinContour(args.c, args.height, args.step)
    W = testfn.bump_weight(args.weight_a, args.weight_b)
    recs, lines = [], []
    worst = 0.0
    for q in args.q:
        for X in args.X:
            lhs, rhs, m = poisson.poisson_check(q, W, X, contour)
            diff = abs(lhs - rhs)
            worst = max(worst, diff)
            recs.append({"q": q, "X": X, "lhs": lhs, "rhs": rhs, "diff": diff, "mTerms": m})
            lines.append(f"{q} {X:g} {lhs:.15g} {rhs:.15g} {diff:.3e} {m}")
    ok = worst <= POISSON_TOL
    lines.append(("PASS" if ok else "FAIL") + " diff<1e-6" + ("" if ok else f" violated: {worst:.3e}"))
    if args.format == "json":
        text = json.dumps({"results": recs, "pass": ok, "max_diff": worst}, indent=1) + "\n"
    elif args.format == "csv":
        text = _records_out(args, recs, ["q", "X", "lhs", "rhs", "diff", "mTerms"])
    else:
        text = "q X lhs rhs diff mTerms\n" + "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if ok else EXIT_ACCURACY


def cmd_gauss_check(args):
    recs = []
    ok = True
    for q in range(3, args.qmax, 2):
        if not poisson.is_odd_prime(q):
            continue
        g = poisson.gauss_sum(q)
        a = poisson.QuadraticCharacter(q).parity
        err = abs(g - (1j ** a) * math.sqrt(q)) / math.sqrt(q)
        ok &= err <= GAUSS_TOL
        recs.append({"q": q, "a": a, "re": g.real, "im": g.imag, "rel_err": err})
    lines = [f"{r['q']} a={r['a']} {r['re']:+.12f}{r['im']:+.12f}i rel_err={r['rel_err']:.2e}"
             for r in recs]
    lines.append("PASS" if ok else "FAIL")
    text = (json.dumps({"results": recs, "pass": ok}, indent=1) + "\n" if args.format == "json"
            else _records_out(args, recs, ["q", "a", "re", "im", "rel_err"], lines))
    _emit(args, text)
    return EXIT_OK if ok else EXIT_ACCURACY


def cmd_delta_check(args):
    xmax = max(args.x)
    tables = arith.build_tables(int(xmax) + 1)
    provider = _provider(args.family, xmax, args)
    recs = [{"family": provider.label, "x": x,
             "value": coeffs.delta_empirical(provider, x, tables),
             "expected": -provider.delta} for x in args.x]
    lines = [f"{r['family']} x={r['x']:g} value={r['value']:.6f} expected={r['expected']:+d}"
             for r in recs]
    _emit(args, _records_out(args, recs, ["family", "x", "value", "expected"], lines))
    return EXIT_OK


def cmd_kernel(args):
    recs = []
    for s in args.sigma:
        pair = testfn.make_pair(args.test_kind, s)
        recs.append({"kind": args.test_kind, "sigma": s, "prediction": testfn.rmt_prediction(pair)})
    lines = [f"sigma={r['sigma']:g} prediction={r['prediction']:.15g}" for r in recs]
    _emit(args, _records_out(args, recs, ["kind", "sigma", "prediction"], lines))
    return EXIT_OK


def cmd_split_check(args):
    w = testfn.bump_weight(args.weight_a, args.weight_b)
    M = _DEGREE[args.family]
    dens.check_admissible(M, args.sigma)
    need_p = max(X ** (M * args.sigma) for X in args.X)
    tables = arith.build_tables(int(math.ceil(max(need_p, max(args.X) * args.weight_b))) + 1)
    provider = _provider(args.family, need_p, args)
    pair = testfn.make_pair(args.test_kind, args.sigma)
    recs = []
    for X in args.X:
        Zs = args.Zs or [1.0, 10.0, math.log(X) ** 3, math.sqrt(args.weight_b * X)]
        for Z in Zs:
            spec = dens.FamilySpec(X, w, provider, pair, "simplified", Z)
            sums = dens.family_sums(spec, tables, split=True, threads=args.threads)
            rel = abs(sums.s_M + sums.s_R - sums.S) / max(abs(sums.S), 1e-300)
            recs.append({"X": X, "Z": Z, "S": sums.S, "s_M": sums.s_M, "s_R": sums.s_R, "rel_err": rel})
    ok = all(r["rel_err"] <= 1e-9 for r in recs)
    lines = [f"X={r['X']:g} Z={r['Z']:.6g} S={r['S']:.12g} sM={r['s_M']:.12g} sR={r['s_R']:.12g} "
             f"rel_err={r['rel_err']:.2e}" for r in recs] + ["PASS" if ok else "FAIL"]
    _emit(args, _records_out(args, recs, ["X", "Z", "S", "s_M", "s_R", "rel_err"], lines))
    return EXIT_OK if ok else EXIT_ACCURACY


COMMANDS = {
    "sieve": cmd_sieve, "tau": cmd_tau, "density": cmd_density,
    "density-sweep": cmd_density_sweep, "poisson-check": cmd_poisson_check,
    "gauss-check": cmd_gauss_check, "delta-check": cmd_delta_check,
    "kernel": cmd_kernel, "split-check": cmd_split_check,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except UsageError as exc:
        print(f"quadtwist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"quadtwist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RangeError as exc:
        hint = f" (required limit: {exc.required})" if exc.required is not None else ""
        print(f"quadtwist: range error: {exc}{hint}", file=sys.stderr)
        return EXIT_RANGE
    except CacheError as exc:
        print(f"quadtwist: cache error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except AccuracyError as exc:
        print(f"quadtwist: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (EmptyFamilyError, ValueError) as exc:
        print(f"quadtwist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
