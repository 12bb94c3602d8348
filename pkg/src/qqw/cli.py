"""Command-line experiment driver.

Every subcommand writes one record per row (CSV with a header, or JSON with a
schema version) and prints a one-line summary on stderr.  Exit status: 0 ok,
2 invalid arguments, 3 when ``--check`` finds a violated threshold.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 2, 3

DEFAULT_GRID_T = ("1", "sqrt", "N/8")
DEFAULT_GRID_EPS = ("2^-2", "2^-6", "2^-10")
TRADEOFF_BAND = (0.15, 2.0)


class ValidationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

_POW = re.compile(r"^\s*2\s*\^\s*(-?\d+)\s*$")


def parse_prob(text: str) -> float:
    """``2^-k`` (exact) or a decimal in (0, 1)."""
    m = _POW.match(text)
    try:
        v = 2.0 ** int(m.group(1)) if m else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a probability: {text!r}") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"probability must lie in (0, 1): {text!r}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("QQW_SEED")
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"QQW_SEED must be an integer, got {env!r}") from None


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def render(records, columns, fmt: str) -> str:
    if fmt == "json":
        rows = [{c: _json_val(r[c]) for c in columns} for r in records]
        return json.dumps({"schema_version": SCHEMA_VERSION, "columns": list(columns), "records": rows}, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _json_val(v):
    if isinstance(v, (np.integer, np.bool_)):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def emit(args, records, columns, summary: str) -> None:
    text = render(records, columns, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)


def pmap(fn, items, jobs: int):
    """Map preserving order; parallel across processes when ``jobs > 1``."""
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


def _sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n) if n else 0.0


# ---------------------------------------------------------------------------
# search-tradeoff
# ---------------------------------------------------------------------------


def _resolve_t(tok: str, N: int) -> int:
    tok = tok.strip()
    if tok == "sqrt":
        return math.isqrt(N)
    if tok.startswith("N/"):
        return N // int(tok[2:])
    return int(tok)


def cmd_search_tradeoff(args) -> int:
    from .smallerror import TRADEOFF_CSV_COLUMNS, tradeoff_ratio, tradeoff_sweep, validate_eps

    Ns = args.N or [1024, 4096]
    ts = args.t or list(DEFAULT_GRID_T)
    epss = args.eps or [parse_prob(e) for e in DEFAULT_GRID_EPS]
    grid = []
    for N in Ns:
        for tok in ts:
            t = _resolve_t(str(tok), N)
            if not 1 <= t <= N:
                raise ValidationError(f"t={t} outside [1, {N}]")
            for e in epss:
                validate_eps(e, N)
                grid.append((N, t, e))
    recs = tradeoff_sweep(grid, args.trials, args.seed, jobs=args.jobs)
    rows = [r.as_dict() for r in recs]
    ratios = [tradeoff_ratio(r.eps_worst, r.T_worst, r.N, r.t) if r.eps_worst > 0 else math.inf for r in recs]
    ok = True
    if args.check:
        lo, hi = TRADEOFF_BAND
        ok = all(lo <= x <= hi for x in ratios) and all(r.eps_worst <= r.eps_target for r in recs)
        if len(recs) >= 12:
            ok = ok and {r.case for r in recs} == {1, 2}
    finite = [x for x in ratios if math.isfinite(x)]
    band = f"[{min(finite):.3f}, {max(finite):.3f}]" if finite else "[]"
    emit(args, rows, TRADEOFF_CSV_COLUMNS, f"search-tradeoff: {len(recs)} points, ratio band {band}, check={'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# exact-search
# ---------------------------------------------------------------------------

EXACT_COLUMNS = ("N", "t", "trials", "failures", "success_prob", "queries", "query_bound", "seed")


def _exact_cell(a):
    from .amplitude import exact_plan, exact_search, exact_search_query_bound, plan_success
    from .oracle import child_rng, planted_input

    N, t, trials, seed = a
    p = float(plan_success(exact_plan(N, t), t / N)[0])
    fails, qmax = 0, 0
    for i in range(trials):
        rng = child_rng(seed, N, t, i)
        out = exact_search(planted_input(N, t, rng), t, rng)
        fails += not out.found
        qmax = max(qmax, out.queries.total)
    return {"N": N, "t": t, "trials": trials, "failures": fails, "success_prob": p, "queries": qmax, "query_bound": exact_search_query_bound(N, t), "seed": seed}


def cmd_exact_search(args) -> int:
    if args.exhaustive:
        cells = [(N, t) for N in range(2, args.N + 1) for t in range(1, N + 1)]
    else:
        ts = args.t or list(range(1, args.N + 1))
        for t in ts:
            if not 1 <= t <= args.N:
                raise ValidationError(f"t={t} outside [1, {args.N}]")
        cells = [(args.N, t) for t in ts]
    rows = pmap(_exact_cell, [(N, t, args.trials, args.seed) for N, t in cells], args.jobs)
    ok = all(r["failures"] == 0 and r["success_prob"] >= 1 - 1e-9 and r["queries"] <= r["query_bound"] for r in rows)
    fails = sum(r["failures"] for r in rows)
    emit(args, rows, EXACT_COLUMNS, f"exact-search: {len(rows)} cells, {fails} failures, min success {min(r['success_prob'] for r in rows):.15f}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# andor / star
# ---------------------------------------------------------------------------


def _andor_trial(a):
    from .andor import eval_tree, make_instance, verify_certificate, zero_error_evaluate
    from .oracle import BitOracle, child_rng

    shape, cls, seed, i, mult, rf = a
    rng = child_rng(seed, i)
    bits = make_instance(shape, cls, rng)
    oracle = BitOracle(bits)
    v = zero_error_evaluate(shape, oracle, rng, mult, rf)
    sound = True
    if not v.dontknow:
        sound = v.value == eval_tree(shape, bits) and verify_certificate(shape, BitOracle(bits), v.certificate)
    return {
        "shape_id": shape.shape_id,
        "N": shape.N,
        "d": shape.depth,
        "input_class": cls,
        "verdict": v.tag,
        "queries_quantum": v.queries.quantum_queries,
        "queries_classical": v.queries.classical_verification_queries,
        "dontknow": int(v.dontknow),
        "seed": seed,
        "_sound": sound,
    }


def _shape_from_args(args):
    from .andor import TreeShape, make_theorem9_shape

    if args.shape == "cube":
        return make_theorem9_shape(args.N)
    if not args.branching:
        raise ValidationError("--branching is required for --shape uniform or custom")
    br = [int(b) for b in args.branching.split(",")]
    if args.shape == "uniform":
        if len(br) != 1:
            raise ValidationError("uniform shapes take one branching factor")
        br = br * args.depth
    return TreeShape(len(br), tuple(br), args.root)


def _check_zero_error(rows) -> bool:
    n = len(rows)
    dk = sum(r["dontknow"] for r in rows)
    rate = dk / n if n else 0.0
    return all(r["_sound"] for r in rows) and rate <= 0.5 + 3 * _sigma(0.5, n)


def cmd_andor(args) -> int:
    from .andor import ANDOR_CSV_COLUMNS, INPUT_CLASSES, calibrate

    shape = _shape_from_args(args)
    classes = INPUT_CLASSES if args.input_class == "all" else (args.input_class,)
    calibrate(shape, args.restart_factor)
    items = [(shape, classes[i % len(classes)], args.seed, i, args.cutoff_multiplier, args.restart_factor) for i in range(args.trials)]
    rows = pmap(_andor_trial, items, args.jobs)
    ok = _check_zero_error(rows)
    mean_q = np.mean([r["queries_quantum"] + r["queries_classical"] for r in rows])
    dk = sum(r["dontknow"] for r in rows) / len(rows)
    emit(args, rows, ANDOR_CSV_COLUMNS, f"andor {shape.shape_id}: {len(rows)} runs, dontknow {dk:.4f}, mean queries {mean_q:.1f}, sound={all(r['_sound'] for r in rows)}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


def _star_trial(a):
    from .andor import make_instance
    from .graphs import GraphOracle, has_star, star_shape, star_zero_error, verify_star_certificate
    from .oracle import BitOracle, child_rng

    n, cls, seed, i, mult, rf = a
    rng = child_rng(seed, i)
    bits = make_instance(star_shape(n), cls, rng)
    g = GraphOracle(n, BitOracle(bits))
    v = star_zero_error(g, rng, mult, rf)
    sound = True
    if not v.dontknow:
        truth = int(has_star(g.adjacency()))
        sound = v.value == truth and verify_star_certificate(GraphOracle(n, BitOracle(bits)), v.certificate)
    return {
        "n": n,
        "N": n * (n - 1),
        "property": "star",
        "verdict": "DontKnow" if v.dontknow else f"Value({v.value})",
        "queries_quantum": v.queries.quantum_queries,
        "queries_classical": v.queries.classical_verification_queries,
        "seed": seed,
        "dontknow": int(v.dontknow),
        "_sound": sound,
    }


def cmd_star(args) -> int:
    from .andor import INPUT_CLASSES, calibrate
    from .graphs import GRAPH_CSV_COLUMNS, star_shape

    if args.n < 2:
        raise ValidationError("--n must be >= 2")
    classes = INPUT_CLASSES if args.input_class == "all" else (args.input_class,)
    calibrate(star_shape(args.n), args.restart_factor)
    items = [(args.n, classes[i % len(classes)], args.seed, i, args.cutoff_multiplier, args.restart_factor) for i in range(args.trials)]
    rows = pmap(_star_trial, items, args.jobs)
    ok = _check_zero_error(rows)
    dk = sum(r["dontknow"] for r in rows) / len(rows)
    emit(args, rows, GRAPH_CSV_COLUMNS, f"star n={args.n}: {len(rows)} runs, dontknow {dk:.4f}, sound={all(r['_sound'] for r in rows)}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# majority
# ---------------------------------------------------------------------------

MAJORITY_COLUMNS = ("N", "inputs", "correct", "worst_queries", "bound", "meets_bound_with_equality")


def _majority_row(N: int, tie_value: int):
    from .graphs import majority_exact, majority_worst_case
    from .oracle import BitOracle, all_inputs

    X = all_inputs(N)
    worst, correct = 0, True
    for x in X:
        o = BitOracle(x)
        got = majority_exact(o, tie_value)
        c = int(x.sum())
        want = 1 if 2 * c > N else 0 if 2 * c < N else tie_value
        correct &= got == want
        worst = max(worst, o.query_count)
    b = majority_worst_case(N)
    return {"N": N, "inputs": len(X), "correct": int(correct), "worst_queries": worst, "bound": b, "meets_bound_with_equality": int(worst == b)}


def cmd_majority(args) -> int:
    if args.N > 20:
        raise ValidationError("exhaustive majority is limited to N <= 20")
    Ns = range(1, args.N + 1) if args.all_sizes else [args.N]
    if not args.exhaustive:
        raise ValidationError("majority only supports --exhaustive runs")
    rows = [_majority_row(N, args.tie_value) for N in Ns]
    ok = all(r["correct"] and r["worst_queries"] <= r["bound"] for r in rows)
    last = rows[-1]
    emit(args, rows, MAJORITY_COLUMNS, f"majority: N={last['N']} max queries {last['worst_queries']} (bound {last['bound']}), all correct={all(r['correct'] for r in rows)}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# comm
# ---------------------------------------------------------------------------


def _comm_trial(a):
    from .comm import disjointness_via_R
    from .oracle import child_rng

    N, k, cls, seed, i = a
    rng = child_rng(seed, i)
    x = (rng.random(k) < 0.3).astype(np.uint8)
    y = ((rng.random(k) < 0.3) & (x == 0)).astype(np.uint8)
    if cls == "intersecting":
        j = int(rng.integers(k))
        x[j] = y[j] = 1
    res = disjointness_via_R(x, y, rng, N)
    qpm = 2 * (math.ceil(math.log2(N)) + 1)
    return {
        "N": N,
        "k": k,
        "instance_class": cls,
        "output": res.output,
        "qubits_sent": res.qubits_sent,
        "queries": res.queries.total,
        "seed": seed,
        "_exact": res.qubits_sent == qpm * res.queries.total,
    }


def cmd_comm(args) -> int:
    from .comm import COMM_CSV_COLUMNS, disjointness_shape

    try:
        disjointness_shape(args.k, args.N)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    classes = ("disjoint", "intersecting") if args.instance_class == "both" else (args.instance_class,)
    items = [(args.N, args.k, classes[i % len(classes)], args.seed, i) for i in range(args.trials)]
    rows = pmap(_comm_trial, items, args.jobs)
    dis = [r for r in rows if r["instance_class"] == "disjoint"]
    inter = [r for r in rows if r["instance_class"] == "intersecting"]
    fp = sum(r["output"] for r in dis)
    det = sum(r["output"] for r in inter) / len(inter) if inter else float("nan")
    ok = fp == 0 and all(r["_exact"] for r in rows)
    if inter:
        ok = ok and det >= 0.5 - 3 * _sigma(0.5, len(inter))
    emit(args, rows, COMM_CSV_COLUMNS, f"comm N={args.N} k={args.k}: false positives {fp}/{len(dis)}, detection {det:.4f}, qubit accounting exact={all(r['_exact'] for r in rows)}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# polybounds
# ---------------------------------------------------------------------------


def cmd_polybounds(args) -> int:
    from . import polybounds as pb

    params = pb.BoundParams(args.a, args.b if args.b is not None else pb.b_floor())
    if args.paturi_grid:
        total, fails = pb.paturi_grid()
        rows = [{"check": "paturi", "points": total, "failures": len(fails)}]
        emit(args, rows, ("check", "points", "failures"), f"polybounds: paturi grid {total} points, {len(fails)} failures")
        return EXIT_OK if not fails else EXIT_CHECK
    if args.extremal:
        rng = np.random.default_rng(args.seed)
        xs = (1.1, 1.5, 2.0, 3.0)
        bad = sum(not pb.extremal_check(pb.random_bounded_interpolant(args.degree, rng), xs) for _ in range(args.extremal))
        rows = [{"check": "extremal", "points": args.extremal, "failures": bad}]
        emit(args, rows, ("check", "points", "failures"), f"polybounds: extremal {args.extremal} polynomials, {bad} failures")
        return EXIT_OK if bad == 0 else EXIT_CHECK
    if args.N is None or args.t is None:
        raise ValidationError("bound curves need --N and --t")
    if not 1 <= args.t < args.N:
        raise ValidationError("need 1 <= t < N")
    xs = range(0, (args.x_max if args.x_max is not None else args.N - args.t) + 1, args.x_step)
    rows = [dict(zip(pb.BOUND_CSV_COLUMNS, r)) for r in pb.bound_curve(args.N, args.t, xs, params, by_degree=args.by_degree)]
    emit(args, rows, pb.BOUND_CSV_COLUMNS, f"polybounds: {len(rows)} bound points (a={params.a}, b={params.b})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle (Boolean-function measures)
# ---------------------------------------------------------------------------

ORACLE_COLUMNS = ("function", "N", "D", "s", "deg", "monotone", "D_le_s2")


def _named_function(name: str, N: int | None):
    from .andor import TreeShape, eval_tree
    from .boolfn import TruthTable
    from .graphs import has_star

    if name in ("or", "and", "majority") and N is None:
        raise ValidationError(f"--function {name} needs --N")
    if name == "or":
        return TruthTable.OR(N)
    if name == "and":
        return TruthTable.AND(N)
    if name == "majority":
        return TruthTable.majority(N)
    m = re.fullmatch(r"tree:(OR|AND):([\d,]+)", name)
    if m:
        br = tuple(int(b) for b in m.group(2).split(","))
        shape = TreeShape(len(br), br, m.group(1))
        return TruthTable.from_function(shape.N, lambda x: eval_tree(shape, x))
    m = re.fullmatch(r"star:(\d+)", name)
    if m:
        n = int(m.group(1))

        def star(x):
            a = np.zeros((n, n), dtype=np.uint8)
            a[~np.eye(n, dtype=bool)] = x
            return has_star(a)

        return TruthTable.from_function(n * (n - 1), star)
    raise ValidationError(f"unknown function {name!r}")


def cmd_oracle(args) -> int:
    from .boolfn import decision_tree_depth, degree, is_monotone, read_truth_table, sensitivity

    if args.truth_table:
        f = read_truth_table(args.truth_table)
        name = os.path.basename(args.truth_table)
    elif args.function:
        f = _named_function(args.function, args.N)
        name = args.function
    else:
        raise ValidationError("give --truth-table or --function")
    if f.N > 14:
        raise ValidationError("decision-tree depth is limited to N <= 14")
    D, s, d, mono = decision_tree_depth(f), sensitivity(f), degree(f), is_monotone(f)
    row = {"function": name, "N": f.N, "D": D, "s": s, "deg": d, "monotone": int(mono), "D_le_s2": int(D <= s * s)}
    ok = (not mono) or D <= s * s
    emit(args, [row], ORACLE_COLUMNS, f"oracle {name}: D={D} s={s} deg={d} monotone={mono}")
    return EXIT_CHECK if args.check and not ok else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qqw", description="Quantum query-complexity experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials=1000):
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (default: $QQW_SEED or 0)")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--check", action="store_true", help="exit 3 if acceptance thresholds fail")
        sp.add_argument("--jobs", type=positive_int, default=1)
        sp.add_argument("--trials", type=int, default=trials)

    sp = sub.add_parser("search-tradeoff", help="error/queries trade-off of small-error search")
    sp.add_argument("--N", type=positive_int, action="append")
    sp.add_argument("--t", action="append", help="solution count, 'sqrt' or 'N/k'; repeatable")
    sp.add_argument("--eps", type=parse_prob, action="append", help="target error, e.g. 2^-6; repeatable")
    common(sp, 200)
    sp.set_defaults(func=cmd_search_tradeoff)

    sp = sub.add_parser("exact-search", help="exact search with a known solution count")
    sp.add_argument("--N", type=positive_int, required=True)
    sp.add_argument("--t", type=positive_int, action="append")
    sp.add_argument("--exhaustive", action="store_true", help="every 2 <= N' <= N and 1 <= t <= N'")
    common(sp, 100)
    sp.set_defaults(func=cmd_exact_search)

    sp = sub.add_parser("andor", help="zero-error AND-OR tree evaluation")
    sp.add_argument("--shape", choices=("cube", "uniform", "custom"), default="cube", help="cube: AND of N^(1/3) ORs of N^(2/3) leaves")
    sp.add_argument("--N", type=positive_int, default=512)
    sp.add_argument("--depth", type=positive_int, default=2)
    sp.add_argument("--branching", default=None, help="comma-separated factors")
    sp.add_argument("--root", choices=("OR", "AND"), default="OR")
    sp.add_argument("--input-class", choices=("all", "hard1", "hard0", "random_balanced"), default="all")
    sp.add_argument("--cutoff-multiplier", type=float, default=2.0)
    sp.add_argument("--restart-factor", type=float, default=10.0)
    common(sp, 1000)
    sp.set_defaults(func=cmd_andor)

    sp = sub.add_parser("star", help="zero-error STAR detection on directed graphs")
    sp.add_argument("--n", type=int, default=16)
    sp.add_argument("--input-class", choices=("all", "hard1", "hard0", "random_balanced"), default="all")
    sp.add_argument("--cutoff-multiplier", type=float, default=2.0)
    sp.add_argument("--restart-factor", type=float, default=10.0)
    common(sp, 1000)
    sp.set_defaults(func=cmd_star)

    sp = sub.add_parser("majority", help="exact Majority with parity comparisons")
    sp.add_argument("--N", type=positive_int, required=True)
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--all-sizes", action="store_true", help="every size 1..N")
    sp.add_argument("--tie-value", type=int, choices=(0, 1), default=1)
    common(sp)
    sp.set_defaults(func=cmd_majority)

    sp = sub.add_parser("comm", help="distributed certificates and the Disjointness reduction")
    sp.add_argument("--N", type=positive_int, default=512)
    sp.add_argument("--k", type=positive_int, default=56)
    sp.add_argument("--instance-class", choices=("both", "disjoint", "intersecting"), default="both")
    common(sp, 1000)
    sp.set_defaults(func=cmd_comm)

    sp = sub.add_parser("polybounds", help="Chebyshev checks and error lower bounds")
    sp.add_argument("--paturi-grid", action="store_true")
    sp.add_argument("--extremal", type=int, default=0, metavar="COUNT", help="check COUNT random bounded interpolants")
    sp.add_argument("--degree", type=int, default=8)
    sp.add_argument("--N", type=positive_int)
    sp.add_argument("--t", type=positive_int)
    sp.add_argument("--x-max", type=int, default=None)
    sp.add_argument("--x-step", type=positive_int, default=1)
    sp.add_argument("--by-degree", action="store_true", help="tabulate against degree d instead of queries T")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--b", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_polybounds)

    sp = sub.add_parser("oracle", help="brute-force D(f), s(f), deg(f) of a small Boolean function")
    sp.add_argument("--truth-table", default=None)
    sp.add_argument("--function", default=None, help="or | and | majority | tree:OR:2,2 | star:3")
    sp.add_argument("--N", type=positive_int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_oracle)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    try:
        args.seed = resolve_seed(args.seed)
        if args.trials < 0:
            raise ValidationError("--trials must be >= 0")
        if getattr(args, "cutoff_multiplier", 1.0) < 1:
            raise ValidationError("--cutoff-multiplier must be >= 1")
        if args.command in ("andor", "star", "comm") and args.trials < 1:
            raise ValidationError("--trials must be >= 1")
        return args.func(args)
    except ValueError as e:
        print(f"qqw: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
