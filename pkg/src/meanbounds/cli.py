"""Command line interface: ``meanbounds <command> [<sub>] [flags]``.

Every command writes one JSON object to stdout with the keys command,
inputs, result, version and elapsed_ms (sorted, floats at 17 significant
digits); a few commands can emit CSV instead. Exit status is 0 when every
verdict holds, 2 when a checked inequality fails and 1 for usage or
domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .complexify import (classify_point, classify_unit_disk, curve_csv, sample_curve)
from .errors import MeanBoundsError
from .expr import compile_expr
from .iterate_bounds import check_trace, iterate_bounds
from .mean_theory import rado_power_envelope, verify_envelope
from .means import check_axioms, eval_mean, parse_mean
from .quadrature import QuadratureSpec
from .refine_discrete import (RefinementChain, SequencePair, aczel_refine, cde_refine,
                              dft_uncertainty)
from .refine_integral import (integral_refine, jackson_integral, jackson_refine,
                              minmax_gap_identity)
from .special_fn import (elliptic_k, elliptic_levels, gamma_turan_chain, log_theta3_half_pi,
                         theta3, theta3_half_pi_highprec, theta_min_bound)

PERTURB_ENV = "MEANBOUNDS_TEST_PERTURB"
EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_help()}\n{self.prog}: {message}")


# -- serialization ---------------------------------------------------------------

def _fmt_float(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def dumps(obj) -> str:
    """Key-sorted JSON with every float printed at 17 significant digits."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# -- input helpers ---------------------------------------------------------------

def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}: {exc}") from None


class _NumberList(argparse.Action):
    """Accepts ``--a 3 5`` as well as ``--a 3,5``; stores one flat list of floats."""

    def __call__(self, parser, namespace, values, option_string=None):
        out = []
        for v in values:
            try:
                out.extend(float(t) for t in v.split(",") if t.strip())
            except ValueError:
                parser.error(f"{option_string}: bad number list {v!r}")
        if not out:
            parser.error(f"{option_string}: empty number list")
        setattr(namespace, self.dest, out)


def _complexes(text: str) -> list:
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}: {exc}") from None


def read_pairs_csv(path: str) -> tuple:
    """Two numeric columns; blank lines and anything after '#' are ignored."""
    xs, ys = [], []
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            cols = [c.strip() for c in line.replace(";", ",").split(",") if c.strip()]
            if len(cols) == 1:
                cols = line.split()
            if len(cols) != 2:
                raise UsageError(f"{path}:{lineno}: expected two columns, got {len(cols)}")
            try:
                xs.append(float(cols[0]))
                ys.append(float(cols[1]))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: non-numeric entry") from None
    return xs, ys


def _perturb(chain: RefinementChain) -> RefinementChain:
    """Test hook: pull the upper member below the middle by the given fraction."""
    raw = os.environ.get(PERTURB_ENV)
    if not raw:
        return chain
    delta = float(raw)
    upper = chain.middle - delta * max(abs(chain.middle), 1.0)
    return RefinementChain.build(chain.lower, chain.middle, upper)


def _chain_out(chain: RefinementChain) -> tuple:
    chain = _perturb(chain)
    return chain.as_dict(), chain.holds


def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(a=args.a, b=args.b, rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _pmap(fn, items, threads: int) -> list:
    # ordered map, so results and their reductions do not depend on scheduling
    if threads <= 1 or len(items) <= 1:
        return [fn(v) for v in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- commands (each returns (result, ok) or a CSV string with ok) ----------------

def cmd_means_eval(args):
    kind = parse_mean(args.mean)
    value = eval_mean(kind, args.x, args.y)
    comp = args.x * args.y / value if value > 0 else 0.0
    return {"mean": str(kind), "value": value, "complement": comp}, True


def cmd_means_axioms(args):
    kind = parse_mean(args.mean)
    rep = check_axioms(kind, samples=args.samples, seed=args.seed)
    res = {"mean": str(kind), "ok": rep.ok, "samples": rep.samples_used, "seed": rep.seed,
           "intermediacy_violations": len(rep.intermediacy_violations),
           "reflexivity_violations": len(rep.reflexivity_violations),
           "homogeneity_violations": len(rep.homogeneity_violations),
           "monotonicity_violations": len(rep.monotonicity_violations)}
    return res, rep.ok


def cmd_envelope(args):
    env = rado_power_envelope(args.alpha)
    return {"alpha": args.alpha, "lower_exponent": env.lower_exponent,
            "upper_exponent": env.upper_exponent, "regime": env.regime}, True


def cmd_verify(args):
    def one(alpha):
        r = verify_envelope(alpha, samples=args.samples, seed=args.seed)
        return {"alpha": alpha, "violations": len(r["violations"]),
                "lower_slack": r["lower_slack"], "upper_slack": r["upper_slack"],
                "lower_exponent": r["envelope"].lower_exponent,
                "upper_exponent": r["envelope"].upper_exponent}
    rows = _pmap(one, args.alpha, args.threads)
    ok = all(r["violations"] == 0 for r in rows)
    return {"rows": rows, "total_violations": sum(r["violations"] for r in rows)}, ok


def cmd_refine_discrete(args):
    kind = parse_mean(args.mean)
    if args.csv:
        xs, ys = read_pairs_csv(args.csv)
    elif args.x is not None and args.y is not None:
        xs, ys = _floats(args.x), _floats(args.y)
    else:
        raise UsageError("refine discrete needs --x and --y, or --csv")
    chain, ok = _chain_out(cde_refine(kind, SequencePair.of(xs, ys)))
    return {"mean": str(kind), "n": len(xs), **chain}, ok


def cmd_refine_integral(args):
    f = compile_expr(args.f)
    g = compile_expr(args.g)
    if args.identity:
        r = minmax_gap_identity(f, g, _quad(args))
        return r, bool(r["residual"] <= r["tolerance"])
    kind = parse_mean(args.mean)
    if args.q is not None:
        chain = jackson_refine(kind, f, g, args.q, args.tail_tol)
        res, ok = _chain_out(chain)
        return {"mean": str(kind), "q": args.q, **res}, ok
    res, ok = _chain_out(integral_refine(kind, f, g, _quad(args)))
    return {"mean": str(kind), **res}, ok


def cmd_iterate(args):
    f = compile_expr(args.f)
    g = compile_expr(args.g)
    trace = iterate_bounds(f, g, _quad(args), args.alpha, args.steps, exact_gap=not args.fast_gap)
    verdict = check_trace(trace)
    if args.csv:
        return trace.to_csv(), verdict["it1_holds"]
    res = {"alpha": trace.alpha, "S": trace.s_estimate, "nodes": trace.nodes,
           "L": trace.L, "G": trace.G, "A": trace.A, "gap": trace.gap, **verdict}
    return res, verdict["it1_holds"]


def cmd_gamma_table(args):
    rows = _pmap(gamma_turan_chain, args.a, args.threads)
    ok = all(c.lower <= c.middle <= c.upper or not math.isfinite(c.upper) for c in rows)
    if args.csv:
        return _csv_text(["a", "g", "l", "gap"],
                         [(c.a, c.g_ratio, c.l_ratio, c.g_gap) for c in rows]), ok
    return {"rows": [{"a": c.a, "g": c.g_ratio, "l": c.l_ratio, "gap": c.g_gap,
                      "lower": c.lower, "middle": c.middle, "upper": c.upper} for c in rows]}, ok


def cmd_elliptic(args):
    def one(x):
        lv = elliptic_levels(x)
        k = elliptic_k(x)
        vals = [lv["L0"], lv["L1"], lv["L2"], k, lv["G2"], lv["G1"], lv["G0"]]
        ordered = all(a <= b for a, b in zip(vals, vals[1:]))
        if args.level is None:
            return {"x": x, "K": k, "ordered": ordered, **lv}
        lo, hi = lv[f"L{args.level}"], lv[f"G{args.level}"]
        return {"x": x, "K": k, "level": args.level, "lower": lo, "upper": hi,
                "ordered": bool(ordered and lo <= k <= hi)}
    rows = _pmap(one, args.x, args.threads)
    return {"rows": rows}, all(r["ordered"] for r in rows)


def cmd_theta_bound(args):
    b = theta_min_bound(args.q)
    log_min = log_theta3_half_pi(args.q)
    res = {"q": args.q, "log10_bound": b["log10_bound"],
           "log10_min": log_min / math.log(10.0)}
    if not args.log:
        res["bound"] = b["bound"]
        res["min"] = theta3(math.pi / 2, args.q)
    if args.highprec:
        import mpmath
        m = theta3_half_pi_highprec(args.q)
        res["log10_min_highprec"] = float(mpmath.log10(m))
    return res, bool(log_min <= b["log_bound"])


def cmd_uncertainty(args):
    r = dft_uncertainty(_complexes(args.vector))
    res = {k: r[k] for k in ("support_a", "support_b", "product", "holds", "equality")}
    res["n"] = len(r["transform"])
    return res, bool(r["holds"])


def cmd_complex_curve(args):
    pts = sample_curve(args.n)
    worst = max(p.scaled_residual for p in pts)
    if args.csv:
        return curve_csv(pts), True
    res = {"n_per_branch": args.n, "points": len(pts), "max_scaled_residual": worst}
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(curve_csv(pts))
        res["out"] = args.out
    return res, True


def cmd_complex_classify(args):
    if args.s is not None and (args.re is not None or args.im is not None):
        raise UsageError("give either --s or --re/--im, not both")
    if args.s is not None:
        vals = _complexes(args.s)
    elif args.re is not None or args.im is not None:
        vals = [complex(args.re or 0.0, args.im or 0.0)]
    else:
        raise UsageError("complexify classify needs --s or --re/--im")
    if args.disk:
        rows = [{"s": d.s, "lhs": d.lhs, "rhs": d.rhs, "position": d.position, "holds": d.holds}
                for d in map(classify_unit_disk, vals)]
        return {"rows": rows}, all(r["holds"] for r in rows)
    rows = [{"s": p.s, "lhs": p.lhs, "rhs": p.rhs, "region": p.region, "holds": p.holds}
            for p in (classify_point(v, args.tol) for v in vals)]
    return {"rows": rows}, True


def cmd_aczel(args):
    kind = parse_mean(args.mean)
    res, ok = _chain_out(aczel_refine(kind, _floats(args.x), _floats(args.y)))
    return {"mean": str(kind), **res}, ok


def cmd_jackson(args):
    f = compile_expr(args.f)
    if args.g is None:
        r = jackson_integral(f, args.q, args.tail_tol)
        return {"q": args.q, **r}, True
    g = compile_expr(args.g)
    kind = parse_mean(args.mean)
    res, ok = _chain_out(jackson_refine(kind, f, g, args.q, args.tail_tol))
    return {"mean": str(kind), "q": args.q, **res}, ok


# -- parser ----------------------------------------------------------------------

def _add_quad(p):
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="meanbounds", description="Mean-based refinements of classical inequalities.")
    top.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    means = sub.add_parser("means", parents=[common], help="evaluate means and check their axioms")
    ms = means.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = ms.add_parser("eval", parents=[common])
    p.add_argument("--mean", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.set_defaults(func=cmd_means_eval)
    p = ms.add_parser("axioms", parents=[common])
    p.add_argument("--mean", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_means_axioms)

    mt = sub.add_parser("mean-theory", parents=[common], help="Radó/power envelopes")
    mts = mt.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = mts.add_parser("envelope", parents=[common])
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_envelope)
    p = mts.add_parser("verify", parents=[common])
    p.add_argument("--alpha", nargs="+", required=True, action=_NumberList)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    ref = sub.add_parser("refine", parents=[common], help="sandwich refinements")
    rs = ref.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = rs.add_parser("discrete", parents=[common])
    p.add_argument("--mean", required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--csv", help="file with two numeric columns; '#' starts a comment")
    p.set_defaults(func=cmd_refine_discrete)
    p = rs.add_parser("integral", parents=[common])
    p.add_argument("--mean", default="min")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    _add_quad(p)
    p.add_argument("--q", type=float, help="use the Jackson q-integral on [0, 1]")
    p.add_argument("--tail-tol", type=float, default=1e-14)
    p.add_argument("--identity", action="store_true", help="check the max/min gap identity")
    p.set_defaults(func=cmd_refine_integral)

    p = sub.add_parser("iterate", parents=[common], help="monotone bounds from the mean iteration")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    _add_quad(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--fast-gap", action="store_true", help="skip the O(N^2) exact excess")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("gamma-table", parents=[common], help="Turán-type refinement for Gamma")
    p.add_argument("--a", nargs="+", required=True, action=_NumberList, help="values, space or comma separated")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_gamma_table)

    p = sub.add_parser("elliptic", parents=[common], help="two-sided bounds for K")
    p.add_argument("--x", nargs="+", required=True, action=_NumberList, help="modulus k in (0, 1)")
    p.add_argument("--level", type=int, choices=(0, 1, 2))
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("theta-bound", parents=[common], help="lower bound for min theta_3")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--log", action="store_true", help="report log10 values only")
    p.add_argument("--highprec", action="store_true", help="also evaluate with mpmath")
    p.set_defaults(func=cmd_theta_bound)

    p = sub.add_parser("uncertainty", parents=[common], help="DFT support uncertainty")
    p.add_argument("--vector", required=True, help="comma separated, complex entries allowed")
    p.set_defaults(func=cmd_uncertainty)

    cx = sub.add_parser("complexify", parents=[common], help="complex AM-GM separating curve")
    cs = cx.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = cs.add_parser("curve", parents=[common])
    p.add_argument("--n", "--samples", dest="n", type=int, default=720, help="points per branch")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out", help="write the CSV to this file and print a summary")
    p.set_defaults(func=cmd_complex_curve)
    p = cs.add_parser("classify", parents=[common])
    p.add_argument("--s", help="comma separated complex numbers, e.g. 0.5+0.5j")
    p.add_argument("--re", type=float)
    p.add_argument("--im", type=float)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--disk", action="store_true", help="use the modulus form")
    p.set_defaults(func=cmd_complex_classify)

    p = sub.add_parser("aczel", parents=[common], help="reverse refinement in Lorentz form")
    p.add_argument("--mean", default="power:0")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_aczel)

    p = sub.add_parser("jackson", parents=[common], help="Jackson q-integral and q-chain")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--mean", default="min")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--tail-tol", type=float, default=1e-14)
    p.set_defaults(func=cmd_jackson)
    return top


def _inputs(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "command", "sub")}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_ERROR
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    name = args.command + (f" {args.sub}" if getattr(args, "sub", None) else "")
    start = time.perf_counter()
    try:
        result, ok = args.func(args)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_ERROR
    except (MeanBoundsError, ValueError, OverflowError, OSError) as exc:
        print(f"{name}: {type(exc).__name__}: {exc}", file=err)
        return EXIT_ERROR
    elapsed = (time.perf_counter() - start) * 1e3
    if isinstance(result, str):
        out.write(result)
    else:
        env = {"command": name, "inputs": _inputs(args), "result": result,
               "version": __version__, "elapsed_ms": elapsed}
        out.write(dumps(env) + "\n")
    if not ok:
        print(f"{name}: inequality check failed", file=err)
    return EXIT_OK if ok else EXIT_VIOLATION


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
