"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single ``criterion N: PASS/FAIL`` line (also collected
into the terminal summary) before asserting.
"""

import io
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from battery import ENVELOPE, POSITIVE, SIGN_CHANGING, pair, unit_interval
from meanbounds import cli
from meanbounds.complexify import classify_point, curve_point, sample_curve
from meanbounds.expr import compile_expr
from meanbounds.iterate_bounds import check_trace, iterate_bounds
from meanbounds.mean_theory import verify_envelope
from meanbounds.means import CATALOG, Max, Min, Power, check_axioms
from meanbounds.quadrature import Integrand, QuadratureSpec
from meanbounds.refine_discrete import (SequencePair, cde_refine, dft_uncertainty,
                                        pontryagin_identity_residual)
from meanbounds.refine_integral import (integral_refine, jackson_refine, minmax_gap_identity,
                                        minmax_refine_signed)
from meanbounds.special_fn import (elliptic_k, elliptic_k_param, elliptic_levels, elliptic_split,
                                   gamma_turan_chain, theta3, theta3_half_pi_highprec,
                                   theta_min_bound)

ALPHAS = [-10.0, -5.0, -3.0, -2.0, -1.5, -1.0, -0.9, -0.75, -0.5, -0.25,
          0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 5.0, 10.0, 50.0]


def test_criterion_01_envelope_chain(report):
    buf = io.StringIO()
    t0 = time.perf_counter()
    code = cli.run(["refine", "integral", "--mean", "min", "--f", "x", "--g", "1-x",
                    "--a", "0", "--b", "1"], out=buf)
    elapsed = time.perf_counter() - t0
    r = json.loads(buf.getvalue())["result"]
    errs = [abs(r["lower"] - 1 / 36), abs(r["middle"] - 7 / 144), abs(r["upper"] - 1 / 9)]
    ok = code == 0 and max(errs) <= 1e-10 and elapsed < 1.0
    report(1, ok, f"max abs err {max(errs):.1e}, {elapsed:.3f} s")
    assert ok


def test_criterion_02_gamma_table(report):
    expected = {3: 0.9665383895, 5: 0.9988760963, 7: 0.9999801314, 10: 0.9999999802}
    t0 = time.perf_counter()
    errs = {a: abs(gamma_turan_chain(a).g_ratio - v) for a, v in expected.items()}
    gap20 = gamma_turan_chain(20).g_gap
    elapsed = time.perf_counter() - t0
    ok = max(errs.values()) <= 1e-9 and 1e-21 < gap20 < 1e-19 and elapsed < 1.0
    report(2, ok, f"max err {max(errs.values()):.1e}, 1-g(20) = {gap20:.3e}, {elapsed:.3f} s")
    assert ok


def test_criterion_03_elliptic_sandwich(report):
    t0 = time.perf_counter()
    grid = np.linspace(0.01, 0.99, 99)
    min_slack = math.inf
    for x in grid:
        lv = elliptic_levels(x)
        chain = [lv["L0"], lv["L1"], lv["L2"], elliptic_k(x), lv["G2"], lv["G1"], lv["G0"]]
        min_slack = min(min_slack, min(b - a for a, b in zip(chain, chain[1:])))
    k_param = elliptic_k_param(0.9999999999)
    quad = QuadratureSpec(0.0, 1.0, rel_tol=1e-13, abs_tol=1e-15)
    worst = 0.0
    for x in np.linspace(0.05, 0.95, 10):
        f, g = elliptic_split(x)
        tr = iterate_bounds(Integrand(g, "g", True), Integrand(f, "f", True), quad, 2.0, 2,
                            exact_gap=False)
        lv = elliptic_levels(x)
        worst = max(worst, abs(tr.G[2] - lv["G2"]), abs(tr.L[2] - lv["L2"]))
    elapsed = time.perf_counter() - t0
    ok = min_slack > 0 and abs(k_param - 12.8992) <= 5e-4 and worst <= 1e-8 and elapsed < 5.0
    report(3, ok, f"min slack {min_slack:.2e}, K(0.9999999999) = {k_param:.6f} "
                  f"(modulus form {elliptic_k(0.9999999999):.4f}), closed vs direct {worst:.1e}, "
                  f"{elapsed:.2f} s")
    assert ok


def test_criterion_04_theta_bound(report):
    log10_bound = theta_min_bound(0.999)["log10_bound"]
    qs = [k / 10 for k in range(1, 10)]
    below = all(0 < theta3(math.pi / 2, q) <= theta_min_bound(q)["bound"] for q in qs)
    ok = abs(log10_bound + 650.92) <= 0.05 and below
    detail = f"log10 bound(0.999) = {log10_bound:.4f}"
    try:
        import mpmath
    except ImportError:  # optional feature disabled
        detail += ", high-precision check skipped"
    else:
        log10_m = float(mpmath.log10(theta3_half_pi_highprec(0.999)))
        ok = ok and abs(log10_m + 1069) <= 2
        detail += f", log10 m(0.999) = {log10_m:.3f}"
    report(4, ok, detail)
    assert ok


def test_criterion_05_rado_envelopes(report):
    t0 = time.perf_counter()
    violations = sum(len(verify_envelope(a, samples=10_000, seed=i)["violations"])
                     for i, a in enumerate(ALPHAS))
    witness = verify_envelope(-1.0, samples=10_000, seed=99, ratio_range=(1.0, 4.0))["upper_slack"]
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and witness < 1e-3 and elapsed < 10.0
    report(5, ok, f"{violations} violations over 20 alphas, alpha=-1 witness {witness:.2e}, "
                  f"{elapsed:.2f} s")
    assert ok


def _milne_exact(xs, ys):
    xs = [Fraction(v) for v in xs]
    ys = [Fraction(v) for v in ys]
    lower = sum(x * y for x, y in zip(xs, ys)) ** 2
    m2 = sum((x * x + y * y) / 2 for x, y in zip(xs, ys))
    mc2 = sum(2 * x * x * y * y / (x * x + y * y) for x, y in zip(xs, ys))
    upper = sum(x * x for x in xs) * sum(y * y for y in ys)
    return lower, m2 * mc2, upper


def test_criterion_06_cde_suite(report):
    means = [k for k in CATALOG if check_axioms(k, samples=300, seed=1).ok][:8]
    rng = np.random.default_rng(2024)
    failures = 0
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        xs = rng.uniform(0, 10, n)
        ys = rng.uniform(0, 10, n)
        for kind in means:
            failures += not cde_refine(kind, SequencePair.of(xs, ys)).holds
    lo, mid, up = _milne_exact([1, 2], [1, 3])
    c = cde_refine(Power(2.0), SequencePair.of([1, 2], [1, 3]))
    milne_ok = (lo, mid, up) == (49, Fraction(1275, 26), 50) and \
        all(abs(a - float(b)) <= 1e-12 * float(b) for a, b in zip((c.lower, c.middle, c.upper), (lo, mid, up)))
    ok = len(means) == 8 and failures == 0 and milne_ok
    report(6, ok, f"{failures} failures over 8 means x 1000 pairs; Milne {lo} <= {mid} <= {up}")
    assert ok


def test_criterion_07_dft_uncertainty(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    bad = 0
    for n in range(1, 7):
        for mask in itertools.product([0, 1], repeat=n):
            if not any(mask):
                continue
            m = np.array(mask, dtype=bool)
            for _ in range(20):
                a = np.zeros(n, dtype=complex)
                a[m] = rng.normal(size=m.sum()) + 1j * rng.normal(size=m.sum())
                bad += not dft_uncertainty(a)["holds"]
    equal = all(dft_uncertainty(np.eye(n)[0])["equality"] and dft_uncertainty(np.ones(n))["equality"]
                for n in range(1, 7))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and equal and elapsed < 5.0
    report(7, ok, f"{bad} violations, delta/constant equality {equal}, {elapsed:.2f} s")
    assert ok


def test_criterion_08_iteration(report):
    quad = QuadratureSpec(rel_tol=1e-10)
    problems = []
    for entry in POSITIVE:
        f, g, a, b = pair(entry)
        tr = iterate_bounds(f, g, quad.over(a, b), 1.0, 5)
        v = check_trace(tr)
        strictly = all(tr.gap[n] < tr.gap[n - 1] for n in range(1, 6) if tr.gap[n - 1] > 0)
        if not (v["it1_holds"] and strictly and v["monotone_from_1"] and v["it2_holds_from"] <= 1
                and tr.gap[5] < 1e-3 * tr.gap[0]):
            problems.append(entry[:2])
    f, g, a, b = pair(ENVELOPE)
    env = iterate_bounds(f, g, quad.over(a, b), 1.0, 3)
    n0 = abs(env.L[0] - 1 / 3) < 1e-12 and abs(env.s_estimate - 1 / 6) < 1e-12 and \
        env.L[0] > env.s_estimate and check_trace(env)["it2_holds_from"] == 1
    ok = not problems and n0
    report(8, ok, f"{len(POSITIVE) - len(problems)}/{len(POSITIVE)} battery pairs pass; "
                  f"n=0 exception L0=1/3 > S=1/6 reproduced: {n0}")
    assert ok


def test_criterion_09_complex_curve(report):
    pts = sample_curve(720)
    worst = max(p.scaled_residual for p in pts)
    r2, r3 = math.sqrt(2.0), math.sqrt(3.0)
    crossings = [
        abs(curve_point(math.pi, "plus").x - (-3 - 2 * r2)),
        abs(curve_point(math.pi, "minus").x - (-3 + 2 * r2)),
        abs(curve_point(math.pi / 2, "plus").y - (2 + r3)),
        abs(curve_point(math.pi / 2, "minus").y - (2 - r3)),
        abs(curve_point(3 * math.pi / 2, "plus").y + (2 + r3)),
        abs(curve_point(3 * math.pi / 2, "minus").y + (2 - r3)),
    ]
    flips = 0
    for k in range(100):
        phi = 2 * math.pi * (k + 0.5) / 100
        for branch in ("plus", "minus"):
            p = curve_point(phi, branch)
            s = complex(p.x, p.y)
            a = classify_point(s * (1 + 1e-3)).region
            b = classify_point(s * (1 - 1e-3)).region
            flips += {a, b} == {"inside", "outside"}
    ok = len(pts) == 1440 and worst <= 1e-9 and max(crossings) <= 1e-12 and flips == 200
    report(9, ok, f"max scaled residual {worst:.1e}, crossing err {max(crossings):.1e}, "
                  f"{flips}/200 ray flips")
    assert ok


def test_criterion_10_identities(report):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(10_000):
        x = rng.normal(size=4)
        y = rng.normal(size=4)
        r = pontryagin_identity_residual(x, y)
        worst = max(worst, r["residual"] / (np.sum(x * x) * np.sum(y * y)))
    quad = QuadratureSpec(rel_tol=1e-10)
    gap_ok = True
    for entry in POSITIVE + SIGN_CHANGING + [ENVELOPE]:
        f, g, a, b = pair(entry)
        r = minmax_gap_identity(f, g, quad.over(a, b))
        gap_ok &= r["residual"] <= 10 * r["tolerance"]
    rev_ok = True
    for entry in SIGN_CHANGING + [ENVELOPE]:
        f, g, a, b = pair(entry)
        fwd = minmax_refine_signed(f, g, quad.over(a, b))
        rev = minmax_refine_signed(f.negated(), g.negated(), quad.over(a, b))
        c1, c2 = fwd["chain"], rev["chain"]
        same = all(abs(u - v) <= 1e-12 * max(1.0, abs(u)) for u, v in
                   zip((c1.lower, c1.middle, c1.upper), (c2.lower, c2.middle, c2.upper)))
        rev_ok &= fwd["direction"] == "forward" and rev["direction"] == "reversed" and same and c2.holds
    ok = worst <= 1e-10 and gap_ok and rev_ok
    report(10, ok, f"Pontryagin residual/scale {worst:.1e}, gap identity {gap_ok}, reversed {rev_ok}")
    assert ok


def test_criterion_11_jackson(report):
    entries = unit_interval(POSITIVE) + [ENVELOPE]
    held = True
    for q in (0.5, 0.9, 0.99):
        for entry in entries:
            f, g, _, _ = pair(entry)
            for kind in (Min(), Max(), Power(2.0), Power(0.0)):
                held &= jackson_refine(kind, f, g, q).holds
    f, g, _, _ = pair(ENVELOPE)
    jq = jackson_refine(Min(), f, g, 0.99)
    riemann = (1 / 36, 7 / 144, 1 / 9)
    rel = max(abs(u - v) / v for u, v in zip((jq.lower, jq.middle, jq.upper), riemann))
    ok = held and rel <= 0.02
    report(11, ok, f"chains hold {held}, q=0.99 max relative deviation {rel:.3%}")
    assert ok


@pytest.mark.parametrize("entry", POSITIVE, ids=lambda e: f"{e[0]}|{e[1]}")
def test_battery_integral_chain_all_catalog_means(entry):
    # supporting check for the integral refinement over the battery
    f, g, a, b = pair(entry)
    quad = QuadratureSpec(a, b, rel_tol=1e-10)
    for kind in CATALOG:
        if kind == CATALOG[8]:  # gini:2:1 fails monotonicity, see test_means
            continue
        assert integral_refine(kind, f, g, quad).holds, str(kind)
