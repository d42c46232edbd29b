import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanbounds.errors import AdmissibilityError, DomainError, LengthMismatch, ZeroVectorError
from meanbounds.means import (CATALOG, Complementary, Max, Min, Power, Rado, WeightedGeometric,
                              check_axioms)
from meanbounds.refine_discrete import (RefinementChain, SequencePair, aczel_refine,
                                        cde_condition_check, cde_refine, dft, dft_uncertainty,
                                        mean_and_complement, pontryagin_identity_residual,
                                        support_size)

GOOD_MEANS = [k for k in CATALOG if check_axioms(k, samples=200, seed=0).ok]
vals = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def exact_chain(xs, ys, m2, mc2):
    xs = [Fraction(v) for v in xs]
    ys = [Fraction(v) for v in ys]
    lower = sum(x * y for x, y in zip(xs, ys)) ** 2
    middle = sum(m2(x, y) for x, y in zip(xs, ys)) * sum(mc2(x, y) for x, y in zip(xs, ys))
    upper = sum(x * x for x in xs) * sum(y * y for y in ys)
    return lower, middle, upper


def test_milne_exact():
    milne = (lambda x, y: (x * x + y * y) / 2, lambda x, y: 2 * x * x * y * y / (x * x + y * y))
    lo, mid, up = exact_chain([1, 2], [1, 3], *milne)
    assert (lo, mid, up) == (49, Fraction(1275, 26), 50)
    c = cde_refine(Power(2.0), SequencePair.of([1, 2], [1, 3]))
    assert (c.lower, c.upper) == (49.0, 50.0)
    assert c.middle == pytest.approx(float(mid), rel=1e-15)
    assert c.holds


def test_harmonic_exact_oracle():
    # M = arithmetic, M* = harmonic: both squared sums are rational
    xs, ys = [1, 2, 5], [3, 1, 4]
    lo, mid, up = exact_chain(xs, ys, lambda x, y: ((x + y) / 2) ** 2,
                              lambda x, y: (2 * x * y / (x + y)) ** 2)
    c = cde_refine(Power(1.0), SequencePair.of(xs, ys))
    for got, want in zip((c.lower, c.middle, c.upper), (lo, mid, up)):
        assert got == pytest.approx(float(want), rel=1e-15)


def test_proportional_sequences_give_equality():
    for kind in GOOD_MEANS:
        c = cde_refine(kind, SequencePair.of([1, 1, 1], [1, 1, 1]))
        assert c.lower == pytest.approx(9) and c.middle == pytest.approx(9) and c.upper == pytest.approx(9)


def test_callebaut_alpha_one():
    c = cde_refine(WeightedGeometric(1.0), SequencePair.of([1, 2], [2, 1]))
    assert (c.lower, c.middle, c.upper) == (16.0, 25.0, 25.0)


def test_callebaut_family():
    pair = SequencePair.of([1, 2, 3], [3, 1, 2])
    mids = [cde_refine(WeightedGeometric(0.5 + a / 2), pair).middle for a in np.linspace(0, 1, 6)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(mids, mids[1:]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(vals, vals), min_size=1, max_size=50), st.sampled_from(GOOD_MEANS))
def test_cde_chain_holds(pairs, kind):
    xs, ys = zip(*pairs)
    assert cde_refine(kind, SequencePair.of(xs, ys)).holds


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(vals, vals), min_size=1, max_size=20))
def test_min_equals_max(pairs):
    xs, ys = zip(*pairs)
    a = cde_refine(Min(), SequencePair.of(xs, ys))
    b = cde_refine(Max(), SequencePair.of(xs, ys))
    assert a.middle == pytest.approx(b.middle, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(vals, vals), min_size=1, max_size=20),
       st.floats(0.1, 10), st.floats(0.1, 10), st.sampled_from(GOOD_MEANS))
def test_scaling(pairs, c, d, kind):
    xs, ys = zip(*pairs)
    base = cde_refine(kind, SequencePair.of(xs, ys))
    scaled = cde_refine(kind, SequencePair.of([c * x for x in xs], [d * y for y in ys]))
    k = c * c * d * d
    assert scaled.lower == pytest.approx(k * base.lower, rel=1e-12)
    assert scaled.upper == pytest.approx(k * base.upper, rel=1e-12)
    # the middle is only scale-free when M is homogeneous in each argument jointly
    if c == d:
        assert scaled.middle == pytest.approx(k * base.middle, rel=1e-11)


def test_gini_2_1_breaks_the_chain():
    from meanbounds.means import Gini
    rng = np.random.default_rng(1)
    fails = sum(not cde_refine(Gini(2.0, 1.0), SequencePair.of(*rng.uniform(0, 10, (2, 5)))).holds
                for _ in range(200))
    assert fails > 0


def test_zero_entries():
    c = cde_refine(Power(2.0), SequencePair.of([0, 1], [1, 0]))
    assert (c.lower, c.middle, c.upper) == (0.0, 0.0, 1.0)
    m, mc = mean_and_complement(Min(), np.array([0.0, 2.0]), np.array([0.0, 3.0]))
    assert list(m) == [0, 2] and list(mc) == [0, 3]
    with pytest.raises(DomainError):
        cde_refine(Power(-1.0), SequencePair.of([0, 1], [1, 1]))
    with pytest.raises(DomainError):
        cde_refine(Rado(-1.0), SequencePair.of([0, 1], [0, 1]))


def test_input_validation():
    with pytest.raises(LengthMismatch):
        SequencePair.of([1, 2], [1])
    with pytest.raises(DomainError):
        SequencePair.of([-1, 2], [1, 1])
    with pytest.raises(DomainError):
        cde_refine(Power(1.0), SequencePair.of([], []))


def test_complementary_wrapper_same_middle():
    pair = SequencePair.of([1, 2, 7], [4, 0.5, 3])
    for kind in (Power(1.0), Rado(0.0)):
        assert cde_refine(Complementary(kind), pair).middle == pytest.approx(cde_refine(kind, pair).middle)


@pytest.mark.parametrize("f,hom,hyb", [
    (lambda x, y: x * x + y * y, True, True),
    (lambda x, y: x ** 1.5 * y ** 0.5, True, True),
    (lambda x, y: x ** 3 / y, True, False),
    (lambda x, y: x ** 3 + y, False, None),
])
def test_cde_condition(f, hom, hyb):
    r = cde_condition_check(f, samples=500, seed=0)
    assert r["homogeneous"] is hom
    if hyb is not None:
        assert r["hybrid_condition"] is hyb


def test_aczel_examples():
    c = aczel_refine(Power(2.0), [3, 1, 1], [3, 1, 1])
    assert (c.lower, c.middle, c.upper) == pytest.approx((49, 49, 49))
    c = aczel_refine(Power(2.0), [4, 1, 2], [5, 3, 1])
    assert c.lower == 165 and c.upper == 225
    # exact middle: (20 - sqrt(A))^2 with A the tail Milne middle
    tail_mid = float(Fraction(1, 1) * ((Fraction(1 + 9, 2) + Fraction(4 + 1, 2))
                                       * (Fraction(2 * 9, 10) + Fraction(2 * 4, 5))))
    assert c.middle == pytest.approx((20 - tail_mid ** 0.5) ** 2, rel=1e-14)
    assert c.holds


def test_aczel_inadmissible():
    with pytest.raises(AdmissibilityError):
        aczel_refine(Power(2.0), [1, 1, 1], [5, 1, 1])
    with pytest.raises(LengthMismatch):
        aczel_refine(Power(2.0), [3, 1], [3, 1, 1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(vals, vals), min_size=1, max_size=10), st.floats(1.0, 3.0), st.floats(1.0, 3.0))
def test_aczel_plain_inequality(tail, sx, sy):
    xs, ys = zip(*tail)
    x0 = sx * float(np.sqrt(np.sum(np.square(xs)))) * (1 + 1e-12)
    y0 = sy * float(np.sqrt(np.sum(np.square(ys)))) * (1 + 1e-12)
    c = aczel_refine(Power(1.0), [x0, *xs], [y0, *ys])
    assert c.holds
    if sx > 1.01 and sy > 1.01:  # away from the fully cancelling boundary
        assert c.lower <= c.upper * (1 + 1e-9)


def test_dft_examples():
    r = dft_uncertainty([1, 0, 0, 0])
    assert (r["support_a"], r["support_b"], r["product"], r["equality"]) == (1, 4, 4, True)
    r = dft_uncertainty([1, 1, 1, 1])
    assert (r["support_a"], r["support_b"], r["equality"]) == (4, 1, True)
    r = dft_uncertainty([1, 1, 0, 0])
    assert (r["support_a"], r["support_b"], r["product"]) == (2, 3, 6)
    assert abs(r["transform"][2]) < 1e-15


def test_dft_matches_numpy():
    rng = np.random.default_rng(0)
    a = rng.normal(size=12) + 1j * rng.normal(size=12)
    np.testing.assert_allclose(dft(a), np.fft.fft(a) / np.sqrt(12), atol=1e-13)


def test_dft_equality_cases_are_flat():
    # equality forces the nonzero entries on one side to share one magnitude
    rng = np.random.default_rng(4)
    seen = 0
    for n in range(2, 7):
        for mask in itertools.product([0, 1], repeat=n):
            if not any(mask):
                continue
            a = np.where(mask, rng.normal(size=n) + 1j * rng.normal(size=n), 0)
            r = dft_uncertainty(a)
            if not r["equality"]:
                continue
            seen += 1
            flat = []
            for v in (a, r["transform"]):
                mags = np.abs(v)[np.abs(v) > 1e-9 * np.abs(v).max()]
                flat.append(np.ptp(mags) <= 1e-9 * mags.max())
            assert any(flat)
    assert seen > 0


def test_dft_errors():
    with pytest.raises(ZeroVectorError):
        dft_uncertainty([0, 0, 0])
    with pytest.raises(LengthMismatch):
        dft_uncertainty([1, 2, 3], n=4)
    assert support_size(np.array([1.0, 1e-17, 0.0])) == 1


def test_pontryagin_examples():
    r = pontryagin_identity_residual([1, 0, 0, 0], [0, 1, 0, 0])
    assert r["form_value"] == -1 and r["squares_value"] == -1
    r = pontryagin_identity_residual([1, 1, 1, 1], [1, 1, 1, 1])
    assert r["form_value"] == 0 and r["squares_value"] == 0


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=8, max_size=8))
def test_pontryagin_identity(v):
    x, y = v[:4], v[4:]
    r = pontryagin_identity_residual(x, y)
    scale = (sum(t * t for t in x) + 1) * (sum(t * t for t in y) + 1)
    assert r["residual"] <= 1e-10 * scale


def test_chain_build_verdicts():
    c = RefinementChain.build(1.0, 2.0, 1.5)
    assert c.lower_holds and not c.upper_holds and not c.holds
    assert c.slack_upper == -0.5
    assert RefinementChain.build(1.0, 1.0 + 1e-12, 1.0).holds
    assert set(c.as_dict()) == {"lower", "middle", "upper", "lower_holds", "upper_holds",
                                "slack_lower", "slack_upper"}
