import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanbounds.complexify import (BOUNDARY, INSIDE, MINUS, OUTSIDE, PLUS, classify_point,
                                   classify_unit_disk, curve_csv, curve_point, quartic_residual,
                                   sample_curve)

S2, S3 = math.sqrt(2.0), math.sqrt(3.0)


def test_quartic_values():
    assert quartic_residual(1.0, 0.0) == 0.0
    assert quartic_residual(0.0, 0.0) == 1.0
    x = -3 - 2 * S2
    assert abs(quartic_residual(x, 0.0)) <= 1e-9 * (1 + x ** 4)


def test_quartic_matches_modulus_form():
    # |s|^2 = |(s+1)/2|^4 expands to the quartic divided by 16
    rng = np.random.default_rng(0)
    for x, y in rng.uniform(-6, 6, (200, 2)):
        s = complex(x, y)
        want = 16 * abs(s) ** 2 - abs(s + 1) ** 4
        assert -quartic_residual(x, y) == pytest.approx(want, rel=1e-11, abs=1e-9)


@pytest.mark.parametrize("branch", [PLUS, MINUS])
def test_curve_point_at_zero(branch):
    p = curve_point(0.0, branch)
    assert (p.r, p.x, p.y) == (1.0, 1.0, 0.0)


def test_axis_crossings():
    p = curve_point(math.pi, PLUS)
    assert p.x == pytest.approx(-3 - 2 * S2, abs=1e-12) and abs(p.y) < 1e-12
    q = curve_point(math.pi, MINUS)
    assert q.x == pytest.approx(-3 + 2 * S2, abs=1e-12)
    for branch, r in ((PLUS, 2 + S3), (MINUS, 2 - S3)):
        up = curve_point(math.pi / 2, branch)
        down = curve_point(3 * math.pi / 2, branch)
        assert up.y == pytest.approx(r, abs=1e-12) and down.y == pytest.approx(-r, abs=1e-12)
        assert abs(up.x) < 1e-12


def test_branches_are_reciprocal():
    for phi in np.linspace(0, 2 * math.pi, 37):
        assert curve_point(phi, PLUS).r * curve_point(phi, MINUS).r == pytest.approx(1.0, rel=1e-15)


def test_sampled_residuals():
    pts = sample_curve(720)
    assert len(pts) == 1440
    assert max(p.scaled_residual for p in pts) <= 1e-9


def test_conjugation_symmetry():
    pts = sample_curve(360)
    by_key = {(p.branch, round(p.x, 12), round(p.y, 12)) for p in pts}
    for p in pts:
        assert (p.branch, round(p.x, 12), round(-p.y + 0.0, 12)) in by_key or abs(p.y) < 1e-12


def test_sample_curve_needs_four():
    with pytest.raises(ValueError):
        sample_curve(3)


@pytest.mark.parametrize("s,region", [
    (1, BOUNDARY), (-6, OUTSIDE), (-0.1, OUTSIDE), (-0.2, INSIDE), (-1, INSIDE), (0.5j, INSIDE),
    (3j, INSIDE), (5j, OUTSIDE), (0.2j, OUTSIDE), (10, OUTSIDE),
])
def test_classify_examples(s, region):
    p = classify_point(s)
    assert p.region == region
    assert p.holds == (region != INSIDE)


def test_classify_real_axis_intervals():
    # on the real axis the inequality holds exactly off (-3-2 sqrt2, -3+2 sqrt2)
    lo, hi = -3 - 2 * S2, -3 + 2 * S2
    for x in np.linspace(-8, 3, 1101):
        c = classify_point(x)
        if lo + 1e-9 < x < hi - 1e-9:
            assert c.region == INSIDE
        elif x < lo - 1e-9 or x > hi + 1e-9:
            assert c.holds


def test_region_flips_across_curve():
    rng = np.random.default_rng(7)
    for phi in rng.uniform(0.01, 2 * math.pi - 0.01, 100):
        for branch in (PLUS, MINUS):
            r = curve_point(phi, branch).r
            a = classify_point(r * (1 - 1e-3) * complex(math.cos(phi), math.sin(phi))).region
            b = classify_point(r * (1 + 1e-3) * complex(math.cos(phi), math.sin(phi))).region
            assert {a, b} == {INSIDE, OUTSIDE}


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20))
def test_classify_consistent_with_quartic(x, y):
    c = classify_point(complex(x, y))
    q = quartic_residual(x, y)
    if abs(q) > 1e-6 * (1 + x ** 4 + y ** 4):
        # quartic < 0 exactly where |s| > |(s+1)/2|^2
        assert (c.region == INSIDE) == (q < 0)


def test_classify_tolerance():
    with pytest.raises(ValueError):
        classify_point(1.0, tol=0.0)
    assert classify_point(1 + 1e-9, tol=1e-6).region == BOUNDARY


def test_unit_disk():
    assert classify_unit_disk(complex(math.cos(1), math.sin(1))).position == BOUNDARY
    d = classify_unit_disk(2)
    assert d.position == OUTSIDE and d.holds and (d.lhs, d.rhs) == (2.0, 2.25)
    d = classify_unit_disk(0.5)
    assert d.position == INSIDE and d.holds and d.rhs == 0.5625


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_modulus_form_always_holds(s):
    assert classify_unit_disk(s).holds


def test_csv_export():
    text = curve_csv(sample_curve(4))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["phi", "branch", "x", "y", "residual"]
    assert len(rows) == 9
    assert rows[1][:4] == ["0", "plus", "1", "0"]
    assert curve_csv(sample_curve(4)) == text
