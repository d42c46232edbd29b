"""The AM-GM inequality |s| <= |(s+1)/2|^2 over the complex plane.

Equality holds on the quartic
x^4 + y^4 + 2x^2y^2 + 4x^3 + 4xy^2 - 10x^2 - 14y^2 + 4x + 1 = 0,
whose polar form is r = c +- sqrt(c^2 - 1) with c = 2 - cos(phi).

Region names follow the sign of rhs - lhs:
``outside`` means the inequality holds strictly (the unbounded region and
the small region around the origin enclosed by the inner loop), ``inside``
means the reversed inequality holds strictly (the crescent between the two
loops), and ``boundary`` is the curve itself up to the tolerance.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"
PLUS = "plus"
MINUS = "minus"


@dataclass(frozen=True)
class PointClass:
    s: complex
    lhs: float
    rhs: float
    region: str

    @property
    def holds(self) -> bool:
        return self.region != INSIDE


@dataclass(frozen=True)
class CurvePoint:
    phi: float
    branch: str
    r: float
    x: float
    y: float

    @property
    def residual(self) -> float:
        return quartic_residual(self.x, self.y)

    @property
    def scaled_residual(self) -> float:
        return abs(self.residual) / (1.0 + self.x ** 4 + self.y ** 4)


def classify_point(s: complex, tol: float = 1e-12) -> PointClass:
    if not tol > 0:
        raise ValueError("tol must be positive")
    s = complex(s)
    lhs = abs(s)
    rhs = abs((s + 1.0) / 2.0) ** 2
    if abs(lhs - rhs) <= tol * (1.0 + lhs):
        region = BOUNDARY
    elif rhs > lhs:
        region = OUTSIDE
    else:
        region = INSIDE
    return PointClass(s, lhs, rhs, region)


def curve_point(phi: float, branch: str) -> CurvePoint:
    if branch not in (PLUS, MINUS):
        raise ValueError(f"branch must be {PLUS!r} or {MINUS!r}")
    c = 2.0 - math.cos(phi)
    root = math.sqrt(max(c * c - 1.0, 0.0))
    # the minus branch is 1 / (plus branch), which avoids cancellation near phi = 0
    outer = c + root
    r = outer if branch == PLUS else 1.0 / outer
    return CurvePoint(phi, branch, r, r * math.cos(phi), r * math.sin(phi))


def quartic_residual(x: float, y: float) -> float:
    x2 = x * x
    y2 = y * y
    return x2 * x2 + y2 * y2 + 2 * x2 * y2 + 4 * x2 * x + 4 * x * y2 - 10 * x2 - 14 * y2 + 4 * x + 1


def sample_curve(n: int) -> list:
    """n points on each branch at phi = 2 pi k / n."""
    if n < 4:
        raise ValueError("n must be at least 4")
    pts = []
    for branch in (PLUS, MINUS):
        for k in range(n):
            pts.append(curve_point(2.0 * math.pi * k / n, branch))
    return pts


@dataclass(frozen=True)
class DiskClass:
    s: complex
    lhs: float
    rhs: float
    position: str  # relative to the unit circle
    holds: bool


def classify_unit_disk(s: complex, tol: float = 1e-12) -> DiskClass:
    """|s| <= ((|s| + 1)/2)^2, which holds everywhere with equality iff |s| = 1."""
    m = abs(complex(s))
    rhs = ((m + 1.0) / 2.0) ** 2
    if abs(m - 1.0) <= tol:
        position = BOUNDARY
    elif m < 1.0:
        position = INSIDE
    else:
        position = OUTSIDE
    return DiskClass(complex(s), m, rhs, position, m <= rhs + tol * (1.0 + m))


def curve_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["phi", "branch", "x", "y", "residual"])
    for p in points:
        w.writerow([f"{p.phi:.17g}", p.branch, f"{p.x:.17g}", f"{p.y:.17g}", f"{p.residual:.17g}"])
    return buf.getvalue()
