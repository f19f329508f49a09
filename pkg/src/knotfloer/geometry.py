"""Exact planar primitives on rational points (pairs of Fractions)."""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

Point = tuple[Fraction, Fraction]


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string 'p/q' or an int")
    return Fraction(value)


def point(x, y) -> Point:
    return (frac(x), frac(y))


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def scale(p: Point, s) -> Point:
    return (p[0] * s, p[1] * s)


def cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


class Crossing(NamedTuple):
    """Intersection of segments P + t r and Q + s u at parameters (t, s)."""

    t: Fraction
    s: Fraction
    point: Point


def segment_intersection(p0: Point, p1: Point, q0: Point, q1: Point):
    """Classify how two closed segments meet.

    Returns ``None`` if they are disjoint, ``"overlap"`` if they are
    collinear and share more than nothing, and otherwise a :class:`Crossing`.
    """
    r = sub(p1, p0)
    u = sub(q1, q0)
    w = sub(q0, p0)
    denom = cross(r, u)
    if denom == 0:
        if cross(w, r) != 0:
            return None
        rr = dot(r, r)
        t0 = dot(w, r) / rr
        t1 = dot(sub(q1, p0), r) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return None
        return "overlap"
    t = cross(w, u) / denom
    s = cross(w, r) / denom
    if 0 <= t <= 1 and 0 <= s <= 1:
        return Crossing(t, s, (p0[0] + t * r[0], p0[1] + t * r[1]))
    return None


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    ab = sub(b, a)
    ap = sub(p, a)
    if cross(ab, ap) != 0:
        return False
    d = dot(ap, ab)
    return 0 <= d <= dot(ab, ab)


def squared_distance_to_segment(p: Point, a: Point, b: Point) -> Fraction:
    ab = sub(b, a)
    ap = sub(p, a)
    denom = dot(ab, ab)
    t = dot(ap, ab) / denom
    if t <= 0:
        return dot(ap, ap)
    if t >= 1:
        bp = sub(p, b)
        return dot(bp, bp)
    foot = (a[0] + t * ab[0], a[1] + t * ab[1])
    d = sub(p, foot)
    return dot(d, d)


def winding_number(polygon: Sequence[Point], p: Point) -> int:
    """Winding number of the closed polygon around ``p`` (p not on it)."""
    wn = 0
    px, py = p
    n = len(polygon)
    for k in range(n):
        ax, ay = polygon[k]
        bx, by = polygon[(k + 1) % n]
        if ay <= py:
            if by > py and (bx - ax) * (py - ay) - (px - ax) * (by - ay) > 0:
                wn += 1
        elif by <= py and (bx - ax) * (py - ay) - (px - ax) * (by - ay) < 0:
            wn -= 1
    return wn


def signed_area(polygon: Sequence[Point]) -> Fraction:
    total = Fraction(0)
    n = len(polygon)
    for k in range(n):
        total += cross(polygon[k], polygon[(k + 1) % n])
    return total / 2


def bbox(points: Sequence[Point]):
    xs = [q[0] for q in points]
    ys = [q[1] for q in points]
    return min(xs), min(ys), max(xs), max(ys)


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
