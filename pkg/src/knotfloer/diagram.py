"""Doubly-pointed genus-one Heegaard diagrams on the flat torus R^2/Z^2.

A diagram is two PL loops (``alpha`` and ``beta``) and two basepoints
(``w`` and ``z``).  A loop is a list of plane vertices together with an
integer period vector: the loop runs through the vertices in order and then
closes up at ``vertices[0] + period``.

Diagram file format (JSON, rationals written as strings)::

    {"alpha": [["1/6", "1/3"], ...], "alpha_period": [0, 1],
     "beta":  [["0", "0"]],          "beta_period":  [1, 0],
     "w": ["1/3", "1/12"], "z": ["2/3", "11/12"]}
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterator

from . import geometry as geo
from .errors import ParseError, UnknownDiagram, ValidationError
from .geometry import Point

BUILTIN_NAMES = ("unknot", "trefoil_left", "trefoil_right", "knot_9_42", "figure_eight")

# reason codes
SELF_INTERSECTING = "SelfIntersecting"
NOT_TRANSVERSE = "NotTransverse"
BASEPOINT_ON_CURVE = "BasepointOnCurve"
INTERSECTION_NUMBER_NOT_UNIT = "IntersectionNumberNotUnit"
NULL_HOMOTOPIC_CURVE = "NullHomotopicCurve"
COINCIDENT_BASEPOINTS = "CoincidentBasepoints"
DEGENERATE_LOOP = "DegenerateLoop"


class RationalPoint(tuple):
    """A point of the torus, with coordinates reduced into [0, 1)."""

    def __new__(cls, x, y):
        x, y = geo.frac(x), geo.frac(y)
        return super().__new__(cls, (x - math.floor(x), y - math.floor(y)))

    @property
    def x(self) -> Fraction:
        return self[0]

    @property
    def y(self) -> Fraction:
        return self[1]


@dataclass(frozen=True)
class PLLoop:
    vertices: tuple[Point, ...]
    period: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple(geo.point(*v) for v in self.vertices)
        )
        object.__setattr__(self, "period", (int(self.period[0]), int(self.period[1])))
        if not self.vertices:
            raise ValueError("a loop needs at least one vertex")

    @property
    def period_vector(self) -> Point:
        return (Fraction(self.period[0]), Fraction(self.period[1]))

    def segments(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        out = [(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]
        out.append((vs[-1], geo.add(vs[0], self.period_vector)))
        return out

    def reflected(self) -> "PLLoop":
        return PLLoop(
            tuple((x, -y) for x, y in self.vertices), (self.period[0], -self.period[1])
        )

    def to_json(self) -> list:
        return [[geo.format_fraction(x), geo.format_fraction(y)] for x, y in self.vertices]


@dataclass(frozen=True)
class Violation:
    reason: str
    detail: str = ""
    elements: tuple = field(default=(), compare=False)

    def __str__(self):
        return f"{self.reason}: {self.detail}" if self.detail else self.reason


@dataclass(frozen=True)
class Diagram:
    alpha: PLLoop
    beta: PLLoop
    w: RationalPoint
    z: RationalPoint
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "w", RationalPoint(*self.w))
        object.__setattr__(self, "z", RationalPoint(*self.z))

    def reflected(self) -> "Diagram":
        """Mirror image: negate every y coordinate and swap the basepoints."""
        name = f"mirror({self.name})" if self.name else None
        return Diagram(
            self.alpha.reflected(),
            self.beta.reflected(),
            RationalPoint(self.z.x, -self.z.y),
            RationalPoint(self.w.x, -self.w.y),
            name=name,
        )

    def to_json(self) -> dict:
        out = {
            "alpha": self.alpha.to_json(),
            "alpha_period": list(self.alpha.period),
            "beta": self.beta.to_json(),
            "beta_period": list(self.beta.period),
            "w": [geo.format_fraction(c) for c in self.w],
            "z": [geo.format_fraction(c) for c in self.z],
        }
        if self.name:
            out["name"] = self.name
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


# --------------------------------------------------------------------------
# torus-periodic segment tests

def _translations(a: tuple[Point, Point], b: tuple[Point, Point]) -> Iterator[Point]:
    """Integer vectors T such that the bounding boxes of a and b+T meet."""
    ax0, ay0, ax1, ay1 = geo.bbox(a)
    bx0, by0, bx1, by1 = geo.bbox(b)
    for u in range(math.ceil(ax0 - bx1), math.floor(ax1 - bx0) + 1):
        for v in range(math.ceil(ay0 - by1), math.floor(ay1 - by0) + 1):
            yield (Fraction(u), Fraction(v))


def _shift(seg, t):
    return (geo.add(seg[0], t), geo.add(seg[1], t))


def _self_intersections(loop: PLLoop) -> list[tuple]:
    segs = loop.segments()
    m = len(segs)
    pv = loop.period_vector
    zero = (Fraction(0), Fraction(0))
    bad = []
    for i in range(m):
        for j in range(i, m):
            for t in _translations(segs[i], segs[j]):
                if i == j and t == zero:
                    continue
                # is the translated copy of segment j attached to segment i?
                ends_i = j == (i + 1) % m and t == (pv if i == m - 1 else zero)
                ends_j = i == (j + 1) % m and geo.add(t, pv if j == m - 1 else zero) == zero
                res = geo.segment_intersection(*segs[i], *_shift(segs[j], t))
                if res is None:
                    continue
                if ends_i or ends_j:
                    if res == "overlap":
                        ri = geo.sub(segs[i][1], segs[i][0])
                        rj = geo.sub(segs[j][1], segs[j][0])
                        if geo.dot(ri, rj) > 0:
                            continue
                    else:
                        shared = segs[i][1] if ends_i else segs[i][0]
                        if res.point == shared:
                            continue
                bad.append((i, j, t))
    return bad


def intersections(d: Diagram) -> tuple[list[tuple], list[tuple]]:
    """Crossings of alpha and beta on the torus.

    Returns ``(crossings, defects)``; a crossing is ``(i, j, T, point, sign)``
    meaning segment i of alpha meets segment j of beta translated by T.
    Defects are non-transverse contacts.
    """
    crossings, defects = [], []
    asegs, bsegs = d.alpha.segments(), d.beta.segments()
    for i, sa in enumerate(asegs):
        for j, sb in enumerate(bsegs):
            for t in _translations(sa, sb):
                res = geo.segment_intersection(*sa, *_shift(sb, t))
                if res is None:
                    continue
                if res == "overlap" or res.t in (0, 1) or res.s in (0, 1):
                    defects.append((i, j, t))
                    continue
                ra = geo.sub(sa[1], sa[0])
                rb = geo.sub(sb[1], sb[0])
                sign = 1 if geo.cross(ra, rb) > 0 else -1
                crossings.append((i, j, t, res.point, sign))
    return crossings, defects


def _on_loop(p: Point, loop: PLLoop) -> bool:
    for seg in loop.segments():
        for t in _translations((p, p), seg):
            if geo.point_on_segment(p, *_shift(seg, t)):
                return True
    return False


def algebraic_intersection(d: Diagram) -> int:
    return int(geo.cross(d.alpha.period_vector, d.beta.period_vector))


def validate(d: Diagram) -> list[Violation]:
    """All violated invariants of ``d`` (empty list for a valid diagram)."""
    out: list[Violation] = []
    for label, loop in (("alpha", d.alpha), ("beta", d.beta)):
        if loop.period == (0, 0):
            out.append(Violation(NULL_HOMOTOPIC_CURVE, f"{label} has zero period", (label,)))
            continue
        segs = loop.segments()
        if any(a == b for a, b in segs):
            out.append(Violation(DEGENERATE_LOOP, f"{label} repeats a vertex", (label,)))
            continue
        if math.gcd(*loop.period) != 1:
            out.append(
                Violation(SELF_INTERSECTING, f"{label} period {loop.period} is not primitive", (label,))
            )
            continue
        bad = _self_intersections(loop)
        if bad:
            out.append(
                Violation(
                    SELF_INTERSECTING,
                    f"{label} meets itself ({len(bad)} contact(s))",
                    (label,) + tuple(bad[:4]),
                )
            )
    if any(v.reason in (NULL_HOMOTOPIC_CURVE, DEGENERATE_LOOP) for v in out):
        return out

    _, defects = intersections(d)
    if defects:
        out.append(
            Violation(
                NOT_TRANSVERSE,
                f"{len(defects)} non-transverse contact(s) between alpha and beta",
                tuple(defects[:4]),
            )
        )
    if abs(algebraic_intersection(d)) != 1:
        out.append(
            Violation(
                INTERSECTION_NUMBER_NOT_UNIT,
                f"alpha.beta = {algebraic_intersection(d)}",
            )
        )
    for label, p in (("w", d.w), ("z", d.z)):
        for cl, loop in (("alpha", d.alpha), ("beta", d.beta)):
            if _on_loop(p, loop):
                out.append(Violation(BASEPOINT_ON_CURVE, f"{label} lies on {cl}", (label, cl)))
    if d.w == d.z:
        out.append(Violation(COINCIDENT_BASEPOINTS, "w = z", ("w", "z")))
    return out


def check(d: Diagram) -> Diagram:
    problems = validate(d)
    if problems:
        raise ValidationError(problems)
    return d


# --------------------------------------------------------------------------
# parsing

def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: expected a rational string or integer, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: cannot parse {value!r} as a rational") from exc


def _parse_point(value, where: str) -> Point:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ParseError(f"{where}: expected a pair of coordinates")
    return (_parse_rational(value[0], where), _parse_rational(value[1], where))


def _parse_period(value, where: str) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in value)
    ):
        raise ParseError(f"{where}: expected a pair of integers")
    return (value[0], value[1])


def diagram_from_json(obj, validate_result: bool = True) -> Diagram:
    if not isinstance(obj, dict):
        raise ParseError("diagram must be a JSON object")
    for key in ("alpha", "alpha_period", "beta", "beta_period", "w", "z"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}")
    loops = {}
    for label in ("alpha", "beta"):
        verts = obj[label]
        if not isinstance(verts, list) or not verts:
            raise ParseError(f"{label}: expected a non-empty list of vertices")
        pts = tuple(_parse_point(v, f"{label}[{k}]") for k, v in enumerate(verts))
        loops[label] = PLLoop(pts, _parse_period(obj[f"{label}_period"], f"{label}_period"))
    d = Diagram(
        loops["alpha"],
        loops["beta"],
        _parse_point(obj["w"], "w"),
        _parse_point(obj["z"], "z"),
        name=obj.get("name"),
    )
    return check(d) if validate_result else d


def parse_diagram(text: bytes | str, validate_result: bool = True) -> Diagram:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("diagram file is not UTF-8") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return diagram_from_json(obj, validate_result)


def builtin(name: str) -> Diagram:
    if name not in BUILTIN_NAMES:
        raise UnknownDiagram(name)
    data = resources.files("knotfloer.data").joinpath(f"{name}.json").read_bytes()
    d = parse_diagram(data)
    if d.name is None:
        d = Diagram(d.alpha, d.beta, d.w, d.z, name=name)
    return d


def load(source: str) -> Diagram:
    """Load a built-in by name, ``-`` for stdin, or a path to a JSON file."""
    import sys

    if source in BUILTIN_NAMES:
        return builtin(source)
    if source == "-":
        return parse_diagram(sys.stdin.buffer.read())
    with open(source, "rb") as fh:
        return parse_diagram(fh.read())
