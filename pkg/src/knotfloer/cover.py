"""Lift a genus-one diagram to the plane and count disks there.

One lift of each curve is taken.  Because the two period vectors form a
lattice basis, the lifts meet in finitely many points, one over each
intersection point of the torus.  The bounded components of the plane minus
the two lifts are traced out as faces; a Whitney disk between two lifted
points is the winding-number function of the loop made from the alpha arc
and the beta arc joining them.

All arithmetic is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import geometry as geo
from .diagram import Diagram, check, intersections
from .errors import NonIntegralMaslov, StabilizationLimitExceeded, WindowTooSmall
from .geometry import Point

# half-edge labels at a lifted intersection point
A_FWD, A_BWD, B_FWD, B_BWD = range(4)


@dataclass(frozen=True)
class LiftedPoint:
    index: int  # position along the alpha lift
    point: Point
    sign: int
    alpha_pos: tuple[int, Fraction]
    beta_pos: tuple[int, Fraction]
    beta_order: int
    ccw: tuple[int, int, int, int]  # half-edge labels in counter-clockwise order
    corners: tuple  # face index (or None if unbounded) of sector k = (ccw[k], ccw[k+1])
    sector_samples: tuple[Point, ...]


@dataclass(frozen=True)
class Face:
    index: int
    sample: Point
    boundary: tuple[Point, ...]
    corners: tuple[tuple[int, int], ...]  # (point index, sector)
    w_count: int
    z_count: int


@dataclass(frozen=True)
class DiskClass:
    source: int
    target: int
    multiplicities: tuple[int, ...]  # one entry per face of the arrangement
    n_w: int
    n_z: int
    maslov: int

    @property
    def is_positive(self) -> bool:
        return all(m >= 0 for m in self.multiplicities)

    def key(self):
        return (self.source, self.target, self.n_w, self.n_z, self.maslov)


@dataclass(frozen=True, eq=False)
class Arrangement:
    diagram: Diagram
    window_scale: int
    alpha_lift: tuple[Point, ...]
    beta_lift: tuple[Point, ...]
    alpha_period: Point
    beta_period: Point
    points: tuple[LiftedPoint, ...]
    faces: tuple[Face, ...]
    window: tuple[Fraction, Fraction, Fraction, Fraction]
    _beta_sequence: tuple[int, ...] = field(repr=False, default=())

    @property
    def w_lattice(self) -> tuple[int, ...]:
        return tuple(f.w_count for f in self.faces)

    @property
    def z_lattice(self) -> tuple[int, ...]:
        return tuple(f.z_count for f in self.faces)

    def __len__(self):
        return len(self.points)

    # -- arcs -------------------------------------------------------------
    def alpha_arc(self, i: int, j: int) -> list[Point]:
        return _arc(self.alpha_lift, self.points[i].alpha_pos, self.points[i].point,
                    self.points[j].alpha_pos, self.points[j].point)

    def beta_arc(self, i: int, j: int) -> list[Point]:
        return _arc(self.beta_lift, self.points[i].beta_pos, self.points[i].point,
                    self.points[j].beta_pos, self.points[j].point)

    def boundary_loop(self, source: int, target: int) -> list[Point]:
        """Alpha arc from source to target followed by beta arc back."""
        a = self.alpha_arc(source, target)
        b = self.beta_arc(target, source)
        return a[:-1] + b[:-1]

    @cached_property
    def _mu1(self):
        return tuple(_positive_mu1(self))

    def to_json(self) -> dict:
        f = geo.format_fraction
        return {
            "window_scale": self.window_scale,
            "window": [f(c) for c in self.window],
            "points": [
                {
                    "index": p.index,
                    "point": [f(c) for c in p.point],
                    "sign": p.sign,
                    "beta_order": p.beta_order,
                    "corners": list(p.corners),
                }
                for p in self.points
            ],
            "faces": [
                {
                    "index": fc.index,
                    "sample": [f(c) for c in fc.sample],
                    "corners": [list(c) for c in fc.corners],
                    "w": fc.w_count,
                    "z": fc.z_count,
                }
                for fc in self.faces
            ],
        }


def _arc(lift, pos_i, pt_i, pos_j, pt_j) -> list[Point]:
    """PL path along ``lift`` from the point at pos_i to the one at pos_j."""
    if pos_i <= pos_j:
        inner = list(lift[pos_i[0] + 1 : pos_j[0] + 1])
        return [pt_i] + inner + [pt_j]
    inner = list(lift[pos_j[0] + 1 : pos_i[0] + 1])
    return [pt_i] + inner[::-1] + [pt_j]


def _lift_vertices(loop, shift: Point, n: int) -> list[Point]:
    pv = loop.period_vector
    out = []
    for j in range(-n, n + 1):
        off = geo.add(shift, geo.scale(pv, j))
        out.extend(geo.add(v, off) for v in loop.vertices)
    out.append(geo.add(geo.add(loop.vertices[0], shift), geo.scale(pv, n + 1)))
    return out


def _segment_boxes(vs):
    return [
        (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
        for a, b in zip(vs, vs[1:])
    ]


def lift(d: Diagram, window_scale: int = 1) -> Arrangement:
    """Arrangement of one lift of alpha and one lift of beta.

    Each lift is truncated to ``2 * window_scale + 1`` periods.  Raises
    :class:`WindowTooSmall` if an intersection point falls in an outermost
    period of either truncated lift.
    """
    if window_scale < 1:
        raise ValueError("window_scale must be positive")
    check(d)
    crossings, _ = intersections(d)
    # shift alpha so that the first torus crossing is seen in period 0 of both lifts
    _, _, t, _, _ = min(crossings, key=lambda c: (c[0], c[1], c[2]))
    alpha_shift = (-t[0], -t[1])
    zero = (Fraction(0), Fraction(0))
    n = window_scale
    avs = _lift_vertices(d.alpha, alpha_shift, n)
    bvs = _lift_vertices(d.beta, zero, n)
    ma, mb = len(d.alpha.vertices), len(d.beta.vertices)

    aboxes, bboxes = _segment_boxes(avs), _segment_boxes(bvs)
    raw = []
    for i, (ax0, ay0, ax1, ay1) in enumerate(aboxes):
        for j, (bx0, by0, bx1, by1) in enumerate(bboxes):
            if ax1 < bx0 or bx1 < ax0 or ay1 < by0 or by1 < ay0:
                continue
            res = geo.segment_intersection(avs[i], avs[i + 1], bvs[j], bvs[j + 1])
            if res is None:
                continue
            if res == "overlap" or res.t in (0, 1) or res.s in (0, 1):
                raise ValueError("lifted curves are not transverse")
            raw.append(((i, res.t), (j, res.s), res.point))
    if not raw:
        raise WindowTooSmall("the lifts do not meet inside the window")
    last_a, last_b = len(avs) - 1, len(bvs) - 1
    for (i, _), (j, _), _ in raw:
        if i < ma or i >= last_a - ma or j < mb or j >= last_b - mb:
            raise WindowTooSmall(f"intersection in an outer period at window_scale={n}")
    raw.sort(key=lambda r: r[0])
    torus = {(p[0] % 1, p[1] % 1) for _, _, p in raw}
    if len(torus) != len(raw):
        raise ValueError("two lifted intersection points lie over the same torus point")

    beta_sorted = sorted(range(len(raw)), key=lambda k: raw[k][1])
    beta_order = [0] * len(raw)
    for r, k in enumerate(beta_sorted):
        beta_order[k] = r

    directions = []
    for (i, _), (j, _), _ in raw:
        da = geo.sub(avs[i + 1], avs[i])
        db = geo.sub(bvs[j + 1], bvs[j])
        directions.append((da, db))

    def half_edge_dir(k, h):
        da, db = directions[k]
        return {A_FWD: da, A_BWD: geo.scale(da, -1), B_FWD: db, B_BWD: geo.scale(db, -1)}[h]

    npts = len(raw)
    ccws = []
    signs = []
    for k in range(npts):
        da, db = directions[k]
        if geo.cross(da, db) > 0:
            ccws.append((A_FWD, B_FWD, A_BWD, B_BWD))
            signs.append(1)
        else:
            ccws.append((A_FWD, B_BWD, A_BWD, B_FWD))
            signs.append(-1)

    def target(k, h):
        if h == A_FWD:
            return k + 1 if k + 1 < npts else None
        if h == A_BWD:
            return k - 1 if k > 0 else None
        r = beta_order[k] + (1 if h == B_FWD else -1)
        return beta_sorted[r] if 0 <= r < npts else None

    reverse = {A_FWD: A_BWD, A_BWD: A_FWD, B_FWD: B_BWD, B_BWD: B_FWD}

    # sector sample points
    segs_all = list(zip(avs, avs[1:])) + list(zip(bvs, bvs[1:]))
    samples = []
    for k, ((i, _), (j, _), p) in enumerate(raw):
        own_a = (avs[i], avs[i + 1])
        own_b = (bvs[j], bvs[j + 1])
        d2 = min(geo.dot(geo.sub(p, q), geo.sub(p, q)) for q in own_a + own_b)
        for idx, seg in enumerate(segs_all):
            if seg == own_a or seg == own_b:
                continue
            sx0, sy0 = min(seg[0][0], seg[1][0]), min(seg[0][1], seg[1][1])
            sx1, sy1 = max(seg[0][0], seg[1][0]), max(seg[0][1], seg[1][1])
            # cheap lower bound on the distance before the exact computation
            dx = max(sx0 - p[0], 0, p[0] - sx1)
            dy = max(sy0 - p[1], 0, p[1] - sy1)
            if dx * dx + dy * dy >= d2:
                continue
            d2 = min(d2, geo.squared_distance_to_segment(p, *seg))
        pts = []
        for s in range(4):
            u = geo.add(half_edge_dir(k, ccws[k][s]), half_edge_dir(k, ccws[k][(s + 1) % 4]))
            uu = geo.dot(u, u)
            delta = Fraction(1)
            while 4 * delta * delta * uu >= d2:
                delta /= 2
            pts.append(geo.add(p, geo.scale(u, delta)))
        samples.append(tuple(pts))

    # trace faces, keeping the face on the left of each directed edge
    seen = set()
    face_walks = []
    for k in range(npts):
        for h in range(4):
            if (k, h) in seen or target(k, h) is None:
                continue
            walk = []
            cur = (k, h)
            bounded = True
            while cur not in seen:
                seen.add(cur)
                walk.append(cur)
                v, hh = cur
                nv = target(v, hh)
                if nv is None:
                    bounded = False
                    break
                back = reverse[hh]
                pos = ccws[nv].index(back)
                nh = ccws[nv][(pos - 1) % 4]
                cur = (nv, nh)
            if bounded and cur == walk[0]:
                face_walks.append(walk)
            else:
                bounded = False
    # walks that touched a ray were dropped above; with the ray half-edges
    # excluded, every remaining closed walk bounds a compact face

    def edge_path(v, h):
        nv = target(v, h)
        if h in (A_FWD, A_BWD):
            return _arc(avs, raw[v][0], raw[v][2], raw[nv][0], raw[nv][2])
        return _arc(bvs, raw[v][1], raw[v][2], raw[nv][1], raw[nv][2])

    corner_face = [[None] * 4 for _ in range(npts)]
    faces = []
    wlat, zlat = tuple(d.w), tuple(d.z)
    for walk in face_walks:
        poly: list[Point] = []
        for v, h in walk:
            poly.extend(edge_path(v, h)[:-1])
        area = geo.signed_area(poly)
        if area <= 0:
            continue
        fid = len(faces)
        corners = []
        for v, h in walk:
            sector = ccws[v].index(h)
            corner_face[v][sector] = fid
            corners.append((v, sector))
        v0, s0 = corners[0]
        faces.append(
            Face(
                fid,
                samples[v0][s0],
                tuple(poly),
                tuple(corners),
                _lattice_count(poly, wlat),
                _lattice_count(poly, zlat),
            )
        )
    if len(faces) != max(npts - 1, 0):
        raise ValueError(
            f"expected {npts - 1} bounded faces, traced {len(faces)}; arrangement is degenerate"
        )

    points = tuple(
        LiftedPoint(
            k,
            raw[k][2],
            signs[k],
            raw[k][0],
            raw[k][1],
            beta_order[k],
            ccws[k],
            tuple(corner_face[k]),
            samples[k],
        )
        for k in range(npts)
    )
    window = geo.bbox(avs + bvs)
    return Arrangement(
        d,
        window_scale,
        tuple(avs),
        tuple(bvs),
        geo.add(d.alpha.period_vector, (0, 0)),
        geo.add(d.beta.period_vector, (0, 0)),
        points,
        tuple(faces),
        window,
        tuple(beta_sorted),
    )


def _lattice_count(poly, base: Point) -> int:
    x0, y0, x1, y1 = geo.bbox(poly)
    count = 0
    for u in range(math.ceil(x0 - base[0]), math.floor(x1 - base[0]) + 1):
        for v in range(math.ceil(y0 - base[1]), math.floor(y1 - base[1]) + 1):
            if geo.winding_number(poly, (base[0] + u, base[1] + v)):
                count += 1
    return count


def disk_class(a: Arrangement, source: int, target: int) -> DiskClass:
    """The unique Whitney disk class from ``source`` to ``target``."""
    if source == target:
        raise ValueError("source and target must differ")
    loop = a.boundary_loop(source, target)
    mults = tuple(geo.winding_number(loop, f.sample) for f in a.faces)
    n_w = sum(m * f.w_count for m, f in zip(mults, a.faces))
    n_z = sum(m * f.z_count for m, f in zip(mults, a.faces))
    partial = DiskClass(source, target, mults, n_w, n_z, 0)
    return DiskClass(source, target, mults, n_w, n_z, maslov_index(a, partial))


def corner_multiplicity(a: Arrangement, c: DiskClass, p: int) -> Fraction:
    """Average multiplicity of the four regions meeting at point ``p``."""
    total = sum(c.multiplicities[f] for f in a.points[p].corners if f is not None)
    return Fraction(total, 4)


def maslov_index(a: Arrangement, c: DiskClass) -> int:
    value = 2 * (corner_multiplicity(a, c, c.source) + corner_multiplicity(a, c, c.target))
    if value.denominator != 1:
        raise NonIntegralMaslov(f"Maslov index {value} for {c.source}->{c.target}")
    return int(value)


def _positive_mu1(a: Arrangement):
    n = len(a.points)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            c = disk_class(a, x, y)
            if c.maslov == 1 and c.is_positive:
                yield c


def positive_mu1_classes(a: Arrangement) -> list[DiskClass]:
    return list(a._mu1)


def stabilize(d: Diagram, max_doublings: int = 8) -> Arrangement:
    """Double the window until the point set and the mu=1 classes stop changing."""
    scale = 1
    previous = None
    for _ in range(max_doublings + 1):
        try:
            arr = lift(d, scale)
        except WindowTooSmall:
            previous = None
            scale *= 2
            continue
        signature = (len(arr.points), tuple(c.key() for c in positive_mu1_classes(arr)))
        if previous is not None and signature == previous[0]:
            return previous[1]
        previous = (signature, arr)
        scale *= 2
    raise StabilizationLimitExceeded(f"no stable window after {max_doublings} doublings")
