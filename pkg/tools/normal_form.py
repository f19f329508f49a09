"""Generate (1,1) diagrams in rainbow normal form.

Development helper used to produce the built-in diagram files; it is not
part of the installed package.

beta is the horizontal loop y = 0.  Cutting the torus along beta gives an
annulus 0 < y < 1 in which alpha is a union of arcs: ``a`` nested rainbows
on the bottom edge (positions 0 .. 2a-1), ``a`` nested rainbows on the top
edge (positions s .. s+2a-1 mod n) and ``b`` strands crossing the annulus.
Strand k leaves the bottom at position 2a+k and reaches the top at the
(k+t)-th free top position.  w sits under the innermost bottom rainbow and
z above the innermost top rainbow.
"""
from __future__ import annotations

from fractions import Fraction as F

from knotfloer.diagram import Diagram, PLLoop, RationalPoint


def make_arcs(a: int, b: int, s: int, t: int):
    n = 2 * a + b
    x = lambda pos: (F(pos) + F(1, 2)) / n  # noqa: E731  (pos may exceed n-1)
    eps = F(1, 4 * (a + 1))
    arcs = []  # (start endpoint, end endpoint, vertex list); endpoint = ("b"|"t", pos mod n)
    for k in range(a):
        lo, hi = k, 2 * a - 1 - k
        h = (a - k) * eps
        arcs.append((("b", lo), ("b", hi), [(x(lo), F(0)), (x(lo), h), (x(hi), h), (x(hi), F(0))]))
    for k in range(a):
        lo, hi = s + k, s + 2 * a - 1 - k
        h = 1 - (a - k) * eps
        arcs.append(
            (("t", lo % n), ("t", hi % n), [(x(lo), F(1)), (x(lo), h), (x(hi), h), (x(hi), F(1))])
        )
    free_top = [s + 2 * a + j for j in range(b)]

    def top_pos(J):
        return free_top[J % b] + n * (J // b)

    for k in range(b):
        bot = 2 * a + k
        top = top_pos(k + t)
        arcs.append(
            (
                ("b", bot),
                ("t", top % n),
                [(x(bot), F(0)), (x(bot), F(1, 3)), (x(top), F(2, 3)), (x(top), F(1))],
            )
        )
    return arcs


def make_diagram(a: int, b: int, s: int, t: int, name=None):
    """Return the diagram, or None if alpha is disconnected or alpha.beta != +-1."""
    n = 2 * a + b
    arcs = make_arcs(a, b, s, t)
    ends = {}
    for idx, (e0, e1, _) in enumerate(arcs):
        ends.setdefault(e0, []).append((idx, 0))
        ends.setdefault(e1, []).append((idx, 1))
    # walk alpha: leave each arc through its far end, cross beta, continue
    used = set()
    verts = []
    offset = (F(0), F(0))
    idx, direction = 0, 0
    while idx not in used:
        used.add(idx)
        e0, e1, vs = arcs[idx]
        vs = vs if direction == 0 else vs[::-1]
        # drop the endpoints on beta; consecutive arcs meet there in a straight line
        verts.extend((p[0] + offset[0], p[1] + offset[1]) for p in vs[1:-1])
        far = e1 if direction == 0 else e0
        end_pt = vs[-1]
        side, pos = far
        other = ("t" if side == "b" else "b", pos)
        (nidx, nend), = ends[other]
        nvs = arcs[nidx][2] if nend == 0 else arcs[nidx][2][::-1]
        # translate the next arc so its start meets end_pt (mod Z^2)
        start = nvs[0]
        offset = (offset[0] + end_pt[0] - start[0], offset[1] + end_pt[1] - start[1])
        idx, direction = nidx, nend
    if len(used) != len(arcs):
        return None
    period = (offset[0], offset[1])
    if period[0].denominator != 1 or period[1].denominator != 1:
        raise AssertionError("period is not integral")
    period = (int(period[0]), int(period[1]))
    if abs(period[1]) != 1:
        return None
    alpha = PLLoop(tuple(verts), period)
    beta = PLLoop(((F(0), F(0)),), (1, 0))
    if a:
        w = RationalPoint(F(a, n), eps_of(a) / 2)
        z = RationalPoint(F(s + a, n), 1 - eps_of(a) / 2)
    else:
        w = RationalPoint(F(0), F(1, 4))
        z = RationalPoint(F(0), F(3, 4))
    return Diagram(alpha, beta, w, z, name=name)


def eps_of(a):
    return F(1, 4 * (a + 1))


def family(n: int):
    for a in range(0, n // 2 + 1):
        b = n - 2 * a
        if b < 1:
            continue
        for s in range(n):
            for t in range(b):
                d = make_diagram(a, b, s, t)
                if d is not None:
                    yield (a, b, s, t), d
