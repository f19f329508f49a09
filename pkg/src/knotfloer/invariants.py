"""Invariants read off a knot complex: region homology, the Alexander
polynomial, the genus bound, connected sums and skein checks.

Region complexes live on the generators [x, i, j] of the infinite complex
(j - i = A(x)).  They are infinite, so we truncate to |i| <= T, which
produces a subquotient whose homology agrees with the real one in a band
of degrees.  Infinite U-tails ("towers") are recognised inside that band
as the classes surviving (or hit by) high powers of U.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .algebra import (
    Coefficients,
    HomologySummary,
    LaurentPolynomial,
    Mod2Span,
    Tower,
    euler_characteristic,
    kernel_mod2,
)
from .errors import NotAKnotPolynomial, TruncationUnstable
from .floer import GradedGroups, KnotArrow, KnotComplex, KnotGenerator


class Region(Enum):
    MAX_NEG = "MaxNeg"
    MIN_NEG = "MinNeg"
    QUOT_MIN_NONNEG = "QuotMinNonneg"
    QUOT_MAX_NONNEG = "QuotMaxNonneg"
    I_OR_J = "IOrJ"
    I_AND_J = "IAndJ"
    BOX = "Box"


@dataclass(frozen=True)
class RegionSpec:
    """A convex set of filtration levels (i, j).

    ``m`` parametrizes IOrJ / IAndJ (``i >= 0 or/and j >= -m``), ``t`` the
    box ``i < 0 and j >= t``.
    """

    kind: Region
    m: int = 0
    t: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", Region(self.kind))

    def contains(self, i: int, j: int) -> bool:
        k = self.kind
        if k is Region.MAX_NEG:
            return max(i, j) < 0
        if k is Region.MIN_NEG:
            return min(i, j) < 0
        if k is Region.QUOT_MIN_NONNEG:
            return min(i, j) >= 0
        if k is Region.QUOT_MAX_NONNEG:
            return max(i, j) >= 0
        if k is Region.I_OR_J:
            return i >= 0 or j >= -self.m
        if k is Region.I_AND_J:
            return i >= 0 and j >= -self.m
        return i < 0 and j >= self.t

    @property
    def label(self) -> int:
        """Alexander label attached to the output (the Spin^c index m)."""
        return self.m if self.kind in (Region.I_OR_J, Region.I_AND_J) else 0

    def __str__(self):
        if self.kind in (Region.I_OR_J, Region.I_AND_J):
            return f"{self.kind.value}({self.m})"
        if self.kind is Region.BOX:
            return f"Box({self.t})"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "RegionSpec":
        """Parse ``MaxNeg``, ``IAndJ(2)``, ``Box(1)`` and the like."""
        text = text.strip()
        name, _, rest = text.partition("(")
        kind = Region(name.strip())
        arg = int(rest.rstrip(")")) if rest else 0
        if kind is Region.BOX:
            return cls(kind, t=arg)
        return cls(kind, m=arg)


@dataclass(frozen=True)
class TowerSummary:
    towers: tuple[Tower, ...]
    reduced: HomologySummary
    truncation: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "towers": [
                {"alexander": t.alexander, "maslov": t.maslov, "kind": t.kind}
                for t in self.towers
            ],
            "reduced": self.reduced.to_json()["ranks"],
            "truncation": self.truncation,
        }


def minimum_truncation(c: KnotComplex, r: RegionSpec) -> int:
    return len(c.generators) + c.alexander_spread() + abs(r.m) + abs(r.t)


def default_truncation(c: KnotComplex, r: RegionSpec) -> int:
    return minimum_truncation(c, r) + 4


def region_homology(c: KnotComplex, r: RegionSpec, truncation: int | None = None) -> TowerSummary:
    """Homology of the region complex C{r}, split into towers and a finite part.

    Computed over the two-element field.  The answer at depth T is checked
    against depth T + 1.
    """
    if truncation is None:
        truncation = default_truncation(c, r)
    if truncation < minimum_truncation(c, r):
        raise ValueError(
            f"truncation {truncation} is below the minimum {minimum_truncation(c, r)}"
        )
    first = _truncated_summary(c, r, truncation)
    second = _truncated_summary(c, r, truncation + 1)
    if first != second:
        raise TruncationUnstable(
            f"{r}: tower data changes between truncation {truncation} and {truncation + 1}"
        )
    return TowerSummary(first[0], first[1], truncation)


def _truncated_summary(c: KnotComplex, r: RegionSpec, T: int):
    gens = c.generators
    cells = {}
    for g in gens:
        for i in range(-T, T + 1):
            if r.contains(i, i + g.alexander):
                cells[(g.id, i)] = g.maslov + 2 * i
    by_degree: dict[int, list] = defaultdict(list)
    for cell, deg in sorted(cells.items(), key=lambda kv: (kv[1], repr(kv[0]))):
        by_degree[deg].append(cell)
    pos = {cell: k for cells_d in by_degree.values() for k, cell in enumerate(cells_d)}

    out_arrows = defaultdict(list)
    for a in c.arrows:
        if a.coefficient % 2:
            out_arrows[a.source].append(a)

    def boundary(cell) -> int:
        gid, i = cell
        v = 0
        for a in out_arrows[gid]:
            tgt = (a.target, i - a.n_w)
            if tgt in cells:
                v ^= 1 << pos[tgt]
        return v

    degrees = sorted(by_degree)
    cycles = {}
    boundaries = {}
    for d in degrees:
        images = [boundary(cell) for cell in by_degree[d]]
        cycles[d] = kernel_mod2(images)
        span = boundaries.setdefault(d - 1, Mod2Span())
        for v in images:
            span.add(v)

    def h_rank(d):
        if d not in by_degree:
            return 0
        return len(cycles[d]) - len(boundaries.get(d, Mod2Span()))

    def u_power(vec: int, d: int, k: int) -> int:
        """U^k applied to a chain in degree d (bit set over that degree)."""
        out = 0
        cells_d = by_degree[d]
        n = 0
        while vec:
            if vec & 1:
                gid, i = cells_d[n]
                tgt = (gid, i - k)
                if tgt in cells:
                    out ^= 1 << pos[tgt]
            vec >>= 1
            n += 1
        return out

    def image_rank(d_from: int, k: int) -> int:
        """Rank of U^k : H_{d_from} -> H_{d_from - 2k}."""
        d_to = d_from - 2 * k
        if d_from not in by_degree or d_to not in by_degree:
            return 0
        span = Mod2Span(boundaries.get(d_to, Mod2Span()).pivots.values())
        base = len(span)
        for z in cycles[d_from]:
            span.add(u_power(z, d_from, k))
        return len(span) - base

    m_values = [g.maslov for g in gens]
    top_cut = any(r.contains(T + 1, T + 1 + g.alexander) for g in gens)
    bottom_cut = any(r.contains(-T - 1, -T - 1 + g.alexander) for g in gens)
    if top_cut and bottom_cut:
        raise ValueError(f"{r} is infinite in both directions; no tower model applies")
    label = r.label
    towers = []
    reduced = {}
    if not degrees:
        return tuple(), HomologySummary({})
    if top_cut:
        # exact for degrees <= hi; towers point upward
        hi = 2 * T + min(m_values)
        tower_rank = {}
        for d in range(degrees[0], hi + 1):
            k = (hi - d) // 2
            tower_rank[d] = image_rank(d + 2 * k, k)
        for d in range(degrees[0], hi + 1):
            born = tower_rank[d] - tower_rank.get(d - 2, 0)
            towers.extend(Tower(label, d, "plus") for _ in range(born))
            red = h_rank(d) - tower_rank[d]
            if red:
                reduced[(label, d)] = red
    elif bottom_cut:
        lo = max(m_values) - 2 * T
        tower_rank = {}
        for d in range(lo, degrees[-1] + 1):
            k = (d - lo) // 2
            tower_rank[d] = image_rank(d, k)
        for d in range(lo, degrees[-1] + 1):
            born = tower_rank[d] - tower_rank.get(d + 2, 0)
            towers.extend(Tower(label, d, "minus") for _ in range(born))
            red = h_rank(d) - tower_rank[d]
            if red:
                reduced[(label, d)] = red
    else:
        for d in degrees:
            if h_rank(d):
                reduced[(label, d)] = h_rank(d)
    return tuple(towers), HomologySummary(reduced)


# --------------------------------------------------------------------------

def alexander_polynomial(g: GradedGroups) -> LaurentPolynomial:
    chi = euler_characteristic(g)
    if not chi.is_symmetric():
        raise NotAKnotPolynomial(f"{chi} is not symmetric under T -> 1/T")
    if abs(chi.evaluate_at_one()) != 1:
        raise NotAKnotPolynomial(f"{chi} has |value at 1| = {abs(chi.evaluate_at_one())}")
    return chi


def genus_lower_bound(g: GradedGroups) -> int:
    if not g.total_rank:
        raise ValueError("homology is zero")
    return max(abs(a) for (a, _) in g.free_ranks)


def connected_sum(c1: KnotComplex, c2: KnotComplex) -> KnotComplex:
    """Tensor product of two U-model complexes.

    Generators are pairs; an arrow of either factor is carried along with
    its (n_w, n_z) and, on the second factor, the Koszul sign (-1)^{M(x)}.
    """
    coeffs = (
        Coefficients.INTEGER
        if Coefficients.INTEGER in (c1.coefficients, c2.coefficients)
        else Coefficients.MOD2
    )
    gens = tuple(
        KnotGenerator((x.id, y.id), x.alexander + y.alexander, x.maslov + y.maslov)
        for x in c1.generators
        for y in c2.generators
    )
    arrows = []
    for a in c1.arrows:
        for y in c2.generators:
            arrows.append(
                KnotArrow((a.source, y.id), (a.target, y.id), a.n_w, a.n_z, a.coefficient)
            )
    for x in c1.generators:
        sign = -1 if x.maslov % 2 else 1
        for b in c2.arrows:
            arrows.append(
                KnotArrow((x.id, b.source), (x.id, b.target), b.n_w, b.n_z, sign * b.coefficient)
            )
    name = f"{c1.name}#{c2.name}" if c1.name and c2.name else None
    return KnotComplex(gens, tuple(arrows), coeffs, name)


_Z = LaurentPolynomial.from_exponents({"1/2": 1, "-1/2": -1})  # T^(1/2) - T^(-1/2)


def skein_chi_check(
    chi_minus: LaurentPolynomial,
    chi_zero: LaurentPolynomial,
    chi_plus: LaurentPolynomial,
    merges_components: bool,
) -> bool:
    """Check the Euler-characteristic skein relation for a triple L-, L0, L+.

    ``merges_components`` is true when the two strands at the crossing lie
    on different components, so the resolution L0 has one component fewer
    than L+; the relation then carries the factor (T^(1/2) - T^(-1/2))^2.
    Otherwise L0 has one component more and the relation is
    chi(L-) - chi(L0) - chi(L+) = 0.
    """
    factor = _Z * _Z if merges_components else LaurentPolynomial.monomial(0)
    return (chi_minus - factor * chi_zero - chi_plus).is_zero()
