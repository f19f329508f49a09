"""Exact homological algebra for small bigraded chain complexes.

Everything here works over either the two-element field or the integers.
Matrices are kept sparse: mod 2 vectors are Python ints used as bit sets,
integer matrices are dicts of dicts.  Nothing is ever converted to floats.
"""
from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .errors import DifferentialNotSquareZero


class Coefficients(enum.Enum):
    MOD2 = "mod2"
    INTEGER = "int"

    @classmethod
    def parse(cls, value) -> "Coefficients":
        if isinstance(value, cls):
            return value
        value = str(value).lower()
        if value in ("mod2", "f2", "z2"):
            return cls.MOD2
        if value in ("int", "integer", "z"):
            return cls.INTEGER
        raise ValueError(f"unknown coefficient ring {value!r}")

    def reduce(self, c: int) -> int:
        return c % 2 if self is Coefficients.MOD2 else c


@dataclass(frozen=True)
class Generator:
    id: Hashable
    alexander: int
    maslov: int


@dataclass(frozen=True)
class Arrow:
    source: Hashable
    target: Hashable
    coefficient: int = 1


@dataclass(frozen=True)
class BigradedComplex:
    """A finitely generated complex with generators bigraded by (A, M).

    Arrows lower the Maslov grading by one.  Homology is split by Alexander
    grading, so arrows are expected to preserve it; complexes coming from a
    filtration should relabel their generators accordingly.
    """

    generators: tuple[Generator, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        ids = [g.id for g in self.generators]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate generator ids")
        index = self.index
        for a in self.arrows:
            if a.source not in index or a.target not in index:
                raise ValueError(f"arrow {a} refers to an unknown generator")
            if index[a.source].maslov - index[a.target].maslov != 1:
                raise ValueError(f"arrow {a} does not drop the Maslov grading by one")

    @property
    def index(self) -> dict:
        return {g.id: g for g in self.generators}

    def differential(self, coefficients=Coefficients.MOD2) -> dict:
        """Sparse matrix of the differential as ``{source: {target: coeff}}``."""
        coefficients = Coefficients.parse(coefficients)
        d: dict = defaultdict(dict)
        for a in self.arrows:
            row = d[a.source]
            row[a.target] = row.get(a.target, 0) + a.coefficient
        out = {}
        for s, row in d.items():
            row = {t: coefficients.reduce(c) for t, c in row.items()}
            row = {t: c for t, c in row.items() if c}
            if row:
                out[s] = row
        return out


@dataclass(frozen=True)
class Tower:
    """An infinite U-tail in the homology of a region complex.

    ``kind`` is ``"plus"`` for a tail running upward from ``maslov`` (its
    bottom degree) and ``"minus"`` for one running downward from ``maslov``
    (its top degree).
    """

    alexander: int
    maslov: int
    kind: str = "plus"

    @property
    def bottom_maslov(self):
        return self.maslov if self.kind == "plus" else None


@dataclass(frozen=True)
class HomologySummary:
    free_ranks: Mapping[tuple[int, int], int] = field(default_factory=dict)
    torsion: tuple[tuple[int, int, int], ...] = ()
    towers: tuple[Tower, ...] = ()

    def __post_init__(self):
        ranks = {k: v for k, v in dict(self.free_ranks).items() if v}
        if any(v < 0 for v in ranks.values()):
            raise ValueError("negative rank")
        if any(order < 2 for _, _, order in self.torsion):
            raise ValueError("torsion orders must be at least 2")
        object.__setattr__(self, "free_ranks", dict(sorted(ranks.items())))
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))
        object.__setattr__(self, "towers", tuple(self.towers))

    def rank(self, alexander: int, maslov: int) -> int:
        return self.free_ranks.get((alexander, maslov), 0)

    @property
    def total_rank(self) -> int:
        return sum(self.free_ranks.values())

    def ranks_by_alexander(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (a, _), r in self.free_ranks.items():
            out[a] += r
        return dict(sorted(out.items()))

    def ranks_by_maslov(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for (_, m), r in self.free_ranks.items():
            out[m] += r
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "ranks": [
                {"alexander": a, "maslov": m, "rank": r}
                for (a, m), r in self.free_ranks.items()
            ],
            "torsion": [
                {"alexander": a, "maslov": m, "order": o} for a, m, o in self.torsion
            ],
            "towers": [
                {"alexander": t.alexander, "maslov": t.maslov, "kind": t.kind}
                for t in self.towers
            ],
        }


# --------------------------------------------------------------------------
# Laurent polynomials

class LaurentPolynomial:
    """Integer Laurent polynomial in T, allowing half-integer exponents.

    Exponents are stored doubled, so ``T^(1/2)`` is the key ``1``.
    """

    __slots__ = ("_terms",)

    def __init__(self, doubled_terms: Mapping[int, int] | None = None):
        terms = {}
        for e, c in (doubled_terms or {}).items():
            if c:
                terms[int(e)] = terms.get(int(e), 0) + int(c)
        self._terms = {e: c for e, c in sorted(terms.items()) if c}

    @classmethod
    def from_exponents(cls, terms: Mapping) -> "LaurentPolynomial":
        out: dict[int, int] = defaultdict(int)
        for e, c in terms.items():
            doubled = Fraction(e) * 2
            if doubled.denominator != 1:
                raise ValueError(f"exponent {e} is not a multiple of 1/2")
            out[int(doubled)] += c
        return cls(out)

    @classmethod
    def monomial(cls, exponent=0, coefficient: int = 1) -> "LaurentPolynomial":
        return cls.from_exponents({exponent: coefficient})

    @property
    def doubled_terms(self) -> dict[int, int]:
        return dict(self._terms)

    def terms(self) -> dict[Fraction, int]:
        return {Fraction(e, 2): c for e, c in self._terms.items()}

    def coefficient(self, exponent) -> int:
        return self._terms.get(int(Fraction(exponent) * 2), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.monomial(0, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.monomial(0, other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPolynomial({e: c * other for e, c in self._terms.items()})
        out: dict[int, int] = defaultdict(int)
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] += c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPolynomial.monomial(0)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, exponent) -> "LaurentPolynomial":
        return self * LaurentPolynomial.monomial(exponent)

    def conjugate(self) -> "LaurentPolynomial":
        """Substitute T -> 1/T."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.conjugate()

    def evaluate_at_one(self) -> int:
        return sum(self._terms.values())

    def degree_span(self) -> tuple[Fraction, Fraction] | None:
        if not self._terms:
            return None
        keys = list(self._terms)
        return Fraction(keys[0], 2), Fraction(keys[-1], 2)

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for e, c in sorted(self._terms.items(), reverse=True):
            exp = Fraction(e, 2)
            if exp == 0:
                mono = ""
            elif exp == 1:
                mono = "T"
            else:
                mono = f"T^{exp}" if exp > 0 else f"T^({exp})"
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


# --------------------------------------------------------------------------
# Linear algebra over F2 (bit-set vectors)

def _reduce_mod2(vec: int, pivots: dict[int, int]) -> int:
    while vec:
        hb = vec.bit_length() - 1
        p = pivots.get(hb)
        if p is None:
            return vec
        vec ^= p
    return 0


def rank_mod2(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        v = _reduce_mod2(v, pivots)
        if v:
            pivots[v.bit_length() - 1] = v
    return len(pivots)


class Mod2Span:
    """Incrementally maintained row-echelon basis of a subspace of F2^n."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        return _reduce_mod2(v, self.pivots)

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.pivots[v.bit_length() - 1] = v
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self):
        return len(self.pivots)


def kernel_mod2(images: list[int]) -> list[int]:
    """Basis of the kernel of the map sending basis vector k to ``images[k]``.

    Kernel vectors are returned as bit sets over the source basis.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for k, img in enumerate(images):
        tag = 1 << k
        while img:
            hb = img.bit_length() - 1
            if hb not in pivots:
                pivots[hb] = (img, tag)
                break
            pimg, ptag = pivots[hb]
            img ^= pimg
            tag ^= ptag
        if not img:
            kernel.append(tag)
    return kernel


def apply_mod2(images: list[int], vec: int) -> int:
    out = 0
    k = 0
    while vec:
        if vec & 1:
            out ^= images[k]
        vec >>= 1
        k += 1
    return out


# --------------------------------------------------------------------------
# Integer linear algebra

def smith_invariants(entries: Mapping[tuple[int, int], int]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix.

    ``entries`` maps ``(row, col)`` to an integer.  The result is sorted and
    satisfies the divisibility chain d1 | d2 | ... .
    """
    rows: dict[int, dict[int, int]] = defaultdict(dict)
    for (r, c), v in entries.items():
        if v:
            rows[r][c] = rows[r].get(c, 0) + v
    rows = {r: {c: v for c, v in row.items() if v} for r, row in rows.items()}
    rows = {r: row for r, row in rows.items() if row}

    diagonal = []
    while rows:
        r0, c0, p = min(
            ((r, c, v) for r, row in rows.items() for c, v in row.items()),
            key=lambda t: abs(t[2]),
        )
        while True:
            restart = False
            for r in list(rows):
                if r == r0 or c0 not in rows[r]:
                    continue
                q = rows[r][c0] // p
                row = rows[r]
                for c, v in rows[r0].items():
                    nv = row.get(c, 0) - q * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
                if not row:
                    del rows[r]
                elif c0 in row:
                    r0, p = r, row[c0]
                    restart = True
                    break
            if restart:
                continue
            pivot_row = rows[r0]
            for c in [c for c in pivot_row if c != c0]:
                q = pivot_row[c] // p
                nv = pivot_row[c] - q * p
                if nv:
                    pivot_row[c] = nv
                else:
                    del pivot_row[c]
            leftovers = [c for c in pivot_row if c != c0]
            if leftovers:
                c0 = min(leftovers, key=lambda c: abs(pivot_row[c]))
                p = pivot_row[c0]
                continue
            diagonal.append(abs(p))
            del rows[r0]
            break

    diagonal.sort()
    n = len(diagonal)
    for i in range(n):
        for j in range(i + 1, n):
            g = math.gcd(diagonal[i], diagonal[j])
            if g != diagonal[i]:
                diagonal[i], diagonal[j] = g, diagonal[i] * diagonal[j] // g
    return sorted(diagonal)


# --------------------------------------------------------------------------
# Complex operations

def verify_d_squared(complex_: BigradedComplex, coefficients=Coefficients.MOD2) -> bool:
    coefficients = Coefficients.parse(coefficients)
    d = complex_.differential(coefficients)
    for s, row in d.items():
        acc: dict = defaultdict(int)
        for t, c in row.items():
            for u, c2 in d.get(t, {}).items():
                acc[u] += c * c2
        if any(coefficients.reduce(v) for v in acc.values()):
            return False
    return True


def homology(complex_: BigradedComplex, coefficients=Coefficients.MOD2) -> HomologySummary:
    """Homology of a finite bigraded complex, split by (Alexander, Maslov).

    In integer mode torsion summands are reported as well; their grading is
    the Maslov degree in which the torsion lives.
    """
    coefficients = Coefficients.parse(coefficients)
    if not verify_d_squared(complex_, coefficients):
        raise DifferentialNotSquareZero("d^2 != 0")
    gens = complex_.index
    d = complex_.differential(coefficients)
    for s, row in d.items():
        for t in row:
            if gens[s].alexander != gens[t].alexander:
                raise ValueError(
                    "homology() splits by Alexander grading; arrow "
                    f"{s}->{t} changes it"
                )

    blocks: dict[tuple[int, int], list] = defaultdict(list)
    for g in complex_.generators:
        blocks[(g.alexander, g.maslov)].append(g.id)
    position = {}
    for ids in blocks.values():
        for k, gid in enumerate(ids):
            position[gid] = k

    # rank of d leaving each block, plus invariant factors in integer mode
    d_rank: dict[tuple[int, int], int] = {}
    factors: dict[tuple[int, int], list[int]] = {}
    for key, ids in blocks.items():
        if coefficients is Coefficients.MOD2:
            images = []
            for gid in ids:
                v = 0
                for t in d.get(gid, {}):
                    v |= 1 << position[t]
                images.append(v)
            d_rank[key] = rank_mod2(images)
        else:
            entries = {}
            for gid in ids:
                for t, c in d.get(gid, {}).items():
                    entries[(position[t], position[gid])] = c
            inv = smith_invariants(entries)
            d_rank[key] = len(inv)
            factors[key] = inv

    free = {}
    torsion = []
    for (a, m), ids in blocks.items():
        r = len(ids) - d_rank[(a, m)] - d_rank.get((a, m + 1), 0)
        if r:
            free[(a, m)] = r
        for f in factors.get((a, m + 1), []):
            if f > 1:
                torsion.append((a, m, f))
    return HomologySummary(free, tuple(torsion))


def tensor_complex(c1: BigradedComplex, c2: BigradedComplex) -> BigradedComplex:
    """Tensor product with the Koszul sign (-1)^{M(a)} on the second factor."""
    gens = [
        Generator((g1.id, g2.id), g1.alexander + g2.alexander, g1.maslov + g2.maslov)
        for g1 in c1.generators
        for g2 in c2.generators
    ]
    arrows = []
    for a in c1.arrows:
        for g2 in c2.generators:
            arrows.append(Arrow((a.source, g2.id), (a.target, g2.id), a.coefficient))
    for g1 in c1.generators:
        sign = -1 if g1.maslov % 2 else 1
        for b in c2.arrows:
            arrows.append(Arrow((g1.id, b.source), (g1.id, b.target), sign * b.coefficient))
    return BigradedComplex(tuple(gens), tuple(arrows))


def euler_characteristic(h: HomologySummary) -> LaurentPolynomial:
    if h.towers:
        raise ValueError("Euler characteristic is undefined with infinite towers")
    out: dict[int, int] = defaultdict(int)
    for (a, m), r in h.free_ranks.items():
        out[a] += (-1) ** (m % 2) * r
    return LaurentPolynomial.from_exponents(out)


def rank_polynomial(h: HomologySummary) -> dict[tuple[int, int], int]:
    """Two-variable rank generating function as an exponent dict."""
    return dict(h.free_ranks)


def convolve_ranks(r1: Mapping[tuple[int, int], int], r2: Mapping[tuple[int, int], int]) -> dict:
    """Product of two bigraded rank generating functions."""
    out: dict[tuple[int, int], int] = defaultdict(int)
    for (a1, m1), x in r1.items():
        for (a2, m2), y in r2.items():
            out[(a1 + a2, m1 + m2)] += x * y
    return {k: v for k, v in sorted(out.items()) if v}
