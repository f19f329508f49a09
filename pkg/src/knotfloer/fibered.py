"""Exterior-algebra models for products with a circle and Dehn-twist mapping tori.

H^1 of the genus-g surface has the basis alpha_1, beta_1, ..., alpha_g,
beta_g, stored as indices 0 .. 2g-1 (alpha_i -> 2i-2, beta_i -> 2i-1);
it is dual to the symplectic basis a_1, b_1, ... of H_1 with a_i . b_i = 1.
A homology class gamma is an integer vector in that H_1 basis.
"""
from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .algebra import Arrow, BigradedComplex, Coefficients, Generator, HomologySummary, homology
from .errors import GammaNotInHandle


class RegimeWarning(UserWarning):
    """The isomorphism with the algebraic model holds only as abelian groups."""


@dataclass(frozen=True)
class ExteriorBasis:
    g: int
    element: tuple[int, ...]

    def __post_init__(self):
        elem = tuple(sorted(self.element))
        if len(set(elem)) != len(elem) or any(not 0 <= k < 2 * self.g for k in elem):
            raise ValueError(f"bad exterior basis element {self.element}")
        object.__setattr__(self, "element", elem)

    @property
    def degree(self) -> int:
        return len(self.element)

    def __str__(self):
        if not self.element:
            return "1"
        names = [("a" if k % 2 == 0 else "b") + str(k // 2 + 1) for k in self.element]
        return "^".join(names)


@dataclass(frozen=True)
class Gamma:
    """A class in H_1(Sigma_g) as coefficients on a_1, b_1, ..., a_g, b_g."""

    vector: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(v) for v in self.vector))
        if len(self.vector) % 2:
            raise ValueError("gamma needs an even number of coordinates")

    @property
    def g(self) -> int:
        return len(self.vector) // 2

    @classmethod
    def basis(cls, g: int, name: str) -> "Gamma":
        """``Gamma.basis(3, "b2")`` is the class b_2 in genus 3."""
        kind, idx = name[0], int(name[1:])
        if kind not in "ab" or not 1 <= idx <= g:
            raise ValueError(f"no basis class {name!r} in genus {g}")
        v = [0] * (2 * g)
        v[2 * (idx - 1) + (kind == "b")] = 1
        return cls(tuple(v))

    def dot(self, other: "Gamma") -> int:
        """Intersection pairing, a_i . b_i = 1 = -(b_i . a_i)."""
        x, y = self.vector, other.vector
        return sum(x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i] for i in range(self.g))

    def poincare_dual(self) -> tuple[int, ...]:
        """Coordinates of PD(gamma) on the dual basis: gamma . e_k."""
        out = []
        for k in range(2 * self.g):
            e = [0] * (2 * self.g)
            e[k] = 1
            out.append(self.dot(Gamma(tuple(e))))
        return tuple(out)

    def __add__(self, other: "Gamma") -> "Gamma":
        return Gamma(tuple(a + b for a, b in zip(self.vector, other.vector)))


@dataclass(frozen=True)
class XModule:
    """X(g, d): sum over 0 <= i <= d of Lambda^{2g-i} tensor Z[U]/U^{d-i+1}.

    Basis elements are triples (i, form, j) meaning form (of degree 2g - i)
    times U^j, with 0 <= j <= d - i.  The grading puts the top form at 0;
    U drops it by two and each step down in exterior degree by one.
    """

    g: int
    d: int
    basis: tuple[tuple[int, ExteriorBasis, int], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> dict:
        return {(i, f.element, j): k for k, (i, f, j) in enumerate(self.basis)}

    @staticmethod
    def degree_of(i: int, j: int) -> int:
        return -i - 2 * j

    def degrees(self) -> list[int]:
        return [self.degree_of(i, j) for i, _, j in self.basis]

    def ranks_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = defaultdict(int)
        for deg in self.degrees():
            out[deg] += 1
        return dict(sorted(out.items()))


def build_x(g: int, d: int) -> XModule:
    if g < 0 or d < 0:
        raise ValueError("g and d must be nonnegative")
    basis = []
    for i in range(min(d, 2 * g) + 1):
        for elem in combinations(range(2 * g), 2 * g - i):
            form = ExteriorBasis(g, elem)
            for j in range(d - i + 1):
                basis.append((i, form, j))
    return XModule(g, d, tuple(basis))


def x_rank_formula(g: int, d: int) -> int:
    return sum(comb(2 * g, i) * (d - i + 1) for i in range(d + 1))


# sparse integer matrices as {(row, col): value}
Matrix = dict


def matmul(a: Matrix, b: Matrix) -> Matrix:
    by_row = defaultdict(list)
    for (r, c), v in b.items():
        by_row[r].append((c, v))
    out: dict = defaultdict(int)
    for (r, k), v in a.items():
        for c, w in by_row[k]:
            out[(r, c)] += v * w
    return {key: v for key, v in out.items() if v}


def dense(m: Matrix, n: int) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for (r, c), v in m.items():
        rows[r][c] = v
    return rows


def _contract(elem: tuple[int, ...], gamma: Gamma):
    for s, k in enumerate(elem):
        coeff = gamma.vector[k]
        if coeff:
            yield elem[:s] + elem[s + 1:], (-1) ** s * coeff


def _wedge(pd: tuple[int, ...], elem: tuple[int, ...]):
    for k, coeff in enumerate(pd):
        if coeff and k not in elem:
            before = sum(1 for e in elem if e < k)
            yield tuple(sorted(elem + (k,))), (-1) ** before * coeff


def d_gamma(x: XModule, gamma: Gamma) -> Matrix:
    """D(w U^j) = (iota_gamma w) U^j + (PD(gamma) ^ w) U^{j+1}, truncated."""
    if gamma.g != x.g:
        raise ValueError("gamma lives in the wrong genus")
    index = x.index
    pd = gamma.poincare_dual()
    out: dict = defaultdict(int)
    for col, (i, form, j) in enumerate(x.basis):
        for elem, c in _contract(form.element, gamma):
            row = index.get((i + 1, elem, j))
            if row is not None:
                out[(row, col)] += c
        for elem, c in _wedge(pd, form.element):
            row = index.get((i - 1, elem, j + 1))
            if row is not None:
                out[(row, col)] += c
    return {k: v for k, v in out.items() if v}


def handle_parity(form: ExteriorBasis) -> int:
    """+1 if the form has neither or both of alpha_1, beta_1, else -1."""
    hits = sum(1 for k in form.element if k in (0, 1))
    return 1 if hits in (0, 2) else -1


def d_gamma_prime(x: XModule, gamma: Gamma) -> Matrix:
    """D_gamma on the odd part for the first handle, zero on the even part."""
    v = gamma.vector
    if len(v) != 2 * x.g or sorted(v) != [0] * (2 * x.g - 1) + [1] or not (v[0] or v[1]):
        raise GammaNotInHandle(f"{v} is not a1 or b1")
    full = d_gamma(x, gamma)
    return {(r, c): val for (r, c), val in full.items() if handle_parity(x.basis[c][1]) < 0}


def module_homology(x: XModule, matrix: Matrix) -> HomologySummary:
    """Integer homology of (X, D), keyed by (0, degree)."""
    degrees = x.degrees()
    gens = tuple(Generator(k, 0, deg) for k, deg in enumerate(degrees))
    arrows = tuple(Arrow(c, r, v) for (r, c), v in sorted(matrix.items()))
    return homology(BigradedComplex(gens, arrows), Coefficients.INTEGER)


def _dimension(g: int, k: int) -> int:
    if k == 0:
        raise ValueError("k must be nonzero")
    return g - 1 - abs(k)


def hf_sigma_times_s1(g: int, k: int) -> HomologySummary:
    d = _dimension(g, k)
    if d < 0:
        return HomologySummary({})
    x = build_x(g, d)
    return HomologySummary({(k, deg): r for deg, r in x.ranks_by_degree().items()})


def dehn_twist_regime(g: int, k: int) -> bool:
    """True when 3d < 2g - 1, where the model holds as Z[U]-modules."""
    return 3 * _dimension(g, k) < 2 * g - 1


def hf_dehn_twist(g: int, k: int) -> HomologySummary:
    d = _dimension(g, k)
    if d < 0:
        return HomologySummary({})
    if not dehn_twist_regime(g, k):
        warnings.warn(
            f"3d >= 2g - 1 for g={g}, k={k}: ranks are valid, the U-action is not claimed",
            RegimeWarning,
            stacklevel=2,
        )
    x = build_x(g, d)
    h = module_homology(x, d_gamma_prime(x, Gamma.basis(g, "a1")))
    return HomologySummary(
        {(k, m): r for (_, m), r in h.free_ranks.items()},
        tuple((k, m, o) for _, m, o in h.torsion),
    )


def borromean_hfk(g: int) -> HomologySummary:
    if g < 0:
        raise ValueError("g must be nonnegative")
    return HomologySummary({(j, j): comb(2 * g, g + j) for j in range(-g, g + 1)})


def macdonald_oracle(g: int, d: int) -> dict[int, int]:
    """Betti numbers of Sym^d of the genus-g surface.

    Coefficient of q^d in (1 + t q)^{2g} / ((1 - q)(1 - t^2 q)), read as a
    polynomial in t.
    """
    # series in q with coefficients polynomials in t, both as dicts
    def mul(a, b):
        out = defaultdict(lambda: defaultdict(int))
        for qa, pa in a.items():
            for qb, pb in b.items():
                if qa + qb > d:
                    continue
                for ta, ca in pa.items():
                    for tb, cb in pb.items():
                        out[qa + qb][ta + tb] += ca * cb
        return out

    numerator = {n: {n: comb(2 * g, n)} for n in range(min(2 * g, d) + 1)}
    geometric = {n: {0: 1} for n in range(d + 1)}
    geometric_t2 = {n: {2 * n: 1} for n in range(d + 1)}
    series = mul(mul(numerator, geometric), geometric_t2)
    return {t: c for t, c in sorted(series.get(d, {}).items()) if c}
