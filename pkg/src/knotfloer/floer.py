"""The knot complex CFK^infinity of a genus-one diagram.

The complex is stored in its finite "U-model": one generator per
intersection point, bigraded by (Alexander, Maslov), and one arrow per
positive Maslov-index-one domain, labelled by its basepoint multiplicities
``(n_w, n_z)``.  The generator [x, i, j] of the infinite complex has
j - i = A(x) and Maslov grading M(x) + 2i; an arrow x -> y sends [x, i, j]
to [y, i - n_w, j - n_z].
"""
from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace

from .algebra import (
    Arrow,
    BigradedComplex,
    Coefficients,
    Generator,
    HomologySummary,
    LaurentPolynomial,
    homology,
)
from .cover import Arrangement, disk_class, positive_mu1_classes, stabilize
from .diagram import Diagram, check
from .errors import (
    AsymmetricEuler,
    DifferentialNotSquareZero,
    NormalizationAmbiguous,
    SignAssignmentFailed,
)

SCHEMA = "knotfloer.cfk/1"

log = logging.getLogger(__name__)

GradedGroups = HomologySummary


@dataclass(frozen=True)
class KnotGenerator:
    id: int
    alexander: int
    maslov: int


@dataclass(frozen=True)
class KnotArrow:
    source: int
    target: int
    n_w: int
    n_z: int
    coefficient: int = 1


@dataclass(frozen=True)
class KnotComplex:
    generators: tuple[KnotGenerator, ...]
    arrows: tuple[KnotArrow, ...]
    coefficients: Coefficients = Coefficients.MOD2
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "coefficients", Coefficients.parse(self.coefficients))
        bad = grading_violations(self)
        if bad:
            raise ValueError(f"arrows violate the grading constraints: {bad[:3]}")

    @property
    def index(self) -> dict:
        return {g.id: g for g in self.generators}

    def alexander_spread(self) -> int:
        a = [g.alexander for g in self.generators]
        return max(a) - min(a) if a else 0

    def restrict(self, keep) -> BigradedComplex:
        """Bigraded complex on the generators using arrows with ``keep(arrow)``."""
        gens = tuple(Generator(g.id, g.alexander, g.maslov) for g in self.generators)
        arrows = tuple(
            Arrow(a.source, a.target, a.coefficient) for a in self.arrows if keep(a)
        )
        return BigradedComplex(gens, arrows)

    def associated_graded(self) -> BigradedComplex:
        return self.restrict(lambda a: a.n_w == 0 and a.n_z == 0)

    def vertical_complex(self) -> BigradedComplex:
        """The column i = 0, i.e. arrows with n_w = 0; Alexander labels are dropped."""
        gens = tuple(Generator(g.id, 0, g.maslov) for g in self.generators)
        arrows = tuple(
            Arrow(a.source, a.target, a.coefficient) for a in self.arrows if a.n_w == 0
        )
        return BigradedComplex(gens, arrows)

    def shifted(self, alexander: int = 0, maslov: int = 0) -> "KnotComplex":
        gens = tuple(
            KnotGenerator(g.id, g.alexander + alexander, g.maslov + maslov)
            for g in self.generators
        )
        return replace(self, generators=gens)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "coefficients": self.coefficients.value,
            "generators": [
                {"id": g.id, "alexander": g.alexander, "maslov": g.maslov}
                for g in self.generators
            ],
            "arrows": [
                {
                    "from": a.source,
                    "to": a.target,
                    "n_w": a.n_w,
                    "n_z": a.n_z,
                    "coefficient": a.coefficient,
                }
                for a in self.arrows
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "KnotComplex":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported schema {obj.get('schema')!r}")
        gens = tuple(
            KnotGenerator(_key(g["id"]), int(g["alexander"]), int(g["maslov"]))
            for g in obj["generators"]
        )
        arrows = tuple(
            KnotArrow(
                _key(a["from"]), _key(a["to"]), int(a["n_w"]), int(a["n_z"]),
                int(a.get("coefficient", 1)),
            )
            for a in obj["arrows"]
        )
        return cls(gens, arrows, Coefficients.parse(obj.get("coefficients", "mod2")), obj.get("name"))


def _key(value):
    # JSON turns tuple ids (from connected sums) into lists
    if isinstance(value, list):
        return tuple(_key(v) for v in value)
    return value


def grading_violations(c: KnotComplex) -> list[KnotArrow]:
    """Arrows breaking dA = n_z - n_w, dM = 1 - 2 n_w or n_w, n_z >= 0."""
    idx = c.index
    bad = []
    for a in c.arrows:
        s, t = idx.get(a.source), idx.get(a.target)
        if s is None or t is None:
            bad.append(a)
            continue
        if (
            a.n_w < 0
            or a.n_z < 0
            or s.alexander - t.alexander != a.n_z - a.n_w
            or s.maslov - t.maslov != 1 - 2 * a.n_w
        ):
            bad.append(a)
    return bad


def u_model_d_squared(c: KnotComplex, coefficients=None) -> dict:
    """Nonzero coefficients of d^2 on the full complex, keyed by
    (source, target, n_w, n_z)."""
    coefficients = Coefficients.parse(coefficients or c.coefficients)
    out_arrows = defaultdict(list)
    for a in c.arrows:
        out_arrows[a.source].append(a)
    acc: dict = defaultdict(int)
    for a in c.arrows:
        for b in out_arrows[a.target]:
            acc[(a.source, b.target, a.n_w + b.n_w, a.n_z + b.n_z)] += (
                a.coefficient * b.coefficient
            )
    return {k: v for k, v in acc.items() if coefficients.reduce(v)}


def euler_of_generators(c: KnotComplex) -> LaurentPolynomial:
    acc: dict[int, int] = defaultdict(int)
    for g in c.generators:
        acc[g.alexander] += -1 if g.maslov % 2 else 1
    return LaurentPolynomial.from_exponents(acc)


def normalize_gradings(c: KnotComplex) -> KnotComplex:
    """Fix the absolute gradings of a relatively graded complex.

    The Alexander grading is shifted so the Euler characteristic is
    symmetric under T -> 1/T; the Maslov grading so the column i = 0
    (which computes the hat-homology of the three-sphere) is supported in
    degree zero.
    """
    chi = euler_of_generators(c)
    span = chi.degree_span()
    if span is None:
        raise AsymmetricEuler("Euler characteristic vanishes")
    lo, hi = span
    total = lo + hi
    if total.denominator != 1 or int(total) % 2:
        raise AsymmetricEuler(f"no integer shift symmetrizes {chi}")
    a_shift = -int(total) // 2
    if not chi.shift(a_shift).is_symmetric():
        raise AsymmetricEuler(f"no integer shift symmetrizes {chi}")
    c = c.shifted(alexander=a_shift)
    vert = homology(c.vertical_complex(), Coefficients.MOD2)
    if vert.total_rank != 1:
        raise NormalizationAmbiguous(
            f"column homology has rank {vert.total_rank}, expected 1"
        )
    ((_, degree),) = vert.free_ranks
    return c.shifted(maslov=-degree)


def find_signs(c: KnotComplex) -> tuple[int, ...]:
    """Search for arrow signs making d^2 = 0 over the integers.

    Backtracking over one sign per arrow; the first arrow is fixed to +1.
    Several assignments may exist; the first one found is returned.
    """
    arrows = list(c.arrows)
    by_source = defaultdict(list)
    for k, a in enumerate(arrows):
        by_source[a.source].append(k)
    constraints = defaultdict(list)
    for k, a in enumerate(arrows):
        for m in by_source[a.target]:
            b = arrows[m]
            constraints[(a.source, b.target, a.n_w + b.n_w, a.n_z + b.n_z)].append((k, m))
    if any(len(paths) % 2 for paths in constraints.values()):
        raise SignAssignmentFailed("d^2 is nonzero mod 2; no signs can fix it")
    # check each constraint once its last arrow has been assigned
    due = defaultdict(list)
    for paths in constraints.values():
        due[max(max(p) for p in paths)].append(paths)

    n = len(arrows)
    signs = [0] * n

    def ok(k):
        for paths in due[k]:
            if sum(signs[i] * signs[j] for i, j in paths) != 0:
                return False
        return True

    def search(k):
        if k == n:
            return True
        for s in ((1,) if k == 0 else (1, -1)):
            signs[k] = s
            if ok(k) and search(k + 1):
                return True
        signs[k] = 0
        return False

    if not search(0):
        raise SignAssignmentFailed("no sign assignment makes d^2 = 0 over Z")
    return tuple(signs)


def complex_from_arrangement(arr: Arrangement, name: str | None = None) -> KnotComplex:
    """Relatively graded mod 2 complex read off a stabilized arrangement."""
    n = len(arr.points)
    alex = [0] * n
    mas = [0] * n
    for k in range(1, n):
        phi = disk_class(arr, 0, k)
        # A(x) - A(y) = n_z - n_w and M(x) - M(y) = mu - 2 n_w for phi in pi_2(x, y)
        alex[k] = -(phi.n_z - phi.n_w)
        mas[k] = -(phi.maslov - 2 * phi.n_w)
    gens = tuple(KnotGenerator(k, alex[k], mas[k]) for k in range(n))
    arrows = tuple(
        KnotArrow(phi.source, phi.target, phi.n_w, phi.n_z)
        for phi in positive_mu1_classes(arr)
    )
    return KnotComplex(gens, arrows, Coefficients.MOD2, name)


def cfk_from_diagram(d: Diagram, coefficients=Coefficients.MOD2, max_doublings: int = 8) -> KnotComplex:
    coefficients = Coefficients.parse(coefficients)
    check(d)
    arr = stabilize(d, max_doublings)
    c = complex_from_arrangement(arr, d.name)
    if u_model_d_squared(c, Coefficients.MOD2):
        raise DifferentialNotSquareZero("computed differential does not square to zero")
    c = normalize_gradings(c)
    if coefficients is Coefficients.INTEGER:
        signs = find_signs(c)
        arrows = tuple(replace(a, coefficient=s) for a, s in zip(c.arrows, signs))
        c = replace(c, arrows=arrows, coefficients=Coefficients.INTEGER)
        if u_model_d_squared(c):
            raise SignAssignmentFailed("sign search returned an invalid assignment")
        z = hfk_hat(c)
        f2 = hfk_hat(replace(c, coefficients=Coefficients.MOD2))
        if z.free_ranks != f2.free_ranks or z.torsion:
            # legitimate when there is torsion, so only report it
            log.warning("integer and mod 2 hat-homology differ for %s", d.name or "diagram")
    return c


def hfk_hat(c: KnotComplex) -> GradedGroups:
    return homology(c.associated_graded(), c.coefficients)


def vertical_homology(c: KnotComplex) -> HomologySummary:
    return homology(c.vertical_complex(), c.coefficients)
