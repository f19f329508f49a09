"""Acceptance checks shared by ``knotfloer selftest`` and the test suite.

Each check returns a :class:`CheckResult` carrying expected and actual
values.  Oracles are written out here independently of the library code
they test (hard-coded tables, brute-force convolutions, dense elimination).
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import LaurentPolynomial, euler_characteristic
from .diagram import BUILTIN_NAMES, builtin
from .fibered import (
    Gamma,
    borromean_hfk,
    build_x,
    d_gamma,
    d_gamma_prime,
    dense,
    hf_dehn_twist,
    hf_sigma_times_s1,
    macdonald_oracle,
    matmul,
)
from .floer import KnotComplex, cfk_from_diagram, grading_violations, hfk_hat, vertical_homology
from .invariants import (
    RegionSpec,
    connected_sum,
    genus_lower_bound,
    region_homology,
)

# x1..x9 of the 9_42 diagram: (Alexander, Maslov)
NINE_42_GRADINGS = {
    1: (-1, 0), 2: (0, 1), 3: (-1, 0), 4: (-2, -1), 5: (0, 0),
    6: (2, 3), 7: (1, 2), 8: (0, 1), 9: (1, 2),
}
# (source, target, n_w, n_z)
NINE_42_ARROWS = frozenset({
    (1, 2, 1, 0), (1, 4, 0, 1), (2, 3, 0, 1), (4, 3, 1, 0),
    (5, 2, 1, 1), (5, 4, 0, 2), (5, 6, 2, 0), (5, 8, 1, 1),
    (6, 7, 0, 1), (8, 7, 1, 0), (9, 6, 1, 0), (9, 8, 0, 1),
})
NINE_42_HFK = {(2, 3): 1, (1, 2): 2, (0, 1): 2, (0, 0): 1, (-1, 0): 2, (-2, -1): 1}
TREFOIL_RIGHT_HFK = {(1, 0): 1, (0, -1): 1, (-1, -2): 1}
BORROMEAN_1 = {(1, 1): 1, (0, 0): 2, (-1, -1): 1}


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    expected: object
    actual: object
    seconds: float = 0.0


@dataclass(frozen=True)
class Check:
    number: int
    title: str
    tags: tuple[str, ...]
    run: Callable[[], CheckResult]

    def matches(self, text: str | None) -> bool:
        if not text:
            return True
        text = text.lower()
        return text in self.title.lower() or any(text in t for t in self.tags)


_cache: dict[str, KnotComplex] = {}


def complex_of(name: str) -> KnotComplex:
    if name not in _cache:
        _cache[name] = cfk_from_diagram(builtin(name))
    return _cache[name]


def _poly(terms: dict) -> LaurentPolynomial:
    return LaurentPolynomial.from_exponents(terms)


# --------------------------------------------------------------------------
# independent oracles

def relabeling_exists(c: KnotComplex, gradings: dict, arrows: frozenset) -> bool:
    """Is there a bijection oracle ids -> complex ids preserving everything?"""
    gens = {g.id: (g.alexander, g.maslov) for g in c.generators}
    have = {(a.source, a.target, a.n_w, a.n_z) for a in c.arrows if a.coefficient % 2}
    if len(gens) != len(gradings) or len(have) != len(arrows):
        return False
    order = sorted(gradings)

    def extend(k, used, mapping):
        if k == len(order):
            image = {(mapping[s], mapping[t], w, z) for s, t, w, z in arrows}
            return image == have
        o = order[k]
        for gid, gr in gens.items():
            if gid not in used and gr == gradings[o]:
                mapping[o] = gid
                if extend(k + 1, used | {gid}, mapping):
                    return True
        return False

    return extend(0, frozenset(), {})


def brute_convolution(*tables: dict) -> dict:
    out = Counter({(0, 0): 1})
    for table in tables:
        nxt = Counter()
        for (a1, m1), r1 in out.items():
            for (a2, m2), r2 in table.items():
                nxt[(a1 + a2, m1 + m2)] += r1 * r2
        out = nxt
    return {k: v for k, v in out.items() if v}


def dense_rank(rows: list[list[int]]) -> int:
    """Rank over Q by Gaussian elimination on Fractions."""
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def dense_homology_rank(n: int, matrix: dict) -> int:
    """dim ker - dim im for a square differential, over Q."""
    rows = dense(matrix, n)
    r = dense_rank(rows) if n else 0
    return n - 2 * r


# --------------------------------------------------------------------------
# the criteria

def _timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def check_trefoil_table() -> CheckResult:
    _cache.pop("trefoil_right", None)
    h, secs = _timed(lambda: hfk_hat(complex_of("trefoil_right")))
    actual = dict(h.free_ranks)
    return CheckResult(actual == TREFOIL_RIGHT_HFK and secs < 1.0,
                       {"ranks": TREFOIL_RIGHT_HFK, "under_1s": True},
                       {"ranks": actual, "under_1s": secs < 1.0}, secs)


def check_942_complex() -> CheckResult:
    _cache.pop("knot_9_42", None)
    c, secs = _timed(lambda: complex_of("knot_9_42"))
    ok = relabeling_exists(c, NINE_42_GRADINGS, NINE_42_ARROWS)
    return CheckResult(ok and secs < 10.0,
                       {"arrows": 12, "relabeling": True, "under_10s": True},
                       {"arrows": len(c.arrows), "relabeling": ok, "under_10s": secs < 10.0},
                       secs)


def check_942_homology() -> CheckResult:
    actual = dict(hfk_hat(complex_of("knot_9_42")).free_ranks)
    return CheckResult(actual == NINE_42_HFK, NINE_42_HFK, actual)


def check_euler() -> CheckResult:
    expected = {
        "trefoil_right": _poly({1: 1, 0: -1, -1: 1}),
        "knot_9_42": _poly({2: 1, 1: -2, 0: 3, -1: -2, -2: 1}),
    }
    actual = {}
    ok = True
    for name, want in expected.items():
        chi = euler_characteristic(hfk_hat(complex_of(name)))
        actual[name] = str(chi)
        ok &= chi == want and chi.is_symmetric() and abs(chi.evaluate_at_one()) == 1
    return CheckResult(ok, {k: str(v) for k, v in expected.items()}, actual)


def check_symmetries() -> CheckResult:
    bad = []
    for name in BUILTIN_NAMES:
        ranks = dict(hfk_hat(complex_of(name)).free_ranks)
        for (a, m), r in ranks.items():
            if ranks.get((-a, m - 2 * a), 0) != r:
                bad.append((name, "conjugation", (a, m)))
        mirror = dict(hfk_hat(cfk_from_diagram(builtin(name).reflected())).free_ranks)
        if mirror != {(-a, -m): r for (a, m), r in ranks.items()}:
            bad.append((name, "mirror"))
    return CheckResult(not bad, [], bad)


def check_vertical() -> CheckResult:
    actual = {n: dict(vertical_homology(complex_of(n)).ranks_by_maslov()) for n in BUILTIN_NAMES}
    return CheckResult(all(v == {0: 1} for v in actual.values()),
                       {n: {0: 1} for n in BUILTIN_NAMES}, actual)


def check_box() -> CheckResult:
    c = complex_of("knot_9_42")
    box = region_homology(c, RegionSpec("Box", t=1))
    top = hfk_hat(c).ranks_by_alexander().get(2, 0)
    actual = {"box_rank": box.reduced.total_rank, "towers": len(box.towers), "hfk_top": top}
    return CheckResult(actual == {"box_rank": 1, "towers": 0, "hfk_top": 1},
                       {"box_rank": 1, "towers": 0, "hfk_top": 1}, actual)


def check_large_surgery() -> CheckResult:
    bad = []
    for name in BUILTIN_NAMES:
        c = complex_of(name)
        g = genus_lower_bound(hfk_hat(c))
        for m in [s * (g + k) for k in (1, 2, 3) for s in (1, -1)]:
            s = region_homology(c, RegionSpec("IAndJ", m=m))
            if len(s.towers) != 1 or s.reduced.total_rank:
                bad.append((name, m, len(s.towers), s.reduced.total_rank))
    return CheckResult(not bad, [], bad)


def check_kunneth() -> CheckResult:
    c = complex_of("trefoil_right")
    actual = dict(hfk_hat(connected_sum(c, c)).free_ranks)
    expected = brute_convolution(TREFOIL_RIGHT_HFK, TREFOIL_RIGHT_HFK)
    return CheckResult(actual == expected, expected, actual)


def check_macdonald() -> CheckResult:
    t0 = time.perf_counter()
    bad = []
    for g in range(5):
        for d in range(5):
            x, mac = build_x(g, d).rank, sum(macdonald_oracle(g, d).values())
            if x != mac:
                bad.append((g, d, x, mac))
    base = (build_x(2, 0).rank, hf_sigma_times_s1(2, 1).total_rank)
    secs = time.perf_counter() - t0
    ok = not bad and base == (1, 1) and secs < 1.0
    return CheckResult(ok, {"mismatches": [], "X(2,0)": (1, 1), "under_1s": True},
                       {"mismatches": bad, "X(2,0)": base, "under_1s": secs < 1.0}, secs)


def check_d_squared() -> CheckResult:
    bad = []
    for g in range(1, 4):
        for d in range(4):
            x = build_x(g, d)
            for k in range(2 * g):
                gamma = Gamma(tuple(int(i == k) for i in range(2 * g)))
                if matmul(d_gamma(x, gamma), d_gamma(x, gamma)):
                    bad.append(("D", g, d, k))
            for name in ("a1", "b1"):
                dp = d_gamma_prime(x, Gamma.basis(g, name))
                if matmul(dp, dp):
                    bad.append(("D'", g, d, name))
    return CheckResult(not bad, [], bad)


def check_dehn_twist() -> CheckResult:
    x = build_x(3, 1)
    oracle = dense_homology_rank(x.rank, d_gamma_prime(x, Gamma.basis(3, "a1")))
    library = hf_dehn_twist(3, 1).total_rank
    return CheckResult(oracle == library == 6, 6, {"dense": oracle, "library": library})


def check_borromean() -> CheckResult:
    one = dict(borromean_hfk(1).free_ranks)
    two = dict(borromean_hfk(2).free_ranks)
    conv = brute_convolution(BORROMEAN_1, BORROMEAN_1)
    return CheckResult(one == BORROMEAN_1 and two == conv,
                       {"g1": BORROMEAN_1, "g2": conv}, {"g1": one, "g2": two})


def check_arrow_gradings() -> CheckResult:
    bad = {}
    for name in BUILTIN_NAMES:
        v = grading_violations(complex_of(name))
        if v:
            bad[name] = [str(a) for a in v]
    return CheckResult(not bad, {}, bad)


CHECKS: tuple[Check, ...] = (
    Check(1, "trefoil table", ("trefoil", "trefoil_right", "hfk"), check_trefoil_table),
    Check(2, "9_42 complex oracle", ("knot_9_42", "9_42", "complex"), check_942_complex),
    Check(3, "9_42 homology", ("knot_9_42", "9_42", "hfk"), check_942_homology),
    Check(4, "Euler characteristics", ("trefoil", "knot_9_42", "9_42", "euler"), check_euler),
    Check(5, "symmetry suite", ("symmetry", "mirror", "trefoil", "builtins"), check_symmetries),
    Check(6, "vertical homology", ("vertical", "trefoil", "builtins"), check_vertical),
    Check(7, "top Alexander box region", ("knot_9_42", "9_42", "region"), check_box),
    Check(8, "large-surgery triviality", ("surgery", "region", "trefoil", "builtins"), check_large_surgery),
    Check(9, "Kunneth", ("trefoil", "connected_sum", "kunneth"), check_kunneth),
    Check(10, "X(g,d) vs MacDonald", ("fibered", "macdonald"), check_macdonald),
    Check(11, "differentials square to zero", ("fibered", "d_gamma"), check_d_squared),
    Check(12, "Dehn twist", ("fibered", "dehn_twist"), check_dehn_twist),
    Check(13, "Borromean", ("fibered", "borromean"), check_borromean),
    Check(14, "arrow gradings", ("property", "trefoil", "builtins"), check_arrow_gradings),
)


def run_check(check: Check) -> CheckResult:
    try:
        return check.run()
    except Exception as exc:  # a broken builtin must fail its check, not crash the run
        return CheckResult(False, "no exception", f"{type(exc).__name__}: {exc}")


def format_line(check: Check, result: CheckResult) -> str:
    status = "PASS" if result.ok else "FAIL"
    line = f"[{status}] {check.number:2d}. {check.title}"
    if not result.ok:
        line += f" | expected {result.expected} | actual {result.actual}"
    return line
