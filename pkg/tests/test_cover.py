import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotfloer import geometry as geo
from knotfloer.cover import corner_multiplicity, disk_class, lift, positive_mu1_classes, stabilize
from knotfloer.diagram import builtin
from knotfloer.errors import StabilizationLimitExceeded

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tools"))
from normal_form import family  # noqa: E402

ARR = {name: stabilize(builtin(name)) for name in
       ("unknot", "trefoil_left", "trefoil_right", "figure_eight", "knot_9_42")}


def small_diagrams():
    for n in range(1, 6):
        yield from family(n)


def canonical_maslov(a, x, y):
    """Sum of +-1 over the bigons between alpha-consecutive points."""
    lo, hi = sorted((x, y))
    total = sum(1 if geo.signed_area(a.boundary_loop(i, i + 1)) > 0 else -1 for i in range(lo, hi))
    return total if x < y else -total


def test_point_counts():
    assert {k: len(a) for k, a in ARR.items()} == {
        "unknot": 1, "trefoil_left": 3, "trefoil_right": 3, "figure_eight": 5, "knot_9_42": 9,
    }


def test_points_ordered_along_alpha():
    for a in ARR.values():
        assert [p.index for p in a.points] == list(range(len(a)))


def test_trefoil_left_disks():
    a = ARR["trefoil_left"]
    classes = positive_mu1_classes(a)
    assert len(classes) == 2
    assert sorted((c.n_w, c.n_z) for c in classes) == [(0, 1), (1, 0)]
    assert all(c.is_positive and c.maslov == 1 for c in classes)


def test_nine_42_counted_disk():
    c = disk_class(ARR["knot_9_42"], 0, 3)
    assert (c.n_w, c.n_z, c.maslov) == (0, 1, 1)
    assert sorted(m for m in c.multiplicities if m) == [1, 1]


@pytest.mark.parametrize("name", sorted(ARR))
def test_all_domains_nonnegative_counts(name):
    a = ARR[name]
    for c in positive_mu1_classes(a):
        assert c.n_w >= 0 and c.n_z >= 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(ARR)), st.data())
def test_additivity_and_antisymmetry(name, data):
    a = ARR[name]
    n = len(a)
    if n < 3:
        return
    x, y, z = data.draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))
    xy, yz, xz = disk_class(a, x, y), disk_class(a, y, z), disk_class(a, x, z)
    assert tuple(p + q for p, q in zip(xy.multiplicities, yz.multiplicities)) == xz.multiplicities
    assert (xy.n_w + yz.n_w, xy.n_z + yz.n_z, xy.maslov + yz.maslov) == (xz.n_w, xz.n_z, xz.maslov)
    yx = disk_class(a, y, x)
    assert yx.multiplicities == tuple(-m for m in xy.multiplicities)
    assert yx.maslov == -xy.maslov


def test_maslov_matches_canonical_disks():
    checked = 0
    for _, d in small_diagrams():
        a = stabilize(d)
        for x in range(len(a)):
            for y in range(len(a)):
                if x != y:
                    assert disk_class(a, x, y).maslov == canonical_maslov(a, x, y)
                    checked += 1
    assert checked > 100


def test_corner_multiplicity_examples():
    a = ARR["knot_9_42"]
    c = disk_class(a, 0, 3)
    assert corner_multiplicity(a, c, 0) == Fraction(1, 4)
    assert corner_multiplicity(a, c, 3) == Fraction(1, 4)
    far = next(p for p in range(len(a)) if all(
        f is None or c.multiplicities[f] == 0 for f in a.points[p].corners))
    assert corner_multiplicity(a, c, far) == 0


def test_stabilization_is_window_independent():
    d = builtin("figure_eight")
    a = stabilize(d)
    bigger = lift(d, a.window_scale * 2)
    assert [c.key() for c in positive_mu1_classes(bigger)] == [c.key() for c in positive_mu1_classes(a)]


def test_stabilization_limit():
    with pytest.raises(StabilizationLimitExceeded):
        stabilize(builtin("knot_9_42"), max_doublings=0)


def test_arrangement_json_shape():
    j = ARR["trefoil_right"].to_json()
    assert len(j["points"]) == 3
    assert all(len(p["corners"]) == 4 for p in j["points"])
