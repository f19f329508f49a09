import json
import logging
from dataclasses import replace

import pytest

from knotfloer.algebra import Coefficients
from knotfloer.checks import NINE_42_ARROWS, NINE_42_GRADINGS, NINE_42_HFK
from knotfloer.diagram import BUILTIN_NAMES, builtin
from knotfloer.errors import AsymmetricEuler, NormalizationAmbiguous, SignAssignmentFailed
from knotfloer.floer import (
    KnotArrow,
    KnotComplex,
    KnotGenerator,
    cfk_from_diagram,
    euler_of_generators,
    find_signs,
    grading_violations,
    hfk_hat,
    normalize_gradings,
    u_model_d_squared,
    vertical_homology,
)
from knotfloer.invariants import genus_lower_bound


def test_unknot(complexes):
    c = complexes["unknot"]
    assert [(g.alexander, g.maslov) for g in c.generators] == [(0, 0)]
    assert c.arrows == ()
    assert hfk_hat(c).free_ranks == {(0, 0): 1}


def test_trefoil_left(complexes):
    c = complexes["trefoil_left"]
    assert sorted((g.alexander, g.maslov) for g in c.generators) == [(-1, 0), (0, 1), (1, 2)]
    assert sorted((a.n_w, a.n_z) for a in c.arrows) == [(0, 1), (1, 0)]
    assert hfk_hat(c).free_ranks == {(1, 2): 1, (0, 1): 1, (-1, 0): 1}


def test_nine_42_matches_hand_table(complexes):
    c = complexes["knot_9_42"]
    assert {g.id + 1: (g.alexander, g.maslov) for g in c.generators} == NINE_42_GRADINGS
    arrows = {(a.source + 1, a.target + 1, a.n_w, a.n_z) for a in c.arrows}
    assert arrows == NINE_42_ARROWS
    assert hfk_hat(c).free_ranks == NINE_42_HFK


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_structural_invariants(complexes, name):
    c = complexes[name]
    assert grading_violations(c) == []
    assert u_model_d_squared(c) == {}
    v = vertical_homology(c)
    assert v.free_ranks == {(0, 0): 1}
    h = hfk_hat(c)
    # symmetry HFK_{A,M} = HFK_{-A, M-2A}
    assert h.free_ranks == {(-a, m - 2 * a): r for (a, m), r in h.free_ranks.items()}
    assert h.total_rank % 2 == 1


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_mirror_negates_gradings(complexes, name):
    mirror = cfk_from_diagram(builtin(name).reflected())
    h = hfk_hat(complexes[name]).free_ranks
    assert hfk_hat(mirror).free_ranks == {(-a, -m): r for (a, m), r in h.items()}


def test_trefoils_are_mirrors(complexes):
    assert hfk_hat(cfk_from_diagram(builtin("trefoil_right").reflected())).free_ranks == \
        hfk_hat(complexes["trefoil_left"]).free_ranks


@pytest.mark.parametrize("name,genus,rank", [
    ("unknot", 0, 1), ("trefoil_left", 1, 3), ("trefoil_right", 1, 3),
    ("figure_eight", 1, 5), ("knot_9_42", 2, 9),
])
def test_genus_and_rank(complexes, name, genus, rank):
    h = hfk_hat(complexes[name])
    assert genus_lower_bound(h) == genus
    assert h.total_rank == rank


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_integer_mode(name):
    c = cfk_from_diagram(builtin(name), Coefficients.INTEGER)
    assert c.coefficients is Coefficients.INTEGER
    assert u_model_d_squared(c) == {}
    z = hfk_hat(c)
    assert z.torsion == ()
    assert z.free_ranks == hfk_hat(replace(c, coefficients=Coefficients.MOD2)).free_ranks


def test_sign_search_rejects_mod2_failure():
    gens = [KnotGenerator(0, 0, 2), KnotGenerator(1, 0, 1), KnotGenerator(2, 0, 0)]
    c = KnotComplex(gens, [KnotArrow(0, 1, 0, 0), KnotArrow(1, 2, 0, 0)])
    with pytest.raises(SignAssignmentFailed):
        find_signs(c)


def test_square_needs_a_minus_sign():
    gens = [KnotGenerator(0, 0, 2), KnotGenerator(1, 0, 1), KnotGenerator(2, 0, 1), KnotGenerator(3, 0, 0)]
    arrows = [KnotArrow(0, 1, 0, 0), KnotArrow(0, 2, 0, 0), KnotArrow(1, 3, 0, 0), KnotArrow(2, 3, 0, 0)]
    signs = find_signs(KnotComplex(gens, arrows))
    assert signs[0] == 1
    assert signs[0] * signs[2] + signs[1] * signs[3] == 0


def test_grading_violations_rejected():
    with pytest.raises(ValueError):
        KnotComplex([KnotGenerator(0, 0, 1), KnotGenerator(1, 0, 0)], [KnotArrow(0, 1, 0, 1)])


def test_normalization_shifts_to_symmetric():
    c = KnotComplex(
        [KnotGenerator(0, 5, 7), KnotGenerator(1, 4, 6), KnotGenerator(2, 3, 5)],
        [KnotArrow(1, 0, 1, 0), KnotArrow(1, 2, 0, 1)],
    )
    n = normalize_gradings(c)
    assert [(g.alexander, g.maslov) for g in n.generators] == [(1, 0), (0, -1), (-1, -2)]
    assert euler_of_generators(n).is_symmetric()


def test_normalization_failures():
    with pytest.raises(AsymmetricEuler):
        normalize_gradings(KnotComplex([KnotGenerator(0, 0, 0), KnotGenerator(1, 1, 0)], []))
    with pytest.raises(NormalizationAmbiguous):
        normalize_gradings(KnotComplex(
            [KnotGenerator(0, 1, 0), KnotGenerator(1, 0, 0), KnotGenerator(2, -1, 0)], []))


def test_json_roundtrip(complexes):
    for c in complexes.values():
        again = KnotComplex.from_json(json.loads(c.dumps()))
        assert again == c


def test_integer_mismatch_only_warns(caplog, monkeypatch):
    import knotfloer.floer as floer

    real = floer.hfk_hat
    calls = []

    def fake(c):
        calls.append(c.coefficients)
        h = real(c)
        if c.coefficients is Coefficients.INTEGER:
            return replace(h, torsion=((0, 0, 2),))
        return h

    monkeypatch.setattr(floer, "hfk_hat", fake)
    with caplog.at_level(logging.WARNING, logger="knotfloer.floer"):
        cfk_from_diagram(builtin("trefoil_right"), Coefficients.INTEGER)
    assert "differ" in caplog.text
