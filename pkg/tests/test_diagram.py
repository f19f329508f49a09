import json
from fractions import Fraction as F

import pytest

from knotfloer.diagram import (
    BASEPOINT_ON_CURVE,
    BUILTIN_NAMES,
    COINCIDENT_BASEPOINTS,
    INTERSECTION_NUMBER_NOT_UNIT,
    NOT_TRANSVERSE,
    NULL_HOMOTOPIC_CURVE,
    SELF_INTERSECTING,
    Diagram,
    PLLoop,
    builtin,
    check,
    intersections,
    load,
    parse_diagram,
    validate,
)
from knotfloer.errors import ParseError, UnknownDiagram, ValidationError

BETA = PLLoop(((0, 0),), (1, 0))
ALPHA = PLLoop(((F(1, 2), F(1, 3)), (F(1, 2), F(2, 3))), (0, 1))
W, Z = (0, F(1, 4)), (0, F(3, 4))


def reasons(d):
    return {v.reason for v in validate(d)}


@pytest.mark.parametrize(
    "name,count", [("unknot", 1), ("trefoil_left", 3), ("trefoil_right", 3),
                   ("figure_eight", 5), ("knot_9_42", 9)]
)
def test_builtin_intersection_counts(name, count):
    crossings, defects = intersections(builtin(name))
    assert len(crossings) == count and not defects
    signs = sum(c[-1] for c in crossings)
    assert abs(signs) == 1


def test_unknot_is_valid():
    assert validate(Diagram(ALPHA, BETA, W, Z)) == []


def test_self_intersecting():
    # alpha makes a loop on itself before closing up
    alpha = PLLoop(((F(1, 2), F(1, 8)), (F(3, 4), F(3, 8)), (F(1, 4), F(3, 8)),
                    (F(1, 2), F(1, 8) + F(1, 10)), (F(1, 2), F(3, 4))), (0, 1))
    assert SELF_INTERSECTING in reasons(Diagram(alpha, BETA, W, Z))


def test_non_primitive_period_is_self_intersecting():
    alpha = PLLoop(((F(1, 2), F(1, 3)),), (0, 2))
    assert SELF_INTERSECTING in reasons(Diagram(alpha, BETA, W, Z))


def test_not_transverse():
    # alpha runs along beta for a while
    alpha = PLLoop(((F(1, 2), F(1, 2)), (F(1, 2), F(1)), (F(3, 4), F(1)), (F(3, 4), F(3, 2))), (0, 1))
    assert NOT_TRANSVERSE in reasons(Diagram(alpha, BETA, W, Z))


def test_basepoint_on_curve():
    assert BASEPOINT_ON_CURVE in reasons(Diagram(ALPHA, BETA, (F(1, 2), F(1, 2)), Z))
    assert BASEPOINT_ON_CURVE in reasons(Diagram(ALPHA, BETA, W, (F(1, 5), 0)))


def test_intersection_number_not_unit():
    assert INTERSECTION_NUMBER_NOT_UNIT in reasons(
        Diagram(PLLoop(((0, F(1, 2)),), (1, 0)), BETA, W, Z)
    )


def test_null_homotopic():
    alpha = PLLoop(((F(1, 4), F(1, 4)), (F(3, 4), F(1, 4)), (F(3, 4), F(3, 4))), (0, 0))
    assert NULL_HOMOTOPIC_CURVE in reasons(Diagram(alpha, BETA, W, Z))


def test_coincident_basepoints():
    assert COINCIDENT_BASEPOINTS in reasons(Diagram(ALPHA, BETA, W, W))


def test_check_raises_with_all_violations():
    with pytest.raises(ValidationError) as info:
        check(Diagram(ALPHA, BETA, W, W))
    assert info.value.violations


def test_json_roundtrip():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        again = parse_diagram(d.dumps())
        assert again == d and again.name == name


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_diagram("{not json")
    with pytest.raises(ParseError):
        parse_diagram(json.dumps({"alpha": []}))
    good = builtin("unknot").to_json()
    good["w"] = [0.5, "1/4"]
    with pytest.raises(ParseError):
        parse_diagram(json.dumps(good))
    good = builtin("unknot").to_json()
    good["alpha_period"] = [0, "1"]
    with pytest.raises(ParseError):
        parse_diagram(json.dumps(good))
    with pytest.raises(ParseError):
        parse_diagram(b"\xff\xfe")


def test_unknown_builtin():
    with pytest.raises(UnknownDiagram):
        builtin("no_such_knot")


def test_load_path(tmp_path):
    p = tmp_path / "d.json"
    p.write_text(builtin("trefoil_right").dumps())
    assert load(str(p)) == builtin("trefoil_right")
    assert load("unknot") == builtin("unknot")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_reflection_validates(name):
    d = builtin(name).reflected()
    assert validate(d) == []
    assert d.reflected() == builtin(name)
