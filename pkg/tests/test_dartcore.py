import pytest
from hypothesis import given, settings, strategies as st

from fourcolor.cartwheel import generate_cartwheel
from fourcolor.dartcore import (NIL, MultipleDarts, PseudoTriangulation, RotationDiscrepancy, DisconnectedFromRoot,
                                canonical_form, canonical_key, dumps, format_rotations, from_rotations, iso,
                                loads, mirror, parse_rotations, terminal, to_rotations, validate)
from fourcolor.triangulations import random_triangulation

TRIANGLE = [[1, 2], [2, 0], [0, 1]]


def test_triangle_has_six_inner_darts():
    Z = from_rotations(TRIANGLE)
    assert Z.n_darts == 6
    assert validate(Z) == []
    assert all(Z.classify(v) == "inner" and Z.degree(v) == 2 for v in range(3))


def test_single_edge_is_boundary():
    Z = from_rotations([[1, -1], [0, -1]])
    assert Z.n_darts == 2
    assert Z.succ == [NIL, NIL] and Z.pred == [NIL, NIL]
    assert [Z.classify(v) for v in range(2)] == ["boundary", "boundary"]
    assert Z.degree(0) == 1
    assert validate(Z) == []


def test_asymmetric_rotation_is_rejected():
    with pytest.raises(RotationDiscrepancy):
        from_rotations([[1], []])


def test_repeated_neighbour_is_rejected():
    with pytest.raises(MultipleDarts):
        from_rotations([[1, 1], [0]])


def test_terminal_is_valid():
    assert validate(terminal()) == []


def test_broken_reverse_names_m2():
    Z = from_rotations(TRIANGLE)
    rev = list(Z.rev)
    rev[0] = 1 if rev[0] != 1 else 2
    report = validate(PseudoTriangulation(3, Z.head, rev, Z.succ, Z.pred))
    assert any(v.requirement == "M2" and v.witness == 0 for v in report)


def test_mirror_is_an_involution_and_triangle_mirror_is_isomorphic():
    Z = from_rotations([[1, 2, -1], [2, 0, -1], [0, 1, -1]])
    assert mirror(mirror(Z)) == Z
    assert mirror(Z) != Z
    assert iso(Z, mirror(Z))


def test_triangle_is_dart_transitive():
    Z = from_rotations(TRIANGLE)
    assert len({canonical_form(Z, r) for r in range(6)}) == 1


def test_birkhoff_completion_is_mirror_symmetric(conf):
    Z = conf("birkhoff").completion()
    assert iso(Z, mirror(Z))


def test_asymmetric_rule_graph_is_not_mirror_symmetric_at_its_arrow(sample_rules):
    rule = next(r for r in sample_rules if r.name == "S6")
    assert canonical_form(rule.conf.Z, rule.dart, rule.conf.labels()) != \
        canonical_form(mirror(rule.conf.Z), rule.dart, rule.conf.labels())


def test_canonical_form_needs_connectivity():
    Z = from_rotations([[1, -1], [0, -1], [3, -1], [2, -1]])
    with pytest.raises(DisconnectedFromRoot):
        canonical_form(Z, 0)


def test_wheel_center_degree():
    C = generate_cartwheel(7, [5] * 7)
    assert C.Z.degree(0) == 7 and C.Z.classify(0) == "inner"


def test_text_and_json_forms_round_trip():
    rot = [[1, 2, -1], [2, 0, -1], [0, 1, -1]]
    assert parse_rotations(format_rotations(rot)) == rot
    Z = from_rotations(rot)
    assert loads(dumps(Z)) == Z


@settings(max_examples=30, deadline=None)
@given(n=st.integers(4, 60), seed=st.integers(0, 10**6))
def test_rotation_round_trip_and_validity(n, seed):
    rot = random_triangulation(n, seed)
    Z = from_rotations(rot)
    assert validate(Z) == []
    assert Z.n_darts % 2 == 0
    back = to_rotations(Z)
    assert from_rotations(back) == Z or iso(from_rotations(back), Z)
    assert canonical_key(Z) == canonical_key(from_rotations(back))
