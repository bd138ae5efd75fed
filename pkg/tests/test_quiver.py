"""Quiver parsing, predicates, opposite, and the algebra classification."""

import json
from itertools import product

import pytest

from quivdiff import (
    classify_algebra,
    connected_components,
    is_acyclic,
    is_basic_cycle,
    is_connected,
    make_quiver,
    opposite,
    parse_quiver,
)
from quivdiff.errors import EmptyQuiverError, ParseError
from quivdiff.quiver import (
    SHAPE_ACYCLIC,
    SHAPE_BASIC_CYCLE,
    SHAPE_CYCLIC_NON_BASIC,
    VERDICT_GORENSTEIN,
    VERDICT_NOT_VIRTUALLY_GORENSTEIN,
    VERDICT_SELFINJECTIVE,
    Quiver,
    quiver_to_json,
    quiver_to_text,
)

from gen import A2, A3, LOOP, LOOP_PLUS_ARROW, THREE_CYCLE, TRIANGLE, TWO_CYCLE


def test_parse_a2():
    Q = parse_quiver("vertices 1 2; arrows a: 1 -> 2;")
    assert Q == A2


def test_parse_triangle_source_text():
    text = """
    # two composable arrows and a direct shortcut
    vertices 1 2 3 ;
    arrows alpha: 1 -> 2, beta: 2 -> 3, gamma: 1 -> 3 ;
    """
    assert parse_quiver(text) == TRIANGLE


def test_parse_unknown_endpoint():
    with pytest.raises(ParseError) as err:
        parse_quiver("vertices 1 2; arrows a: 1 -> 3;")
    assert "3" in str(err.value)
    assert err.value.line is not None


def test_parse_duplicate_names():
    with pytest.raises(ParseError):
        parse_quiver("vertices 1 1; arrows ;")
    with pytest.raises(ParseError):
        parse_quiver("vertices 1; arrows a: 1 -> 1, a: 1 -> 1;")


def test_parse_reports_position():
    with pytest.raises(ParseError) as err:
        parse_quiver("vertices 1 2 ;\narrows a: 1 -> ;")
    assert err.value.line == 2


def test_parse_empty_arrow_block_and_no_arrows():
    Q = parse_quiver("vertices 1 2; arrows ;")
    assert Q.n_arrows == 0


def test_text_and_json_round_trips():
    for Q in (A2, TRIANGLE, LOOP, LOOP_PLUS_ARROW):
        assert parse_quiver(quiver_to_text(Q)) == Q
        assert parse_quiver(json.dumps(quiver_to_json(Q))) == Q


def test_opposite_a2():
    op = opposite(A2)
    assert op.arrows[0].src == "2" and op.arrows[0].tgt == "1"
    assert op.arrows[0].name == "a*"


def test_opposite_loop_self_dual():
    op = opposite(LOOP)
    assert op.arrows[0].src == op.arrows[0].tgt == "1"


def test_opposite_involution():
    for Q in (A2, A3, TRIANGLE, LOOP_PLUS_ARROW, TWO_CYCLE):
        assert opposite(opposite(Q)) == Q


def test_opposite_triangle_reverses_all():
    op = opposite(TRIANGLE)
    assert [(a.src, a.tgt) for a in op.arrows] == [("2", "1"), ("3", "2"), ("3", "1")]


def test_is_acyclic():
    assert is_acyclic(A3)
    assert not is_acyclic(LOOP)
    assert not is_acyclic(LOOP_PLUS_ARROW)
    assert is_acyclic(TRIANGLE)


def test_connectivity():
    two_points = make_quiver(["1", "2"], [])
    assert not is_connected(two_points)
    assert len(connected_components(two_points)) == 2
    assert is_connected(A2)
    assert not is_connected(Quiver((), ()))


def test_components_of_disjoint_union():
    Q = make_quiver(
        ["1", "2", "3"], [("l", "1", "1"), ("a", "2", "3")]
    )
    comps = connected_components(Q)
    assert len(comps) == 2
    assert comps[0] == make_quiver(["1"], [("l", "1", "1")])
    assert comps[1] == make_quiver(["2", "3"], [("a", "2", "3")])


def test_is_basic_cycle():
    assert is_basic_cycle(LOOP)
    assert is_basic_cycle(TWO_CYCLE)
    assert is_basic_cycle(THREE_CYCLE)
    assert not is_basic_cycle(LOOP_PLUS_ARROW)  # vertex 2 has out-degree 0
    assert not is_basic_cycle(A2)
    two_loops = make_quiver(["1"], [("a", "1", "1"), ("b", "1", "1")])
    assert not is_basic_cycle(two_loops)


def test_classify_goldens():
    assert classify_algebra(A3).components[0].verdict == VERDICT_GORENSTEIN
    assert classify_algebra(A2).components[0].verdict == VERDICT_GORENSTEIN
    assert classify_algebra(TRIANGLE).components[0].verdict == VERDICT_GORENSTEIN
    for Q in (LOOP, TWO_CYCLE, THREE_CYCLE):
        assert classify_algebra(Q).components[0].verdict == VERDICT_SELFINJECTIVE
    assert (
        classify_algebra(LOOP_PLUS_ARROW).components[0].verdict
        == VERDICT_NOT_VIRTUALLY_GORENSTEIN
    )


def test_classify_empty_quiver():
    with pytest.raises(EmptyQuiverError):
        classify_algebra(Quiver((), ()))


def test_classify_per_component():
    Q = make_quiver(
        ["1", "2", "3"], [("l", "1", "1"), ("a", "2", "3")]
    )
    verdicts = [c.verdict for c in classify_algebra(Q).components]
    assert verdicts == [VERDICT_SELFINJECTIVE, VERDICT_GORENSTEIN]


def _all_connected_quivers(max_vertices, max_arrows):
    for nv in range(1, max_vertices + 1):
        vertices = [str(i + 1) for i in range(nv)]
        for na in range(0, max_arrows + 1):
            for endpoints in product(product(vertices, vertices), repeat=na):
                arrows = [
                    (f"a{k + 1}", s, t) for k, (s, t) in enumerate(endpoints)
                ]
                Q = make_quiver(vertices, arrows)
                if is_connected(Q):
                    yield Q


def test_shape_partition_exhaustive():
    """Every connected quiver with <= 3 vertices and <= 3 arrows lands in
    exactly one of the three shape classes, and the verdict follows the shape."""
    counts = {SHAPE_ACYCLIC: 0, SHAPE_BASIC_CYCLE: 0, SHAPE_CYCLIC_NON_BASIC: 0}
    total = 0
    for Q in _all_connected_quivers(3, 3):
        total += 1
        acyclic = is_acyclic(Q)
        basic = is_basic_cycle(Q)
        assert not (acyclic and basic)  # mutually exclusive on nonempty quivers
        verdict = classify_algebra(Q).components[0]
        if acyclic:
            counts[SHAPE_ACYCLIC] += 1
            assert verdict.verdict == VERDICT_GORENSTEIN
        elif basic:
            counts[SHAPE_BASIC_CYCLE] += 1
            assert verdict.verdict == VERDICT_SELFINJECTIVE
        else:
            counts[SHAPE_CYCLIC_NON_BASIC] += 1
            assert verdict.verdict == VERDICT_NOT_VIRTUALLY_GORENSTEIN
        assert verdict.shape in counts
    assert total == sum(counts.values())
    assert all(c > 0 for c in counts.values())


def test_opposite_preserves_predicates():
    for Q in (A2, A3, LOOP, TWO_CYCLE, THREE_CYCLE, TRIANGLE, LOOP_PLUS_ARROW):
        assert is_acyclic(opposite(Q)) == is_acyclic(Q)
        assert is_connected(opposite(Q)) == is_connected(Q)
        assert is_basic_cycle(opposite(Q)) == is_basic_cycle(Q)
