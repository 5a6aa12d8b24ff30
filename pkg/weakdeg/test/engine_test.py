import random

import networkx as nx
import pytest

from weakdeg.engine import (
    Del,
    DelSave,
    FailureReason,
    IllegalStepError,
    State,
    Trace,
    WeightMap,
    apply_del,
    apply_delsave,
    apply_step,
    certificate_to_trace,
    legal_del,
    legal_delsave,
    legal_moves,
    random_legal_walk,
    replay,
    trace_to_certificate,
    verify_certificate,
    verify_trace,
)
from weakdeg.graph import Graph, GraphError, ParseError, make_graph


def cycle(n):
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def state(g, values):
    return State.initial(g, WeightMap.from_sequence(values))


K2 = make_graph(2, [(0, 1)])
K1 = make_graph(1, [])
P3 = make_graph(3, [(0, 1), (1, 2)])
TRIANGLE = make_graph(3, [(0, 1), (0, 2), (1, 2)])
STAR3 = make_graph(4, [(0, 1), (0, 2), (0, 3)])


def test_weight_map():
    f = WeightMap.from_sequence([2, 0, 1])
    assert f.total() == 3
    assert list(f) == [0, 1, 2]
    assert f.as_list(4) == [2, 0, 1, 0]
    assert WeightMap.constant(P3, 2) == {0: 2, 1: 2, 2: 2}
    with pytest.raises(ValueError):
        WeightMap({0: -1})


def test_legal_del():
    assert legal_del(state(K2, [1, 1]), 0)
    assert not legal_del(state(K2, [1, 0]), 0)
    assert legal_del(state(K1, [0]), 0)
    # f(u) itself is unconstrained
    assert legal_del(state(K2, [0, 1]), 0)

    with pytest.raises(GraphError):
        legal_del(state(K2, [1, 1]), 5)


def test_apply_del():
    st = apply_del(state(TRIANGLE, [2, 1, 1]), 0)
    assert dict(st.f) == {1: 0, 2: 0}
    assert st.graph.edges() == [(1, 2)]

    st = apply_del(State.initial(cycle(4), WeightMap.constant(cycle(4), 2)), 0)
    assert dict(st.f) == {1: 1, 2: 2, 3: 1}
    assert st.graph.edges() == [(1, 2), (2, 3)]

    st = apply_del(state(K1, [5]), 0)
    assert st.is_empty

    with pytest.raises(IllegalStepError) as info:
        apply_del(state(K2, [1, 0]), 0)
    assert info.value.reason == FailureReason.ILLEGAL_DEL

    gone = State(K2.remove_vertex(1), WeightMap({0: 1}))
    with pytest.raises(GraphError):
        apply_del(gone, 1)
    with pytest.raises(GraphError):
        apply_delsave(gone, 0, 1)


def test_legal_delsave():
    assert legal_delsave(state(K2, [1, 0]), 0, 1)
    assert not legal_delsave(state(K2, [1, 1]), 0, 1)
    assert not legal_delsave(state(P3, [2, 2, 0]), 0, 2)

    with pytest.raises(GraphError):
        legal_delsave(state(K2, [1, 0]), 0, 4)


def test_apply_delsave():
    st = apply_delsave(state(TRIANGLE, [2, 1, 1]), 0, 1)
    assert dict(st.f) == {1: 1, 2: 0}
    assert st.graph.edges() == [(1, 2)]

    st = apply_delsave(state(STAR3, [2, 1, 1, 1]), 0, 1)
    assert dict(st.f) == {1: 1, 2: 0, 3: 0}

    st = apply_delsave(state(K2, [1, 0]), 0, 1)
    assert dict(st.f) == {1: 0}
    assert st.graph.n == 1

    with pytest.raises(IllegalStepError) as info:
        apply_delsave(state(K2, [1, 1]), 0, 1)
    assert info.value.reason == FailureReason.ILLEGAL_DELSAVE_BUDGET

    with pytest.raises(IllegalStepError) as info:
        apply_delsave(state(P3, [2, 2, 0]), 0, 2)
    assert info.value.reason == FailureReason.ILLEGAL_DELSAVE_NONADJACENT

    with pytest.raises(IllegalStepError) as info:
        apply_delsave(state(STAR3, [2, 1, 0, 1]), 0, 1)
    assert info.value.reason == FailureReason.NEGATIVE_RESULT


def test_state_domain():
    with pytest.raises(ValueError):
        State(K2, WeightMap.from_sequence([1]))


def test_step_types():
    with pytest.raises(ValueError):
        DelSave(1, 1)
    assert str(Del(3)) == "del(3)"
    assert str(DelSave(0, 1)) == "dels(0, 1)"


def test_trace_validation():
    with pytest.raises(ValueError):
        Trace(2, 1, (Del(5),))
    with pytest.raises(ValueError):
        Trace(2, -1, ())
    with pytest.raises(ValueError):
        Trace(2, (1, 1, 1), ())
    with pytest.raises(ValueError):
        Trace(2, ("a", 1), ())
    with pytest.raises(ValueError):
        Trace(2, (0, -1), ())
    with pytest.raises(ValueError):
        Trace(2, True, ())

    assert Trace(3, (2, 2, 2), ()).constant == 2
    assert Trace(2, (1, 0), ()).constant is None
    assert Trace(2, 4, ()).constant == 4
    assert Trace(2, 1, (DelSave(0, 1), Del(1))).saves() == 1


def test_verify_trace():
    c4 = cycle(4)
    trace = Trace(4, 2, tuple(Del(v) for v in range(4)))
    assert verify_certificate(c4, trace).ok
    assert str(verify_certificate(c4, trace)) == "ok"

    c5 = cycle(5)
    report = verify_trace(c5, WeightMap.constant(c5, 1), Trace(5, 1, tuple(Del(v) for v in range(5))))
    assert not report.ok
    assert report.failed_at == 3
    assert report.reason == FailureReason.ILLEGAL_DEL
    assert str(report) == "failed at step 3: illegal-del"

    report = verify_trace(K2, WeightMap.constant(K2, 1), Trace(2, 1, (Del(0),)))
    assert report.failed_at == 1
    assert report.reason == FailureReason.INCOMPLETE

    report = verify_trace(K2, WeightMap.constant(K2, 1), Trace(2, 1, (Del(0), Del(0))))
    assert report.failed_at == 1
    assert report.reason == FailureReason.REPEATED_VERTEX

    report = verify_certificate(K2, Trace(2, (1, 0), (Del(1), DelSave(0, 1))))
    assert report.failed_at == 1
    assert report.reason == FailureReason.ILLEGAL_DELSAVE_NONADJACENT


def test_verify_trace_is_pure():
    c4 = cycle(4)
    f = WeightMap.constant(c4, 1)
    trace = Trace(4, 1, tuple(Del(v) for v in range(4)))
    first = verify_trace(c4, f, trace)
    second = verify_trace(c4, f, trace)
    assert first == second
    assert c4.n == 4
    assert dict(f) == {0: 1, 1: 1, 2: 1, 3: 1}


def test_verify_trace_mismatch():
    with pytest.raises(ValueError):
        verify_trace(K2, WeightMap.constant(K2, 1), Trace(3, 1, ()))
    with pytest.raises(ValueError):
        verify_trace(K2, WeightMap.from_sequence([1]), Trace(2, 1, ()))


def test_replay():
    states = list(replay(K2, WeightMap.from_sequence([1, 0]), [DelSave(0, 1), Del(1)]))
    assert len(states) == 2
    assert dict(states[0].f) == {1: 0}
    assert states[1].is_empty

    with pytest.raises(IllegalStepError):
        list(replay(K2, WeightMap.from_sequence([1, 0]), [Del(0)]))


def test_legal_moves():
    moves = legal_moves(state(K2, [1, 0]))
    assert moves == [Del(1), DelSave(0, 1)]


@pytest.mark.parametrize("seed", range(20))
def test_random_walk_bookkeeping(seed):
    rng = random.Random(seed)
    g = Graph.from_networkx(nx.gnp_random_graph(8, 0.5, seed=seed))
    f0 = WeightMap({v: rng.randint(0, 3) for v in g.vertices()})
    steps = random_legal_walk(g, f0, rng)

    st = State.initial(g, f0)
    for step in steps:
        if isinstance(step, DelSave):
            assert st.f[step.u] >= 1
        before = st.f.total()
        budget = st.f[step.u]
        degree = st.graph.degree(step.u)
        st = apply_step(st, step)
        x = 1 if isinstance(step, DelSave) else 0
        assert before - st.f.total() == budget + degree - x
        assert all(value >= 0 for value in st.f.values())

    # a walk stops only when nothing is left or nothing is legal
    assert st.is_empty or not legal_moves(st)


def test_certificate_text():
    trace = Trace(2, (1, 0), (DelSave(0, 1), Del(1)))
    text = trace_to_certificate(trace)
    assert text == (
        "{\n"
        '  "n": 2,\n'
        '  "initial": [1, 0],\n'
        '  "steps": [\n'
        '    {"op": "dels", "u": 0, "w": 1},\n'
        '    {"op": "del", "u": 1}\n'
        "  ]\n"
        "}\n"
    )
    assert certificate_to_trace(text) == trace

    empty = Trace(0, 0, ())
    assert trace_to_certificate(empty) == '{\n  "n": 0,\n  "initial": 0,\n  "steps": []\n}\n'
    assert certificate_to_trace(trace_to_certificate(empty)) == empty


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"n": 2, "steps": []}',
        '{"n": 2, "initial": 1, "steps": {}}',
        '{"n": 2, "initial": "x", "steps": []}',
        '{"n": 2, "initial": 1, "steps": [{"op": "jump", "u": 0}]}',
        '{"n": 2, "initial": 1, "steps": [{"op": "dels", "u": 0}]}',
        '{"n": 2, "initial": 1, "steps": [{"op": "del", "u": 9}]}',
        '{"n": 2, "initial": 1, "steps": [3]}',
        '{"n": 2, "initial": ["a", "b"], "steps": []}',
        '{"n": 2, "initial": [1, -1], "steps": []}',
        '{"n": 2, "initial": [true, 1], "steps": []}',
        '{"n": 2, "initial": true, "steps": []}',
        '{"n": 2, "initial": -3, "steps": []}',
        '{"n": null, "initial": 1, "steps": []}',
    ],
)
def test_certificate_errors(text):
    with pytest.raises(ParseError):
        certificate_to_trace(text)


def test_certificate_syntax_error_line():
    with pytest.raises(ParseError) as info:
        certificate_to_trace('{\n  "n": 2,\n  "initial": ,\n}')
    assert info.value.line == 3
