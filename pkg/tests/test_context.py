import random

import pytest

import oracles
from oconform.context import (Context, build_graph, context_of_event,
                              enabled_log_activities, event_preset,
                              group_by_context, object_prefix, preset_objects)
from oconform.ocel import LogError, ObjectId, make_log

E5_CONTEXT = Context.from_prefixes({
    "plane": [("Fuel plane", "Load cargo")],
    "baggage": [("Check-in", "Load cargo"), ("Check-in", "Load cargo")],
})


def test_direct_predecessors_chain_last_occurrences(l1, l1_graph):
    assert l1_graph.direct_predecessors["e1"] == frozenset()
    assert l1_graph.direct_predecessors["e4"] == {"e1", "e2", "e3"}
    assert l1_graph.direct_predecessors["e5"] == {"e4"}
    assert l1_graph.direct_predecessors["e9"] == {"e6"}
    # second batch is disconnected from the first
    assert l1_graph.direct_predecessors["e10"] == frozenset()


def test_edges_point_forward(l1, l1_graph):
    index = {e.id: e.index for e in l1.events}
    edges = list(l1_graph.edges())
    assert edges, "graph of the bundled log has edges"
    for src, dst in edges:
        assert index[src] < index[dst]


def test_presets_on_bundled_log(l1_graph):
    assert event_preset(l1_graph, "e1") == frozenset()
    assert event_preset(l1_graph, "e5") == {"e1", "e2", "e3", "e4"}
    # e7 and e8 happen after e6 but never reach e9 through shared objects
    assert event_preset(l1_graph, "e9") == {"e1", "e2", "e3", "e4", "e5", "e6"}
    assert event_preset(l1_graph, "e18") == {"e10", "e11", "e12", "e13",
                                             "e14", "e15"}


def test_presets_match_closure_oracle(l1, l1_graph):
    oracle = oracles.closure_ancestors(l1)
    for e in l1.events:
        assert event_preset(l1_graph, e.id) == oracle[e.id]


def test_unknown_event_raises(l1_graph):
    with pytest.raises(LogError, match="unknown event id"):
        event_preset(l1_graph, "e99")


def test_object_prefix(l1, l1_graph):
    preset = event_preset(l1_graph, "e5")
    assert object_prefix(l1, preset, ObjectId("b1", "baggage")) == \
        ("Check-in", "Load cargo")
    assert object_prefix(l1, preset, ObjectId("p1", "plane")) == \
        ("Fuel plane", "Load cargo")
    assert object_prefix(l1, preset, ObjectId("p2", "plane")) == ()


def test_preset_objects(l1, l1_graph):
    assert preset_objects(l1, l1_graph, "e5") == {
        ObjectId("p1", "plane"), ObjectId("b1", "baggage"),
        ObjectId("b2", "baggage")}
    assert preset_objects(l1, l1_graph, "e1") == {ObjectId("p1", "plane")}


def test_context_of_first_event_is_all_empty_prefixes(l1, l1_graph):
    ctx = context_of_event(l1, l1_graph, "e1")
    assert ctx == Context.from_prefixes({"plane": [()]})
    assert ctx.multiset("plane") == {(): 1}
    assert ctx.multiset("baggage") == {}


def test_context_of_e5(l1, l1_graph):
    ctx = context_of_event(l1, l1_graph, "e5")
    assert ctx == E5_CONTEXT
    assert ctx.types() == ("baggage", "plane")
    assert ctx.multiset("baggage") == {("Check-in", "Load cargo"): 2}
    assert ctx.canonical_json() == (
        '[["baggage",[[["Check-in","Load cargo"],2]]],'
        '["plane",[[["Fuel plane","Load cargo"],1]]]]')
    digest = ctx.digest()
    assert len(digest) == 16 and int(digest, 16) >= 0


def test_objects_first_seen_in_the_event_get_empty_prefixes():
    log = make_log([
        ("e1", "a", [ObjectId("x1", "X")]),
        ("e2", "b", [ObjectId("x1", "X"), ObjectId("y1", "Y")]),
    ])
    ctx = context_of_event(log, build_graph(log), "e2")
    assert ctx == Context.from_prefixes({"X": [("a",)], "Y": [()]})


def test_bundled_log_has_six_context_groups(l1, l1_graph):
    groups = group_by_context(l1, l1_graph)
    members = sorted(groups.values(), key=lambda ids: ids[0])
    assert members == [
        ("e1", "e10"),
        ("e2", "e3", "e11", "e12"),
        ("e4", "e13"),
        ("e5", "e14"),
        ("e6", "e15"),
        ("e7", "e8", "e9", "e16", "e17", "e18"),
    ]
    assert groups[E5_CONTEXT] == ("e5", "e14")


def test_enabled_log_activities(l1, l1_graph):
    assert enabled_log_activities(l1, l1_graph, "e5") == {"Lift off"}
    assert enabled_log_activities(l1, l1_graph, "e9") == \
        {"Clean", "Pick up @ dest"}
    assert enabled_log_activities(l1, l1_graph, "e1") == {"Fuel plane"}


def test_from_prefixes_drops_types_without_objects():
    assert Context.from_prefixes({"X": [], "Y": [()]}) == \
        Context.from_prefixes({"Y": [()]})


def test_context_equality_is_order_insensitive():
    a = Context.from_prefixes({"X": [("a",), ()], "Y": [("b", "c")]})
    b = Context.from_prefixes({"Y": [("b", "c")], "X": [(), ("a",)]})
    assert a == b and a.digest() == b.digest()


def test_contexts_and_groups_match_naive_oracle(l1, l1_graph):
    anc = oracles.closure_ancestors(l1)
    for e in l1.events:
        assert context_of_event(l1, l1_graph, e.id).entries == \
            oracles.naive_context_key(l1, anc, e.id)
    engine = {ctx.entries: list(members)
              for ctx, members in group_by_context(l1, l1_graph).items()}
    assert engine == oracles.naive_groups(l1)


def test_contexts_match_naive_oracle_on_random_logs():
    rng = random.Random(21)
    for _ in range(25):
        log = oracles.random_log(rng)
        graph = build_graph(log)
        anc = oracles.closure_ancestors(log)
        for e in log.events:
            assert context_of_event(log, graph, e.id).entries == \
                oracles.naive_context_key(log, anc, e.id)
