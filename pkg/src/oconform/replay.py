"""Replay of event contexts on a net.

For an event e, the visible firings of its ancestors form a binding
sequence.  Replaying that sequence from the initial marking of all
involved objects, while breadth-first searching over silent firings
whenever the next visible binding is blocked, yields the set of model
states the net considers possible just before e.  The activities enabled
in any of those states are the model's answer to "what may happen next".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple

from .context import Context, EventObjectGraph, event_preset, preset_objects
from .ocel import EventLog, ObjectId
from .ocpn import (AcceptingOCPN, Binding, Marking, ModelError,
                   _candidate_objects, binding_enabled, enabled_visible_labels,
                   enumerate_bindings, execute_binding, initial_marking_for,
                   is_final)

SILENT_VARIABLE_MODES = ("singleton", "subsets")


@dataclass(frozen=True)
class ReplayConfig:
    """Knobs for the replay search.

    ``max_states`` caps how many states the search may expand before it is
    cut off (the outcome is then flagged truncated).  Variable arcs on
    silent transitions have no binding recorded in the log, so their object
    sets must be guessed: ``singleton`` tries single objects only,
    ``subsets`` tries every non-empty subset of up to ``subset_cap``
    objects.  ``explore_silent_when_enabled`` additionally follows silent
    firings from states whose next visible binding is already enabled.
    ``reverse_successors`` flips the enqueue order of equally ranked
    successor states; results must not depend on it.
    """

    max_states: int = 100_000
    silent_variable_mode: str = "singleton"
    subset_cap: int = 8
    explore_silent_when_enabled: bool = False
    reverse_successors: bool = False

    def __post_init__(self) -> None:
        if self.max_states < 1:
            raise ValueError("max_states must be positive")
        if self.silent_variable_mode not in SILENT_VARIABLE_MODES:
            raise ValueError(
                f"silent_variable_mode must be one of {SILENT_VARIABLE_MODES}")
        if self.subset_cap < 1:
            raise ValueError("subset_cap must be positive")


DEFAULT_CONFIG = ReplayConfig()


class VisibleBindingStep(NamedTuple):
    """One visible firing as the log records it: activity plus objects by type."""

    activity: str
    objects: tuple[tuple[str, frozenset[str]], ...]  # (otype, object ids), sorted

    @classmethod
    def for_event(cls, event) -> "VisibleBindingStep":
        grouped: dict[str, set[str]] = {}
        for o in event.omap:
            grouped.setdefault(o.otype, set()).add(o.id)
        return cls(event.activity,
                   tuple(sorted((ot, frozenset(ids)) for ot, ids in grouped.items())))


@dataclass(frozen=True)
class ReplayOutcome:
    """What replaying a context group produced.

    ``enabled`` unions the visible labels enabled in any fully replayed
    state.  ``replayed`` records whether any state reached the end of its
    binding sequence; when it is False, ``enabled`` is empty.
    ``reached_final`` is diagnostic only: some fully replayed state led to
    an accepting marking after firing the event's own binding.
    """

    enabled: frozenset[str]
    replayed: bool
    reached_final: bool
    truncated: bool


EMPTY_OUTCOME = ReplayOutcome(frozenset(), False, False, False)


@dataclass
class GroupReplay:
    """Detailed result of replaying one context group."""

    outcome: ReplayOutcome
    markings: frozenset[Marking]
    reached_final_by_event: dict[str, bool]


def binding_sequence_of_preset(log: EventLog, graph: EventObjectGraph,
                               event_id: str) -> tuple[VisibleBindingStep, ...]:
    """The event's ancestors as visible binding steps, in log order."""
    preset = event_preset(graph, event_id)
    return tuple(VisibleBindingStep.for_event(e)
                 for e in log.events if e.id in preset)


def binding_sequence_context(
        sequence: Iterable[tuple[str | None, Mapping[str, Iterable[str]]]],
        objects: Iterable[ObjectId] = (),
) -> Context:
    """Context of an executed binding sequence.

    Each element is (label, objects-by-type); silent firings (label None)
    contribute nothing to any prefix.  ``objects`` widens the universe to
    objects that took part in no firing, e.g. those only placed in the
    initial marking; they contribute empty sequences.
    """
    prefixes: dict[ObjectId, list[str]] = {o: [] for o in objects}
    for label, by_type in sequence:
        for otype, ids in by_type.items():
            for oid in ids:
                seq = prefixes.setdefault(ObjectId(oid, otype), [])
                if label is not None:
                    seq.append(label)
    grouped: dict[str, list[tuple[str, ...]]] = {}
    for o, acts in prefixes.items():
        grouped.setdefault(o.otype, []).append(tuple(acts))
    return Context.from_prefixes(grouped)


def _binding_for_step(net: AcceptingOCPN, step: VisibleBindingStep) -> Binding | None:
    transition = net.label_to_transition.get(step.activity)
    if transition is None:
        return None
    return Binding(transition.id, step.objects)


def _silent_successors(net: AcceptingOCPN, marking: Marking,
                       cfg: ReplayConfig) -> Iterator[Marking]:
    for t in net.silent_transitions:
        if cfg.silent_variable_mode == "singleton":
            # variable types treated like non-variable: single objects only
            bindings = _singleton_bindings(net, marking, t.id)
        else:
            bindings = enumerate_bindings(net, marking, t.id,
                                          subset_cap=cfg.subset_cap)
        for binding in bindings:
            yield execute_binding(net, marking, binding)


def _singleton_bindings(net: AcceptingOCPN, marking: Marking,
                        tid: str) -> Iterator[Binding]:
    tpl = sorted(net.tpl(tid))
    if not tpl:
        empty = Binding.make(tid, {})
        if binding_enabled(net, marking, empty):
            yield empty
        return
    per_type = []
    for ot in tpl:
        candidates = sorted(_candidate_objects(net, tid, marking, ot))
        if not candidates:
            return
        per_type.append([(ot, frozenset({o})) for o in candidates])
    for combo in product(*per_type):
        binding = Binding(tid, tuple(combo))
        if binding_enabled(net, marking, binding):
            yield binding


@dataclass(frozen=True)
class _SingleReplay:
    enabled: frozenset[str]
    markings: frozenset[Marking]
    replayed: bool
    truncated: bool


def _replay_single(net: AcceptingOCPN, steps: tuple[VisibleBindingStep, ...],
                   objects: frozenset[ObjectId], cfg: ReplayConfig) -> _SingleReplay:
    """Breadth-first replay of one binding sequence.

    States are (marking, cursor) pairs, deduplicated; the cursor counts
    executed visible steps.  From each state the next visible binding is
    taken when enabled, otherwise every silent firing is followed.  A state
    at the end of the sequence is fully replayed: its marking is collected
    and its enabled visible labels are added to the outcome.  Fully
    replayed states still follow silent firings, so the collected markings
    are closed under silent reachability.
    """
    try:
        start = initial_marking_for(net, objects)
    except ModelError:
        return _SingleReplay(frozenset(), frozenset(), False, False)
    for step in steps:
        if step.activity not in net.label_to_transition:
            # an unmatched activity can never fire: the sequence is unreplayable
            return _SingleReplay(frozenset(), frozenset(), False, False)

    enabled: set[str] = set()
    markings: set[Marking] = set()
    replayed = False
    truncated = False
    queue: deque[tuple[Marking, int]] = deque([(start, 0)])
    seen = {(start, 0)}
    expanded = 0
    while queue:
        if expanded >= cfg.max_states:
            truncated = True
            break
        marking, cursor = queue.popleft()
        expanded += 1
        if cursor == len(steps):
            replayed = True
            markings.add(marking)
            enabled |= enabled_visible_labels(net, marking)
        advanced = False
        if cursor < len(steps):
            binding = _binding_for_step(net, steps[cursor])
            if binding is not None and binding_enabled(net, marking, binding):
                advanced = True
                state = (execute_binding(net, marking, binding), cursor + 1)
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
        if not advanced or cfg.explore_silent_when_enabled:
            successors = list(_silent_successors(net, marking, cfg))
            if cfg.reverse_successors:
                successors.reverse()
            for succ in successors:
                state = (succ, cursor)
                if state not in seen:
                    seen.add(state)
                    queue.append(state)
    return _SingleReplay(frozenset(enabled), frozenset(markings), replayed, truncated)


def _silent_closure(net: AcceptingOCPN, marking: Marking,
                    cfg: ReplayConfig) -> Iterator[Marking]:
    queue = deque([marking])
    seen = {marking}
    expanded = 0
    while queue:
        if expanded >= cfg.max_states:
            break
        current = queue.popleft()
        expanded += 1
        yield current
        for succ in _silent_successors(net, current, cfg):
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)


def _own_binding_reaches_final(net: AcceptingOCPN, markings: Iterable[Marking],
                               own: VisibleBindingStep, cfg: ReplayConfig) -> bool:
    binding = _binding_for_step(net, own)
    if binding is None:
        return False
    for marking in markings:
        if binding_enabled(net, marking, binding):
            after = execute_binding(net, marking, binding)
            if any(is_final(net, m) for m in _silent_closure(net, after, cfg)):
                return True
    return False


def replay_context_group(net: AcceptingOCPN, log: EventLog, graph: EventObjectGraph,
                         events: Iterable[str] | str,
                         cfg: ReplayConfig = DEFAULT_CONFIG) -> GroupReplay:
    """Replay every event of one context group and union the outcomes.

    Within the group, identical (binding sequence, object set) pairs are
    replayed only once.
    """
    if isinstance(events, str):
        events = (events,)
    member_ids = list(events)
    cache: dict[tuple, _SingleReplay] = {}
    enabled: set[str] = set()
    markings: set[Marking] = set()
    replayed = False
    truncated = False
    reached_final_by_event: dict[str, bool] = {}
    for eid in member_ids:
        steps = binding_sequence_of_preset(log, graph, eid)
        objects = preset_objects(log, graph, eid)
        key = (steps, objects)
        single = cache.get(key)
        if single is None:
            single = _replay_single(net, steps, objects, cfg)
            cache[key] = single
        enabled |= single.enabled
        markings |= single.markings
        replayed = replayed or single.replayed
        truncated = truncated or single.truncated
        own = VisibleBindingStep.for_event(log.event(eid))
        reached_final_by_event[eid] = _own_binding_reaches_final(
            net, single.markings, own, cfg)
    outcome = ReplayOutcome(frozenset(enabled), replayed,
                            any(reached_final_by_event.values()), truncated)
    return GroupReplay(outcome, frozenset(markings), reached_final_by_event)


def enabled_model_activities(net: AcceptingOCPN, log: EventLog,
                             graph: EventObjectGraph, events: Iterable[str] | str,
                             cfg: ReplayConfig = DEFAULT_CONFIG) -> ReplayOutcome:
    """Visible labels the net can fire next, given the context of the events.

    ``events`` is one event id or a whole context group; outcomes are
    unioned over the group.
    """
    return replay_context_group(net, log, graph, events, cfg).outcome


def states_for_context(net: AcceptingOCPN, log: EventLog, graph: EventObjectGraph,
                       events: Iterable[str] | str,
                       cfg: ReplayConfig = DEFAULT_CONFIG) -> frozenset[Marking]:
    """All deduplicated fully-replayed markings for a context group,
    closed under silent reachability."""
    return replay_context_group(net, log, graph, events, cfg).markings
