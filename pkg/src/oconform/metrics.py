"""Fitness and precision of a net against a log.

Both metrics compare, per event, the activities the log considers possible
next (events sharing the context) with the activities the net can fire
next (replay of the context).  Fitness averages how much of the log side
the model covers; precision averages how much of the model side the log
backs up, over the events whose context the net could replay at all.
All arithmetic is exact; rounding happens only at rendering time.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Any

from .context import build_graph, group_by_context
from .ocel import EventLog, LogError
from .ocpn import AcceptingOCPN
from .replay import DEFAULT_CONFIG, ReplayConfig, replay_context_group


@dataclass(frozen=True)
class EventDiagnostic:
    """Per-event view of the comparison, for reports and debugging."""

    event_id: str
    context_digest: str
    en_log: tuple[str, ...]
    en_model: tuple[str, ...]
    replayable: bool
    reached_final: bool
    truncated: bool


@dataclass(frozen=True)
class ConformanceReport:
    fitness: Fraction
    precision: Fraction | None
    num_events: int
    num_replayable: int
    skipped_fraction: Fraction
    truncated: bool
    per_event: tuple[EventDiagnostic, ...]
    config: ReplayConfig


def check(log: EventLog, net: AcceptingOCPN,
          cfg: ReplayConfig = DEFAULT_CONFIG) -> ConformanceReport:
    """Compute fitness and precision of the net against the log in one pass.

    Replay happens once per context group; every event of a group shares
    the group's enabled-activity sets.  An event counts as replayable when
    the net enables at least one activity for its context; precision
    averages over exactly those events and is None when there are none.
    """
    if not log.events:
        raise LogError("cannot check an empty log")
    graph = build_graph(log)
    groups = group_by_context(log, graph)
    fitness_sum = Fraction(0)
    precision_sum = Fraction(0)
    num_replayable = 0
    diagnostics: dict[str, EventDiagnostic] = {}
    truncated = False
    for ctx, members in groups.items():
        detail = replay_context_group(net, log, graph, members, cfg)
        en_model = detail.outcome.enabled
        en_log = frozenset(log.event(eid).activity for eid in members)
        replayable = bool(en_model)
        overlap = len(en_log & en_model)
        truncated = truncated or detail.outcome.truncated
        digest = ctx.digest()
        for eid in members:
            fitness_sum += Fraction(overlap, len(en_log))
            if replayable:
                num_replayable += 1
                precision_sum += Fraction(overlap, len(en_model))
            diagnostics[eid] = EventDiagnostic(
                event_id=eid,
                context_digest=digest,
                en_log=tuple(sorted(en_log)),
                en_model=tuple(sorted(en_model)),
                replayable=replayable,
                reached_final=detail.reached_final_by_event[eid],
                truncated=detail.outcome.truncated,
            )
    num_events = len(log.events)
    report = ConformanceReport(
        fitness=fitness_sum / num_events,
        precision=(precision_sum / num_replayable) if num_replayable else None,
        num_events=num_events,
        num_replayable=num_replayable,
        skipped_fraction=Fraction(num_events - num_replayable, num_events),
        truncated=truncated,
        per_event=tuple(diagnostics[e.id] for e in log.events),
        config=cfg,
    )
    return report


def fitness(log: EventLog, net: AcceptingOCPN,
            cfg: ReplayConfig = DEFAULT_CONFIG) -> Fraction:
    """Average per-event share of log-possible activities the net enables."""
    return check(log, net, cfg).fitness


def precision(log: EventLog, net: AcceptingOCPN,
              cfg: ReplayConfig = DEFAULT_CONFIG) -> Fraction | None:
    """Average per-event share of net-enabled activities the log confirms,
    over replayable events; None when no event is replayable."""
    return check(log, net, cfg).precision


def round_fraction(value: Fraction, decimals: int = 2) -> Decimal:
    """Round half-up to the given number of decimals."""
    quantum = Decimal(1).scaleb(-decimals)
    return (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        quantum, rounding=ROUND_HALF_UP)


def format_fraction(value: Fraction | None, decimals: int = 2) -> str:
    if value is None:
        return "undefined"
    return str(round_fraction(value, decimals))


def skipped_percent(report: ConformanceReport) -> str:
    pct = round_fraction(report.skipped_fraction * 100, 0)
    return f"{pct}%"


def format_summary(report: ConformanceReport, decimals: int = 2) -> str:
    return (f"fitness={format_fraction(report.fitness, decimals)} "
            f"precision={format_fraction(report.precision, decimals)} "
            f"skipped={skipped_percent(report)}")


def report_to_dict(report: ConformanceReport, decimals: int = 2) -> dict[str, Any]:
    """JSON-ready view of a report; metric values are rendered (rounded)."""
    return {
        "fitness": float(round_fraction(report.fitness, decimals)),
        "precision": (None if report.precision is None
                      else float(round_fraction(report.precision, decimals))),
        "num_events": report.num_events,
        "num_replayable": report.num_replayable,
        "skipped_fraction": float(round_fraction(report.skipped_fraction, decimals)),
        "truncated": report.truncated,
        "per_event": [
            {
                "id": d.event_id,
                "context_digest": d.context_digest,
                "en_log": list(d.en_log),
                "en_model": list(d.en_model),
                "replayable": d.replayable,
                "reached_final": d.reached_final,
            }
            for d in report.per_event
        ],
        "config": {**asdict(report.config), "decimals": decimals},
    }


def report_to_json(report: ConformanceReport, decimals: int = 2) -> str:
    return json.dumps(report_to_dict(report, decimals), indent=2,
                      ensure_ascii=False) + "\n"
