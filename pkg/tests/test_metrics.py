import json
import random
from decimal import Decimal
from fractions import Fraction

import pytest

import oracles
from oconform.metrics import (check, fitness, format_fraction, format_summary,
                              precision, report_to_dict, report_to_json,
                              round_fraction, skipped_percent)
from oconform.ocel import LogError, ObjectId, make_log
from oconform.ocpn import AcceptingOCPN, Place
from oconform.replay import ReplayConfig

SURPLUS_EVENTS = {"e5", "e6", "e14", "e15"}


def test_bundled_log_against_bundled_net(l1, ocpn1):
    report = check(l1, ocpn1)
    assert report.fitness == Fraction(1)
    assert report.precision == Fraction(16, 18)
    assert report.num_events == 18
    assert report.num_replayable == 18
    assert report.skipped_fraction == Fraction(0)
    assert not report.truncated
    assert format_summary(report) == "fitness=1.00 precision=0.89 skipped=0%"


def test_per_event_decomposition(l1, ocpn1):
    report = check(l1, ocpn1)
    assert [d.event_id for d in report.per_event] == \
        [e.id for e in l1.events]
    for d in report.per_event:
        assert d.replayable and not d.truncated
        assert set(d.en_log) <= set(d.en_model)
        if d.event_id in SURPLUS_EVENTS:
            assert set(d.en_model) - set(d.en_log) == {"Pick up @ dest"}
            assert len(d.en_log) == 1 and len(d.en_model) == 2
        else:
            assert d.en_log == d.en_model
        assert not d.reached_final


def test_precision_decomposes_into_per_event_shares(l1, ocpn1):
    report = check(l1, ocpn1)
    total = sum(
        (Fraction(len(set(d.en_log) & set(d.en_model)), len(d.en_model))
         for d in report.per_event), Fraction(0))
    assert report.precision == total / report.num_events


def test_restricted_net_flips_the_tradeoff(l1, restricted):
    report = check(l1, restricted)
    assert report.fitness == Fraction(4, 9)
    assert report.precision == Fraction(1)
    assert report.skipped_fraction == Fraction(5, 9)
    assert report.num_replayable == 8
    replayable = {d.event_id for d in report.per_event if d.replayable}
    assert replayable == {"e1", "e2", "e3", "e4", "e10", "e11", "e12", "e13"}
    for d in report.per_event:
        if d.replayable:
            assert set(d.en_model) <= set(d.en_log)
        else:
            assert d.en_model == ()
    assert format_summary(report) == "fitness=0.44 precision=1.00 skipped=56%"


def test_flower_is_fitting_but_imprecise(l1, ocpn1, flower_l1):
    report = check(l1, flower_l1)
    assert report.fitness == Fraction(1)
    assert report.precision == Fraction(55, 189)
    assert report.precision == oracles.flower_precision_oracle(l1)
    assert report.skipped_fraction == Fraction(0)
    assert report.precision < check(l1, ocpn1).precision
    assert format_summary(report) == "fitness=1.00 precision=0.29 skipped=0%"


def test_wrappers(l1, ocpn1):
    assert fitness(l1, ocpn1) == Fraction(1)
    assert precision(l1, ocpn1) == Fraction(8, 9)


def test_empty_log_is_rejected(ocpn1):
    with pytest.raises(LogError, match="empty log"):
        check(make_log([]), ocpn1)


def test_precision_is_undefined_without_replayable_events():
    net = AcceptingOCPN(
        object_types=("case",),
        places=(Place("s0", "case", initial=True, final=True),),
        transitions=(),
        arcs=(),
    )
    log = make_log([("e1", "a", [ObjectId("o1", "case")])])
    report = check(log, net)
    assert report.fitness == Fraction(0)
    assert report.precision is None
    assert report.num_replayable == 0
    assert report.skipped_fraction == Fraction(1)
    assert format_summary(report) == \
        "fitness=0.00 precision=undefined skipped=100%"
    assert report_to_dict(report)["precision"] is None


def test_rounding_is_half_up():
    assert round_fraction(Fraction(16, 18)) == Decimal("0.89")
    assert round_fraction(Fraction(1, 8)) == Decimal("0.13")
    assert round_fraction(Fraction(1, 200)) == Decimal("0.01")
    assert round_fraction(Fraction(1, 3), 4) == Decimal("0.3333")
    assert round_fraction(Fraction(1), 2) == Decimal("1.00")
    assert format_fraction(Fraction(55, 189)) == "0.29"
    assert format_fraction(None) == "undefined"


def test_skipped_percent_rounds_to_integer(l1, restricted):
    report = check(l1, restricted)
    assert skipped_percent(report) == "56%"


def test_report_json_schema(l1, ocpn1):
    report = check(l1, ocpn1)
    doc = json.loads(report_to_json(report, decimals=3))
    assert set(doc) == {"fitness", "precision", "num_events",
                        "num_replayable", "skipped_fraction", "truncated",
                        "per_event", "config"}
    assert doc["fitness"] == 1.0
    assert doc["precision"] == 0.889
    assert doc["num_events"] == 18 and doc["num_replayable"] == 18
    assert doc["skipped_fraction"] == 0.0
    assert doc["truncated"] is False
    assert len(doc["per_event"]) == 18
    first = doc["per_event"][0]
    assert set(first) == {"id", "context_digest", "en_log", "en_model",
                          "replayable", "reached_final"}
    assert first["id"] == "e1"
    assert first["en_log"] == ["Fuel plane"]
    assert doc["config"] == {
        "max_states": 100000,
        "silent_variable_mode": "singleton",
        "subset_cap": 8,
        "explore_silent_when_enabled": False,
        "reverse_successors": False,
        "decimals": 3,
    }


def test_events_of_a_group_share_diagnostics(l1, ocpn1):
    report = check(l1, ocpn1)
    by_id = {d.event_id: d for d in report.per_event}
    assert by_id["e5"].context_digest == by_id["e14"].context_digest
    assert by_id["e5"].en_model == by_id["e14"].en_model
    assert by_id["e2"].context_digest == by_id["e11"].context_digest


def test_exploring_silent_moves_eagerly_changes_nothing_here(l1, ocpn1):
    base = check(l1, ocpn1)
    eager = check(l1, ocpn1, ReplayConfig(explore_silent_when_enabled=True))
    assert base.fitness == eager.fitness
    assert base.precision == eager.precision
    assert base.per_event == eager.per_event


def test_chain_logs_match_escaping_edges_oracle_sample():
    rng = random.Random(31)
    for _ in range(50):
        log, chain = oracles.random_single_type_log(rng)
        report = check(log, oracles.chain_net(chain))
        fit, prec, replayable = oracles.chain_conformance_oracle(log, chain)
        assert report.fitness == fit
        assert report.precision == prec
        assert report.num_replayable == replayable
