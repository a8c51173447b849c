"""Bundled example log and models: an airport handling process.

``l1_log.json`` interleaves two flights (planes p1/p2, baggage b1..b4).
``ocpn1_model.json`` is the net that fits it; ``flower_l1_model.json`` is
the most permissive net over the same activities; ``restricted_model.json``
accepts only a single strictly sequential flow (one bag, cleaning before
pick-up).
"""

from __future__ import annotations

from importlib import resources

from ..ocel import EventLog, parse_log
from ..ocpn import AcceptingOCPN, parse_model


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load_l1() -> EventLog:
    return parse_log(fixture_text("l1_log.json"))


def load_ocpn1() -> AcceptingOCPN:
    return parse_model(fixture_text("ocpn1_model.json"))


def load_flower_l1() -> AcceptingOCPN:
    return parse_model(fixture_text("flower_l1_model.json"))


def load_restricted() -> AcceptingOCPN:
    return parse_model(fixture_text("restricted_model.json"))
