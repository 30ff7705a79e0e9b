"""Bundled fixtures: the bumper knowledge base, truck design inputs, and
two assessed designer profiles (with the answer scripts they replay from).

The knowledge base's numeric tables are illustrative; only its structure
(slots, rule taxonomy, attribute set) mirrors bumper engineering practice.
The two profiles share scaling constants and differ only in risk
coefficients: the "typical" truck designer is consistently risk averse,
the "atypical" one close to risk neutral.
"""

from __future__ import annotations

import json
from importlib import resources


def _load(name: str) -> dict:
    with resources.files(__package__).joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _raw(name: str) -> bytes:
    return resources.files(__package__).joinpath(name).read_bytes()


def bumper_kb_document() -> dict:
    return _load("bumper_kb.json")


def bumper_kb_bytes() -> bytes:
    return _raw("bumper_kb.json")


def truck_facts_document() -> dict:
    return _load("truck_facts.json")


def bumper_attributes_document() -> dict:
    return {"attributes": bumper_kb_document()["attributes"]}


def typical_answers_document() -> dict:
    return _load("answers_typical.json")


def atypical_answers_document() -> dict:
    return _load("answers_atypical.json")


def typical_profile_document() -> dict:
    return _load("profile_typical.json")


def atypical_profile_document() -> dict:
    return _load("profile_atypical.json")
