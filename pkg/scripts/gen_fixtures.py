#!/usr/bin/env python3
"""Regenerate the bundled answer scripts and profile documents.

The profiles are defined by (risk coefficient per attribute, scaling
constants); this script converts them into the exact lottery answers a
user with those parameters would give, replays the answers through the
assessment protocol, and freezes both the scripts and the resulting
profile documents.  Run from the repository root:

    python scripts/gen_fixtures.py
"""

from __future__ import annotations

import json
import pathlib
import sys

from maud.assessment import certainty_equivalent_for, run_answer_script
from maud.documents import attributes_from_document, profile_to_document
from maud.fixtures import bumper_attributes_document

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "maud" / "fixtures"

SCALING = [0.56, 0.06, 0.23, 0.12]  # cost, weight, impact, appearance

PROFILES = {
    "typical": {
        "label": "Typical truck designer (consistently risk averse)",
        "risk_coefficients": [3.2, 3.2, 3.2, 3.2],
        "scaling_constants": SCALING,
    },
    "atypical": {
        "label": "Atypical truck designer (near risk neutral)",
        "risk_coefficients": [1.0, 0.0, 0.0, 0.0],
        "scaling_constants": SCALING,
    },
}


def build(name: str, spec: dict) -> None:
    attributes = attributes_from_document(bumper_attributes_document())
    answers = []
    for attr, c in zip(attributes, spec["risk_coefficients"], strict=True):
        answers.append({
            "attribute": attr.id,
            "kind": "certainty_equivalent",
            "sequence": 0,
            "answer": certainty_equivalent_for(attr, c),
        })
    for attr, pi in zip(attributes, spec["scaling_constants"], strict=True):
        answers.append({
            "attribute": attr.id,
            "kind": "probability_equivalence",
            "sequence": 0,
            "answer": pi,
        })
    script = {"label": spec["label"], "ce_count": 1, "answers": answers}
    _, profile = run_answer_script(attributes, answers, ce_count=1)
    doc = profile_to_document(profile)

    (FIXTURE_DIR / f"answers_{name}.json").write_text(
        json.dumps(script, indent=2) + "\n", encoding="utf-8")
    (FIXTURE_DIR / f"profile_{name}.json").write_text(
        json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote answers_{name}.json and profile_{name}.json")


def main() -> int:
    for name, spec in PROFILES.items():
        build(name, spec)
    return 0


if __name__ == "__main__":
    sys.exit(main())
