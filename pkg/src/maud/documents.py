"""Canonical document forms for profiles, sessions, and facts.

Documents are plain JSON-compatible objects.  Fingerprints are SHA-256
digests of the canonical rendering (sorted keys, compact separators,
shortest round-trip float repr), so two profiles are interchangeable iff
their fingerprints match bytewise.
"""

from __future__ import annotations

import hashlib
import json
import math

from .assessment import Response, Session
from .errors import DocumentError
from .utility import (
    AttributeSpec,
    Direction,
    UserProfile,
    build_profile,
)

PROFILE_FORMAT_VERSION = "1"
SESSION_FORMAT_VERSION = "1"


def canonical_json(doc) -> str:
    """Deterministic rendering used for fingerprints and storage."""
    _reject_non_finite(doc)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True, allow_nan=False)


def _reject_non_finite(doc) -> None:
    if isinstance(doc, float) and not math.isfinite(doc):
        raise DocumentError("documents cannot carry non-finite numbers")
    if isinstance(doc, dict):
        for v in doc.values():
            _reject_non_finite(v)
    elif isinstance(doc, (list, tuple)):
        for v in doc:
            _reject_non_finite(v)


def fingerprint(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode("ascii")).hexdigest()


def attribute_to_document(attr: AttributeSpec) -> dict:
    return {
        "id": attr.id,
        "label": attr.label,
        "units": attr.units,
        "range_worst": attr.range_worst,
        "range_best": attr.range_best,
        "direction": attr.direction.value,
    }


def attribute_from_document(doc: dict) -> AttributeSpec:
    try:
        return AttributeSpec(
            id=doc["id"], label=doc.get("label", doc["id"]),
            units=doc.get("units", ""),
            range_worst=float(doc["range_worst"]),
            range_best=float(doc["range_best"]),
            direction=Direction(doc["direction"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(f"bad attribute document: {exc}") from exc


def attributes_from_document(doc) -> tuple[AttributeSpec, ...]:
    """Accepts either a bare list or {"attributes": [...]}."""
    if isinstance(doc, dict):
        doc = doc.get("attributes")
    if not isinstance(doc, list):
        raise DocumentError("expected a list of attribute objects",
                            field="attributes")
    return tuple(attribute_from_document(a) for a in doc)


def profile_to_document(profile: UserProfile) -> dict:
    return {
        "format_version": PROFILE_FORMAT_VERSION,
        "attributes": [attribute_to_document(a) for a in profile.attributes],
        "utilities": [
            {"attribute": u.attribute.id,
             "risk_coefficient": u.risk_coefficient,
             "a": u.a, "b": u.b}
            for u in profile.utilities
        ],
        "scaling_constants": list(profile.scaling_constants),
        "master_constant": profile.master_constant,
        "aggregation_mode": profile.aggregation_mode.value,
        "fit_residuals": [list(r) for r in profile.fit_residuals],
    }


def profile_from_document(doc: dict) -> UserProfile:
    if not isinstance(doc, dict):
        raise DocumentError("profile document must be an object")
    if doc.get("format_version") != PROFILE_FORMAT_VERSION:
        raise DocumentError(
            f"unknown profile format_version {doc.get('format_version')!r}",
            field="format_version")
    attributes = attributes_from_document(doc.get("attributes"))
    utilities = doc.get("utilities")
    if not isinstance(utilities, list) or len(utilities) != len(attributes):
        raise DocumentError("utilities must align with attributes",
                            field="utilities")
    coeff_by_attr = {}
    for u in utilities:
        try:
            coeff_by_attr[u["attribute"]] = float(u["risk_coefficient"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad utility entry: {exc}") from exc
    try:
        coefficients = [coeff_by_attr[a.id] for a in attributes]
    except KeyError as exc:
        raise DocumentError(f"utilities missing attribute {exc}") from exc
    profile = build_profile(
        attributes, coefficients,
        [float(k) for k in doc.get("scaling_constants", [])],
        fit_residuals=[tuple(r) for r in doc.get("fit_residuals", [])])
    # the master constant re-solves deterministically; reject documents
    # whose recorded value disagrees materially with the weights
    recorded = doc.get("master_constant")
    if (recorded is None) != (profile.master_constant is None):
        raise DocumentError("aggregation mode inconsistent with weights",
                            field="master_constant")
    if recorded is not None and abs(recorded - profile.master_constant) > 1e-8:
        raise DocumentError(
            f"recorded master constant {recorded!r} does not match the "
            f"scaling constants (expected ~{profile.master_constant!r})",
            field="master_constant")
    if doc.get("aggregation_mode") != profile.aggregation_mode.value:
        raise DocumentError("aggregation_mode disagrees with weights",
                            field="aggregation_mode")
    return profile


def profile_fingerprint(profile: UserProfile) -> str:
    return fingerprint(profile_to_document(profile))


def session_to_document(session: Session) -> dict:
    return {
        "format_version": SESSION_FORMAT_VERSION,
        "id": session.id,
        "ce_count": session.ce_count,
        "attributes": [attribute_to_document(a) for a in session.attributes],
        "responses": [r.to_document() for r in session.responses],
        "state": session.state,
    }


def session_from_document(doc: dict) -> Session:
    if not isinstance(doc, dict) or doc.get("format_version") != SESSION_FORMAT_VERSION:
        raise DocumentError("unknown session document format",
                            field="format_version")
    attributes = attributes_from_document(doc.get("attributes"))
    responses = []
    for r in doc.get("responses", []):
        try:
            responses.append(Response(
                index=int(r["index"]), kind=r["kind"],
                attribute_id=r["attribute"], step=int(r["step"]),
                answer=float(r["answer"]), timestamp=float(r["timestamp"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"bad response entry: {exc}") from exc
    return Session(
        id=str(doc.get("id", "")),
        attributes=attributes,
        ce_count=int(doc.get("ce_count", 1)),
        responses=tuple(responses))


def answer_script_from_document(doc) -> tuple[list, int]:
    """Returns (answers, ce_count) from an answer-script document.

    The script is {"ce_count": n, "answers": [...]} where answers are
    numbers or keyed objects {attribute, kind, sequence, answer}.
    """
    if isinstance(doc, list):
        return list(doc), 1
    if not isinstance(doc, dict):
        raise DocumentError("answer script must be a list or object")
    answers = doc.get("answers")
    if not isinstance(answers, list):
        raise DocumentError("answer script needs an 'answers' list",
                            field="answers")
    ce_count = doc.get("ce_count", 1)
    if not isinstance(ce_count, int) or isinstance(ce_count, bool):
        raise DocumentError("ce_count must be an integer", field="ce_count")
    return list(answers), ce_count
