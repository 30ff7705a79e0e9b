"""Declarative knowledge base and deterministic forward-filtering rules.

A knowledge base declares component slots with material options, the
attribute set, estimate tables, and three rule categories:

* restriction (objective): eliminates materials infeasible under the
  stated design inputs, e.g. a ramp-up longer than the available lead time;
* configuration (objective): forbids cross-slot material combinations;
* applicability (subjective): picks one material when several survive —
  the legacy heuristic layer, used only in the conventional comparison
  mode, never in the integrated pipeline.

Rules are pure filters over an immutable fact set and partial assignments:
no derived facts, no chaining, so objective filtering is order-independent
and every elimination is justified by a trace entry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    ConventionalModeIncompleteError,
    DocumentError,
    InfeasibleConfigurationError,
    InfeasibleDesignError,
    SchemaError,
)
from .uncertainty import AttributeEstimate, BetaSpec
from .utility import AttributeSpec, Direction

KB_FORMAT_VERSION = "1"

RESTRICTION = "restriction"
CONFIGURATION = "configuration"
APPLICABILITY = "applicability"

OBJECTIVE = "objective"
SUBJECTIVE = "subjective"

# Design-input menu: field name -> kind ("enum" with values, "number", "bool")
FACT_FIELDS: dict[str, tuple] = {
    "vehicle_type": ("enum", ("sedan", "subcompact", "sport", "pickup_truck")),
    "desired_finish": ("enum", ("bright", "neutral_color", "match_body_color",
                                "unknown")),
    "bumper_shape": ("enum", ("flat", "peaked", "curved")),
    "cutouts_present": ("bool",),
    "highest_allowed_offset": ("enum", ("large", "medium", "small")),
    "cost_range": ("enum", ("high", "medium", "low")),
    "impact_rating": ("enum", ("over_5mph", "5mph", "2.5mph", "no_standard")),
    "curb_weight_lbs": ("number",),
    "production_volume_thousands": ("number",),
    "run_years": ("number",),
    "lead_time_years": ("number",),
}

_NUMERIC_OPS = ("eq", "ne", "lt", "le", "gt", "ge")
_ENUM_OPS = ("eq", "ne", "in")
_BOOL_OPS = ("eq", "ne")


@dataclass(frozen=True, slots=True)
class FactSet:
    """One filled-in design-input menu."""

    vehicle_type: str
    desired_finish: str
    bumper_shape: str
    cutouts_present: bool
    highest_allowed_offset: str
    cost_range: str
    impact_rating: str
    curb_weight_lbs: float
    production_volume_thousands: float
    run_years: float
    lead_time_years: float

    def __post_init__(self):
        for name, meta in FACT_FIELDS.items():
            value = getattr(self, name)
            if meta[0] == "enum":
                if value not in meta[1]:
                    raise DocumentError(
                        f"{name}={value!r} not one of {meta[1]}", field=name)
            elif meta[0] == "bool":
                if not isinstance(value, bool):
                    raise DocumentError(f"{name} must be true/false", field=name)
            else:
                if not isinstance(value, (int, float)) or isinstance(value, bool) \
                        or not math.isfinite(value) or value <= 0:
                    raise DocumentError(
                        f"{name}={value!r} must be a positive number", field=name)

    def to_document(self) -> dict:
        return {name: getattr(self, name) for name in FACT_FIELDS}

    @classmethod
    def from_document(cls, doc: dict) -> "FactSet":
        if not isinstance(doc, dict):
            raise DocumentError("facts must be an object")
        unknown = set(doc) - set(FACT_FIELDS)
        if unknown:
            raise DocumentError(f"unknown fact fields: {sorted(unknown)}",
                                field=sorted(unknown)[0])
        missing = set(FACT_FIELDS) - set(doc)
        if missing:
            raise DocumentError(f"missing fact fields: {sorted(missing)}",
                                field=sorted(missing)[0])
        kwargs = {}
        for name, meta in FACT_FIELDS.items():
            v = doc[name]
            kwargs[name] = float(v) if meta[0] == "number" and isinstance(v, (int, float)) and not isinstance(v, bool) else v
        return cls(**kwargs)


@dataclass(frozen=True, slots=True)
class Predicate:
    """One comparison against a design-input field."""

    field: str
    op: str
    value: object

    def holds(self, facts: FactSet) -> bool:
        actual = getattr(facts, self.field)
        if self.op == "eq":
            return actual == self.value
        if self.op == "ne":
            return actual != self.value
        if self.op == "in":
            return actual in self.value
        if self.op == "lt":
            return actual < self.value
        if self.op == "le":
            return actual <= self.value
        if self.op == "gt":
            return actual > self.value
        if self.op == "ge":
            return actual >= self.value
        raise DocumentError(f"unknown predicate op {self.op!r}")


@dataclass(frozen=True, slots=True)
class AssignmentCondition:
    """Requires a slot to be assigned one of the listed materials."""

    slot: str
    materials: tuple[str, ...]

    def holds(self, assignment: dict[str, str]) -> bool:
        return assignment.get(self.slot) in self.materials


@dataclass(frozen=True, slots=True)
class Effect:
    kind: str  # forbid | forbid_combination | select
    slot: str | None = None
    material: str | None = None
    pairs: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True, slots=True)
class Rule:
    id: str
    category: str
    objectivity: str
    effect: Effect
    fact_conditions: tuple[Predicate, ...] = ()
    assignment_conditions: tuple[AssignmentCondition, ...] = ()
    priority: int = 0
    note: str = ""

    def facts_hold(self, facts: FactSet) -> bool:
        return all(p.holds(facts) for p in self.fact_conditions)


@dataclass(frozen=True, slots=True)
class Slot:
    id: str
    label: str
    materials: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class EstimateRow:
    slot: str
    material: str
    conditions: tuple[Predicate, ...]
    contributions: dict[str, AttributeEstimate] = field(hash=False)

    def matches(self, facts: FactSet) -> bool:
        return all(p.holds(facts) for p in self.conditions)


@dataclass(frozen=True, slots=True)
class Alternative:
    """One material per slot, in knowledge-base slot order."""

    index: int
    assignment: tuple[tuple[str, str], ...]

    @property
    def assignment_map(self) -> dict[str, str]:
        return dict(self.assignment)

    def material(self, slot: str) -> str:
        for s, m in self.assignment:
            if s == slot:
                return m
        raise KeyError(slot)

    def to_document(self) -> dict:
        return {"index": self.index, "assignment": dict(self.assignment)}


@dataclass(frozen=True, slots=True)
class KnowledgeBase:
    name: str
    slots: tuple[Slot, ...]
    attributes: tuple[AttributeSpec, ...]
    rules: tuple[Rule, ...]
    estimates: tuple[EstimateRow, ...]
    raw_document: dict = field(hash=False, repr=False)

    @property
    def slot_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.slots)

    @property
    def attribute_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.attributes)

    def slot(self, slot_id: str) -> Slot:
        for s in self.slots:
            if s.id == slot_id:
                return s
        raise KeyError(slot_id)

    def attribute(self, attribute_id: str) -> AttributeSpec:
        for a in self.attributes:
            if a.id == attribute_id:
                return a
        raise KeyError(attribute_id)

    def rules_of(self, category: str) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.category == category)

    def estimate_rows(self, slot: str, material: str) -> tuple[EstimateRow, ...]:
        return tuple(r for r in self.estimates
                     if r.slot == slot and r.material == material)


def _parse_predicates(raw, errors, where, *, allow_fields=FACT_FIELDS):
    preds = []
    if raw is None:
        return ()
    if not isinstance(raw, list):
        errors.append(f"{where}: fact conditions must be a list")
        return ()
    for item in raw:
        if not isinstance(item, dict) or not {"field", "op", "value"} <= set(item):
            errors.append(f"{where}: predicate needs field/op/value")
            continue
        fname, op, value = item["field"], item["op"], item["value"]
        meta = allow_fields.get(fname)
        if meta is None:
            errors.append(f"{where}: unknown input field {fname!r}")
            continue
        kind = meta[0]
        ok_ops = {"enum": _ENUM_OPS, "bool": _BOOL_OPS, "number": _NUMERIC_OPS}[kind]
        if op not in ok_ops:
            errors.append(f"{where}: op {op!r} invalid for {kind} field {fname!r}")
            continue
        if kind == "enum":
            values = value if isinstance(value, list) else [value]
            bad = [v for v in values if v not in meta[1]]
            if bad:
                errors.append(f"{where}: value(s) {bad!r} not allowed for {fname!r}")
                continue
            value = tuple(values) if op == "in" else value
        elif kind == "bool":
            if not isinstance(value, bool):
                errors.append(f"{where}: {fname!r} compares against true/false")
                continue
        else:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"{where}: {fname!r} compares against a number")
                continue
            value = float(value)
        preds.append(Predicate(field=fname, op=op, value=value))
    return tuple(preds)


def _parse_rule(raw, slots_by_id, errors):
    rid = raw.get("id")
    where = f"rule {rid!r}"
    if not rid or not isinstance(rid, str):
        errors.append("rule without a string id")
        return None
    category = raw.get("category")
    if category not in (RESTRICTION, CONFIGURATION, APPLICABILITY):
        errors.append(f"{where}: unknown category {category!r}")
        return None
    objectivity = raw.get("objectivity")
    expected = SUBJECTIVE if category == APPLICABILITY else OBJECTIVE
    if objectivity != expected:
        errors.append(
            f"{where}: category {category!r} must carry objectivity "
            f"{expected!r}, got {objectivity!r}")
        return None

    when = raw.get("when") or {}
    fact_conditions = _parse_predicates(when.get("facts"), errors, where)
    assignment_conditions = []
    for cond in when.get("assignment") or []:
        slot_id = cond.get("slot")
        mats = cond.get("materials")
        slot = slots_by_id.get(slot_id)
        if slot is None:
            errors.append(f"{where}: assignment condition on unknown slot {slot_id!r}")
            continue
        if not isinstance(mats, list) or not mats:
            errors.append(f"{where}: assignment condition needs a material list")
            continue
        bad = [m for m in mats if m not in slot.materials]
        if bad:
            errors.append(f"{where}: unknown material(s) {bad!r} for slot {slot_id!r}")
            continue
        assignment_conditions.append(
            AssignmentCondition(slot=slot_id, materials=tuple(mats)))
    if category == RESTRICTION and assignment_conditions:
        errors.append(f"{where}: restriction rules read design inputs only")

    eff_raw = raw.get("effect") or {}
    kind = eff_raw.get("kind")
    allowed = {RESTRICTION: ("forbid",),
               CONFIGURATION: ("forbid", "forbid_combination"),
               APPLICABILITY: ("select",)}[category]
    if kind not in allowed:
        errors.append(f"{where}: effect {kind!r} not allowed for {category} rules")
        return None
    if kind in ("forbid", "select"):
        slot_id, mat = eff_raw.get("slot"), eff_raw.get("material")
        slot = slots_by_id.get(slot_id)
        if slot is None:
            errors.append(f"{where}: effect references unknown slot {slot_id!r}")
            return None
        if mat not in slot.materials:
            errors.append(
                f"{where}: effect references unknown material {mat!r} for "
                f"slot {slot_id!r}")
            return None
        effect = Effect(kind=kind, slot=slot_id, material=mat)
    else:
        pairs = []
        raw_pairs = eff_raw.get("pairs")
        if not isinstance(raw_pairs, list) or len(raw_pairs) < 2:
            errors.append(f"{where}: forbid_combination needs >= 2 (slot, material) pairs")
            return None
        seen_slots = set()
        for pair in raw_pairs:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                errors.append(f"{where}: malformed combination pair {pair!r}")
                return None
            slot_id, mat = pair
            slot = slots_by_id.get(slot_id)
            if slot is None or mat not in (slot.materials if slot else ()):
                errors.append(f"{where}: unknown pair ({slot_id!r}, {mat!r})")
                return None
            if slot_id in seen_slots:
                errors.append(f"{where}: combination repeats slot {slot_id!r}")
                return None
            seen_slots.add(slot_id)
            pairs.append((slot_id, mat))
        effect = Effect(kind=kind, pairs=tuple(pairs))

    priority = raw.get("priority", 0)
    if not isinstance(priority, int) or isinstance(priority, bool):
        errors.append(f"{where}: priority must be an integer")
        return None
    return Rule(id=rid, category=category, objectivity=objectivity,
                effect=effect, fact_conditions=fact_conditions,
                assignment_conditions=tuple(assignment_conditions),
                priority=priority, note=str(raw.get("note", "")))


def load_knowledge_base(document) -> KnowledgeBase:
    """Parse and fully validate a knowledge-base document.

    ``document`` may be bytes, a JSON string, or an already-parsed object.
    Loading is side-effect free; all schema violations are collected and
    raised together.
    """
    if isinstance(document, (bytes, bytearray)):
        try:
            raw = json.loads(document.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise SchemaError([f"document is not valid UTF-8 JSON: {exc}"])
    elif isinstance(document, str):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError([f"document is not valid JSON: {exc}"])
    elif isinstance(document, dict):
        raw = document
    else:
        raise SchemaError(["document must be bytes, str, or object"])

    errors: list[str] = []
    if raw.get("format_version") != KB_FORMAT_VERSION:
        raise SchemaError(
            [f"unknown format_version {raw.get('format_version')!r}; "
             f"this loader reads version {KB_FORMAT_VERSION!r}"])

    # slots
    slots: list[Slot] = []
    for s in raw.get("slots") or []:
        sid = s.get("id")
        mats = s.get("materials")
        if not sid or not isinstance(mats, list) or not mats:
            errors.append(f"slot {sid!r}: needs an id and a nonempty material list")
            continue
        if len(set(mats)) != len(mats):
            errors.append(f"slot {sid!r}: duplicate materials")
            continue
        slots.append(Slot(id=sid, label=str(s.get("label", sid)),
                          materials=tuple(mats)))
    if not slots:
        errors.append("knowledge base declares no slots")
    ids = [s.id for s in slots]
    if len(set(ids)) != len(ids):
        errors.append("duplicate slot ids")
    slots_by_id = {s.id: s for s in slots}

    # attributes
    attributes: list[AttributeSpec] = []
    for a in raw.get("attributes") or []:
        try:
            attributes.append(AttributeSpec(
                id=a["id"], label=a.get("label", a["id"]),
                units=a.get("units", ""),
                range_worst=float(a["range_worst"]),
                range_best=float(a["range_best"]),
                direction=Direction(a["direction"])))
        except Exception as exc:  # collected, not raised piecemeal
            errors.append(f"attribute {a.get('id')!r}: {exc}")
    if not attributes:
        errors.append("knowledge base declares no attributes")
    attr_ids = [a.id for a in attributes]
    if len(set(attr_ids)) != len(attr_ids):
        errors.append("duplicate attribute ids")

    # rules
    rules: list[Rule] = []
    seen_rule_ids = set()
    for r in raw.get("rules") or []:
        rule = _parse_rule(r, slots_by_id, errors)
        if rule is None:
            continue
        if rule.id in seen_rule_ids:
            errors.append(f"duplicate rule id {rule.id!r}")
            continue
        seen_rule_ids.add(rule.id)
        rules.append(rule)

    # estimate tables
    estimates: list[EstimateRow] = []
    beta_slots_per_attr: dict[str, set[str]] = {a: set() for a in attr_ids}
    for row in raw.get("estimates") or []:
        slot_id, mat = row.get("slot"), row.get("material")
        where = f"estimate ({slot_id!r}, {mat!r})"
        slot = slots_by_id.get(slot_id)
        if slot is None:
            errors.append(f"{where}: unknown slot")
            continue
        if mat not in slot.materials:
            errors.append(f"{where}: unknown material")
            continue
        conditions = _parse_predicates(row.get("when"), errors, where)
        contribs_raw = row.get("contributions")
        if not isinstance(contribs_raw, dict):
            errors.append(f"{where}: missing contributions object")
            continue
        unknown = set(contribs_raw) - set(attr_ids)
        if unknown:
            errors.append(f"{where}: unknown attribute(s) {sorted(unknown)}")
            continue
        missing = set(attr_ids) - set(contribs_raw)
        if missing:
            errors.append(f"{where}: missing contribution(s) for {sorted(missing)}")
            continue
        contribs: dict[str, AttributeEstimate] = {}
        bad = False
        for attr_id, c in contribs_raw.items():
            try:
                if "point" in c:
                    contribs[attr_id] = AttributeEstimate.point(
                        attr_id, float(c["point"]))
                elif "beta" in c:
                    contribs[attr_id] = AttributeEstimate.beta(
                        attr_id, BetaSpec.from_document(c["beta"]))
                    beta_slots_per_attr[attr_id].add(slot_id)
                else:
                    raise DocumentError("contribution needs 'point' or 'beta'")
            except Exception as exc:
                errors.append(f"{where}: attribute {attr_id!r}: {exc}")
                bad = True
        if bad:
            continue
        estimates.append(EstimateRow(slot=slot_id, material=mat,
                                     conditions=conditions,
                                     contributions=contribs))

    for attr_id, bslots in beta_slots_per_attr.items():
        if len(bslots) > 1:
            errors.append(
                f"attribute {attr_id!r}: beta contributions from multiple "
                f"slots {sorted(bslots)}; only one slot may carry the "
                "uncertain share of an attribute")

    # coverage: every (slot, material) needs rows ending in a catch-all
    for slot in slots:
        for mat in slot.materials:
            rows = [r for r in estimates if r.slot == slot.id and r.material == mat]
            if not rows:
                errors.append(f"estimate table missing row for ({slot.id!r}, {mat!r})")
            elif rows[-1].conditions:
                errors.append(
                    f"estimate rows for ({slot.id!r}, {mat!r}) must end with "
                    "an unconditional catch-all row")

    if errors:
        raise SchemaError(errors)
    return KnowledgeBase(
        name=str(raw.get("name", "")),
        slots=tuple(slots),
        attributes=tuple(attributes),
        rules=tuple(rules),
        estimates=tuple(estimates),
        raw_document=raw,
    )


@dataclass(frozen=True, slots=True)
class Removal:
    rule_id: str
    slot: str
    material: str


@dataclass(frozen=True, slots=True)
class RestrictionResult:
    feasible: dict[str, tuple[str, ...]] = field(hash=False)
    removals: tuple[Removal, ...] = ()
    fired_rule_ids: tuple[str, ...] = ()


def run_restrictions(kb: KnowledgeBase, facts: FactSet) -> RestrictionResult:
    """Apply every satisfied restriction rule's forbid effects.

    Pure commutative filtering: the result is independent of rule order.
    A slot stripped of every material raises infeasible-design naming the
    rules that emptied it.
    """
    feasible: dict[str, list[str]] = {s.id: list(s.materials) for s in kb.slots}
    removals: list[Removal] = []
    fired: list[str] = []
    for rule in kb.rules_of(RESTRICTION):
        if not rule.facts_hold(facts):
            continue
        fired.append(rule.id)
        eff = rule.effect
        removals.append(Removal(rule.id, eff.slot, eff.material))
        if eff.material in feasible[eff.slot]:
            feasible[eff.slot].remove(eff.material)
    for slot_id, mats in feasible.items():
        if not mats:
            blockers = sorted({r.rule_id for r in removals if r.slot == slot_id})
            raise InfeasibleDesignError(
                f"slot {slot_id!r} has no feasible material left",
                slot=slot_id, rule_ids=blockers)
    return RestrictionResult(
        feasible={k: tuple(v) for k, v in feasible.items()},
        removals=tuple(removals),
        fired_rule_ids=tuple(fired))


@dataclass(frozen=True, slots=True)
class ConfigurationResult:
    alternatives: tuple[Alternative, ...]
    eliminated: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]  # (rule, combo)
    fired_rule_ids: tuple[str, ...]


def enumerate_configurations(kb: KnowledgeBase, facts: FactSet,
                             feasible: dict[str, tuple[str, ...]]) -> ConfigurationResult:
    """Cartesian product of feasible materials minus combinations forbidden
    by configuration rules; slot-major, declaration-ordered, stable."""
    config_rules = [r for r in kb.rules_of(CONFIGURATION) if r.facts_hold(facts)]

    def forbidden_by(combo: dict[str, str]):
        for rule in config_rules:
            if not all(c.holds(combo) for c in rule.assignment_conditions):
                continue
            eff = rule.effect
            if eff.kind == "forbid":
                if combo.get(eff.slot) == eff.material:
                    return rule
            else:
                if all(combo.get(s) == m for s, m in eff.pairs):
                    return rule
        return None

    slot_order = kb.slot_ids
    pools = [feasible[sid] for sid in slot_order]
    for sid, pool in zip(slot_order, pools):
        if not pool:
            raise InfeasibleDesignError(
                f"slot {sid!r} has no feasible material", slot=sid, rule_ids=[])

    alternatives: list[Alternative] = []
    eliminated: list[tuple[str, tuple[tuple[str, str], ...]]] = []
    fired: list[str] = []

    def recurse(level: int, chosen: list[tuple[str, str]]):
        if level == len(slot_order):
            combo = dict(chosen)
            rule = forbidden_by(combo)
            if rule is not None:
                eliminated.append((rule.id, tuple(chosen)))
                if rule.id not in fired:
                    fired.append(rule.id)
            else:
                alternatives.append(Alternative(index=len(alternatives),
                                                assignment=tuple(chosen)))
            return
        for mat in pools[level]:
            chosen.append((slot_order[level], mat))
            recurse(level + 1, chosen)
            chosen.pop()

    recurse(0, [])
    if not alternatives:
        raise InfeasibleConfigurationError(
            "every material combination is forbidden by configuration rules",
            rule_ids=sorted({rid for rid, _ in eliminated}))
    return ConfigurationResult(alternatives=tuple(alternatives),
                               eliminated=tuple(eliminated),
                               fired_rule_ids=tuple(fired))


@dataclass(frozen=True, slots=True)
class SelectionEvent:
    rule_id: str
    slot: str
    material: str
    outcome: str  # selected | conflict | inapplicable | redundant


@dataclass(frozen=True, slots=True)
class ApplicabilityResult:
    pick: Alternative
    events: tuple[SelectionEvent, ...]
    pinned: dict[str, str] = field(hash=False)


def run_applicability(kb: KnowledgeBase, facts: FactSet,
                      alternatives: tuple[Alternative, ...]) -> ApplicabilityResult:
    """Conventional mode: let the subjective heuristics pick one alternative.

    Select effects apply in (priority, declaration order); a rule whose
    condition mentions other slots waits until they are pinned.  Conflicts
    (a second rule targeting an already-pinned slot with a different
    material) are recorded and the earlier pin wins.  If the heuristics
    fail to narrow the field to a single alternative, the error names the
    still-open slots rather than defaulting silently.
    """
    app_rules = kb.rules_of(APPLICABILITY)
    if not app_rules:
        raise ConventionalModeIncompleteError(
            "knowledge base has no applicability rules; conventional mode "
            "unavailable", slots=list(kb.slot_ids))
    if not alternatives:
        raise InfeasibleConfigurationError("no alternatives to select from",
                                           rule_ids=[])
    if len(alternatives) == 1:
        return ApplicabilityResult(pick=alternatives[0], events=(),
                                   pinned=dict(alternatives[0].assignment))

    ordered = sorted(enumerate(app_rules), key=lambda t: (t[1].priority, t[0]))
    remaining = list(alternatives)
    pinned: dict[str, str] = {}
    events: list[SelectionEvent] = []
    processed: set[str] = set()

    progress = True
    while progress:
        progress = False
        for _, rule in ordered:
            if rule.id in processed:
                continue
            if not rule.facts_hold(facts):
                processed.add(rule.id)
                continue
            if not all(c.holds(pinned) for c in rule.assignment_conditions):
                continue  # may become satisfiable after more pins
            eff = rule.effect
            processed.add(rule.id)
            if eff.slot in pinned:
                outcome = "redundant" if pinned[eff.slot] == eff.material else "conflict"
                events.append(SelectionEvent(rule.id, eff.slot, eff.material,
                                             outcome))
                continue
            if not any(alt.material(eff.slot) == eff.material for alt in remaining):
                events.append(SelectionEvent(rule.id, eff.slot, eff.material,
                                             "inapplicable"))
                continue
            pinned[eff.slot] = eff.material
            remaining = [alt for alt in remaining
                         if alt.material(eff.slot) == eff.material]
            events.append(SelectionEvent(rule.id, eff.slot, eff.material,
                                         "selected"))
            progress = True

    if len(remaining) == 1:
        return ApplicabilityResult(pick=remaining[0], events=tuple(events),
                                   pinned=pinned)
    open_slots = [sid for sid in kb.slot_ids if sid not in pinned]
    raise ConventionalModeIncompleteError(
        f"applicability rules left slots {open_slots} undecided "
        f"({len(remaining)} alternatives remain)", slots=open_slots)
