"""Integrated pipeline: feasible alternatives scored by expected utility.

The integrated mode runs objective filtering (restrictions, then
configuration constraints over the cartesian product), derives each
surviving alternative's attribute estimates from the knowledge base's
per-component contribution tables, computes per-attribute expected
utilities under the user's profile, aggregates them multiplicatively, and
ranks.  The comparison mode additionally runs the legacy subjective
applicability selection on the same feasible set and reports both picks
side by side with their expected utilities under the same profile.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .documents import profile_fingerprint
from .errors import (
    AlignmentError,
    CoverageError,
    EstimateRangeError,
    InfeasibleDesignError,
    MaudError,
)
from .rules import (
    Alternative,
    FactSet,
    KnowledgeBase,
    enumerate_configurations,
    run_applicability,
    run_restrictions,
)
from .uncertainty import AttributeEstimate, BetaSpec, expected_single_attribute_utility
from .utility import UserProfile, aggregate_expected

#: Expected utilities closer than this are tied and keep enumeration order.
TIE_TOLERANCE = 1e-12


def check_alternative_feasible(kb: KnowledgeBase, facts: FactSet,
                               alternative: Alternative) -> None:
    """Raise unless the alternative survives the objective rules."""
    restriction = run_restrictions(kb, facts)
    for slot_id, material in alternative.assignment:
        if material not in restriction.feasible.get(slot_id, ()):
            raise InfeasibleDesignError(
                f"material {material!r} for slot {slot_id!r} is restricted "
                "under these design inputs",
                slot=slot_id,
                rule_ids=[r.rule_id for r in restriction.removals
                          if r.slot == slot_id and r.material == material])
    config = enumerate_configurations(kb, facts, restriction.feasible)
    wanted = dict(alternative.assignment)
    if not any(alt.assignment_map == wanted for alt in config.alternatives):
        raise InfeasibleDesignError(
            "alternative violates a configuration rule",
            slot="", rule_ids=config.fired_rule_ids)


def estimate_attributes(kb: KnowledgeBase, facts: FactSet,
                        alternative: Alternative, *,
                        assume_feasible: bool = False) -> dict[str, AttributeEstimate]:
    """Combine the matching estimate rows into one estimate per attribute.

    For each slot the first row whose conditions match the design inputs
    applies (the loader guarantees a catch-all).  Contributions add: point
    parts sum, and at most one beta part per attribute shifts by the point
    sum, staying a four-parameter beta.  The combined support must sit
    inside the assessed attribute range; no truncation is performed.
    """
    if not assume_feasible:
        check_alternative_feasible(kb, facts, alternative)
    point_sum: dict[str, float] = {a: 0.0 for a in kb.attribute_ids}
    beta_part: dict[str, BetaSpec | None] = {a: None for a in kb.attribute_ids}
    for slot_id, material in alternative.assignment:
        rows = kb.estimate_rows(slot_id, material)
        row = next((r for r in rows if r.matches(facts)), None)
        if row is None:
            raise CoverageError(
                f"no estimate row matches ({slot_id!r}, {material!r}) under "
                "these design inputs (loader should have prevented this)")
        for attr_id, contrib in row.contributions.items():
            if contrib.kind == "point":
                point_sum[attr_id] += contrib.value
            else:
                if beta_part[attr_id] is not None:
                    raise CoverageError(
                        f"attribute {attr_id!r} received beta contributions "
                        "from two slots (loader should have prevented this)")
                beta_part[attr_id] = contrib.spec

    estimates: dict[str, AttributeEstimate] = {}
    for attr in kb.attributes:
        shift = point_sum[attr.id]
        spec = beta_part[attr.id]
        if spec is None:
            value = shift
            if not attr.low <= value <= attr.high:
                raise EstimateRangeError(
                    f"combined point estimate {value!r} for {attr.id!r} "
                    f"outside range [{attr.low!r}, {attr.high!r}]",
                    field=attr.id)
            estimates[attr.id] = AttributeEstimate.point(attr.id, value)
        else:
            shifted = BetaSpec(lower=spec.lower + shift,
                               upper=spec.upper + shift,
                               shape_p=spec.shape_p, shape_q=spec.shape_q)
            slack = 1e-9 * (attr.high - attr.low)
            if shifted.lower < attr.low - slack or shifted.upper > attr.high + slack:
                raise EstimateRangeError(
                    f"combined estimate support ({shifted.lower!r}, "
                    f"{shifted.upper!r}) for {attr.id!r} exceeds range "
                    f"[{attr.low!r}, {attr.high!r}]", field=attr.id)
            estimates[attr.id] = AttributeEstimate.beta(attr.id, shifted)
    return estimates


@dataclass(frozen=True, slots=True)
class EstimatedAlternative:
    alternative: Alternative
    estimates: dict[str, AttributeEstimate] = field(hash=False)


@dataclass(frozen=True, slots=True)
class RankedEntry:
    rank: int
    alternative: Alternative
    expected_utility: float
    per_attribute: dict[str, float] = field(hash=False)

    def to_document(self) -> dict:
        return {
            "rank": self.rank,
            "alternative": self.alternative.to_document(),
            "expected_utility": self.expected_utility,
            "per_attribute": dict(self.per_attribute),
        }


@dataclass(frozen=True, slots=True)
class EvaluationTrace:
    restriction_removals: tuple = ()
    restriction_rule_ids: tuple[str, ...] = ()
    configuration_rule_ids: tuple[str, ...] = ()
    selection_events: tuple = ()

    def to_document(self) -> dict:
        return {
            "restriction_removals": [
                {"rule": r.rule_id, "slot": r.slot, "material": r.material}
                for r in self.restriction_removals],
            "restriction_rules_fired": list(self.restriction_rule_ids),
            "configuration_rules_fired": list(self.configuration_rule_ids),
            "selection_events": [
                {"rule": e.rule_id, "slot": e.slot, "material": e.material,
                 "outcome": e.outcome}
                for e in self.selection_events],
        }


@dataclass(frozen=True, slots=True)
class EvaluationResult:
    entries: tuple[RankedEntry, ...]
    errors: tuple[tuple[Alternative, MaudError], ...]
    trace: EvaluationTrace
    profile_fingerprint: str

    @property
    def top(self) -> RankedEntry:
        return self.entries[0]

    def to_document(self) -> dict:
        return {
            "ranking": [e.to_document() for e in self.entries],
            "errors": [
                {"alternative": alt.to_document(), "error": err.to_document()}
                for alt, err in self.errors],
            "trace": self.trace.to_document(),
            "profile_fingerprint": self.profile_fingerprint,
        }


def _check_profile_alignment(profile: UserProfile, kb: KnowledgeBase) -> None:
    kb_attrs = {a.id: a for a in kb.attributes}
    if set(kb_attrs) != set(profile.attribute_ids):
        raise AlignmentError(
            f"profile attributes {sorted(profile.attribute_ids)} do not match "
            f"knowledge-base attributes {sorted(kb_attrs)}")
    for attr in profile.attributes:
        kba = kb_attrs[attr.id]
        if (kba.range_worst != attr.range_worst
                or kba.range_best != attr.range_best
                or kba.direction != attr.direction):
            raise AlignmentError(
                f"attribute {attr.id!r} assessed on range "
                f"({attr.range_worst!r}, {attr.range_best!r}) but the "
                f"knowledge base declares ({kba.range_worst!r}, "
                f"{kba.range_best!r})")


def score_alternative(profile: UserProfile,
                      estimates: dict[str, AttributeEstimate]) -> tuple[float, dict[str, float]]:
    """Per-attribute expected utilities and their aggregate."""
    per_attribute: dict[str, float] = {}
    for u in profile.utilities:
        est = estimates.get(u.attribute.id)
        if est is None:
            raise AlignmentError(f"missing estimate for {u.attribute.id!r}")
        per_attribute[u.attribute.id] = expected_single_attribute_utility(u, est)
    overall = aggregate_expected(
        profile, [per_attribute[a.id] for a in profile.attributes])
    return overall, per_attribute


def rank_alternatives(estimated, profile: UserProfile, *,
                      trace: EvaluationTrace | None = None) -> EvaluationResult:
    """Score every estimated alternative and sort by expected utility.

    Scoring failures (e.g. an estimate outside its attribute range) become
    per-alternative error entries; the rest are still ranked.  Ties within
    TIE_TOLERANCE keep enumeration order.
    """
    estimated = list(estimated)
    if not estimated:
        raise AlignmentError("nothing to rank")
    scored: list[tuple[Alternative, float, dict[str, float]]] = []
    errors: list[tuple[Alternative, MaudError]] = []
    for ea in estimated:
        try:
            overall, per_attr = score_alternative(profile, ea.estimates)
            scored.append((ea.alternative, overall, per_attr))
        except MaudError as exc:
            errors.append((ea.alternative, exc))
    scored.sort(key=lambda t: -t[1])  # stable: enumeration order within exact ties
    # near-ties (within tolerance) also fall back to enumeration order
    i = 0
    while i < len(scored):
        j = i + 1
        while j < len(scored) and scored[j - 1][1] - scored[j][1] <= TIE_TOLERANCE:
            j += 1
        if j - i > 1:
            scored[i:j] = sorted(scored[i:j], key=lambda t: t[0].index)
        i = j
    entries = tuple(
        RankedEntry(rank=r + 1, alternative=alt, expected_utility=eu,
                    per_attribute=per)
        for r, (alt, eu, per) in enumerate(scored))
    return EvaluationResult(
        entries=entries, errors=tuple(errors),
        trace=trace if trace is not None else EvaluationTrace(),
        profile_fingerprint=profile_fingerprint(profile))


def evaluate_design(kb: KnowledgeBase, facts: FactSet,
                    profile: UserProfile) -> EvaluationResult:
    """The full integrated pipeline for one design-input menu."""
    _check_profile_alignment(profile, kb)
    restriction = run_restrictions(kb, facts)
    config = enumerate_configurations(kb, facts, restriction.feasible)
    estimated = []
    errors: list[tuple[Alternative, MaudError]] = []
    for alt in config.alternatives:
        try:
            estimated.append(EstimatedAlternative(
                alternative=alt,
                estimates=estimate_attributes(kb, facts, alt,
                                              assume_feasible=True)))
        except MaudError as exc:
            errors.append((alt, exc))
    trace = EvaluationTrace(
        restriction_removals=restriction.removals,
        restriction_rule_ids=restriction.fired_rule_ids,
        configuration_rule_ids=config.fired_rule_ids)
    if not estimated:
        return EvaluationResult(entries=(), errors=tuple(errors), trace=trace,
                                profile_fingerprint=profile_fingerprint(profile))
    result = rank_alternatives(estimated, profile, trace=trace)
    return EvaluationResult(
        entries=result.entries,
        errors=tuple(errors) + result.errors,
        trace=trace,
        profile_fingerprint=result.profile_fingerprint)


@dataclass(frozen=True, slots=True)
class ModeOutcome:
    mode: str  # conventional | integrated
    pick: Alternative
    expected_utility: float
    per_attribute: dict[str, float] = field(hash=False)

    def to_document(self) -> dict:
        return {
            "mode": self.mode,
            "pick": self.pick.to_document(),
            "expected_utility": self.expected_utility,
            "per_attribute": dict(self.per_attribute),
        }


@dataclass(frozen=True, slots=True)
class ComparisonReport:
    conventional: ModeOutcome
    integrated: ModeOutcome
    agreement: dict[str, bool] = field(hash=False)
    ranking: EvaluationResult = None
    selection_events: tuple = ()

    @property
    def picks_match(self) -> bool:
        return all(self.agreement.values())

    def to_document(self) -> dict:
        return {
            "conventional": self.conventional.to_document(),
            "integrated": self.integrated.to_document(),
            "agreement": dict(self.agreement),
            "picks_match": self.picks_match,
            "selection_events": [
                {"rule": e.rule_id, "slot": e.slot, "material": e.material,
                 "outcome": e.outcome}
                for e in self.selection_events],
            "ranking": self.ranking.to_document() if self.ranking else None,
        }


def compare_modes(kb: KnowledgeBase, facts: FactSet,
                  profile: UserProfile) -> ComparisonReport:
    """Run the legacy heuristic selection and the utility ranking on the
    same inputs and report both picks with expected utilities under the
    supplied profile."""
    _check_profile_alignment(profile, kb)
    restriction = run_restrictions(kb, facts)
    config = enumerate_configurations(kb, facts, restriction.feasible)
    selection = run_applicability(kb, facts, config.alternatives)

    integrated = evaluate_design(kb, facts, profile)
    if not integrated.entries:
        alt, err = integrated.errors[0]
        raise err

    conv_estimates = estimate_attributes(kb, facts, selection.pick,
                                         assume_feasible=True)
    conv_eu, conv_per = score_alternative(profile, conv_estimates)

    top = integrated.top
    agreement = {
        slot_id: selection.pick.material(slot_id) == top.alternative.material(slot_id)
        for slot_id in kb.slot_ids}
    return ComparisonReport(
        conventional=ModeOutcome(mode="conventional", pick=selection.pick,
                                 expected_utility=conv_eu,
                                 per_attribute=conv_per),
        integrated=ModeOutcome(mode="integrated", pick=top.alternative,
                               expected_utility=top.expected_utility,
                               per_attribute=top.per_attribute),
        agreement=agreement,
        ranking=integrated,
        selection_events=selection.events)


def result_to_csv(result: EvaluationResult, kb: KnowledgeBase) -> str:
    """Flat table: slot assignments, per-attribute expected utilities,
    overall expected utility, rank; one row per ranked alternative."""
    out = io.StringIO()
    slot_ids = kb.slot_ids
    attr_ids = kb.attribute_ids
    header = list(slot_ids) + [f"eu_{a}" for a in attr_ids] + ["expected_utility", "rank"]
    out.write(",".join(header) + "\n")
    for entry in result.entries:
        cells = [entry.alternative.material(s) for s in slot_ids]
        cells += [repr(entry.per_attribute[a]) for a in attr_ids]
        cells += [repr(entry.expected_utility), str(entry.rank)]
        out.write(",".join(cells) + "\n")
    return out.getvalue()
