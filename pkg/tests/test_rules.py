import copy
import json

import pytest

from maud.errors import (
    ConventionalModeIncompleteError,
    DocumentError,
    InfeasibleDesignError,
    SchemaError,
)
from maud.fixtures import bumper_kb_document, truck_facts_document
from maud.rules import (
    FactSet,
    enumerate_configurations,
    load_knowledge_base,
    run_applicability,
    run_restrictions,
)


def facts_with(**overrides):
    doc = dict(truck_facts_document())
    doc.update(overrides)
    return FactSet.from_document(doc)


class TestFactSet:
    def test_round_trip(self):
        facts = FactSet.from_document(truck_facts_document())
        assert FactSet.from_document(facts.to_document()) == facts

    def test_unknown_field_rejected(self):
        doc = dict(truck_facts_document())
        doc["spoiler"] = True
        with pytest.raises(DocumentError):
            FactSet.from_document(doc)

    def test_missing_field_rejected(self):
        doc = dict(truck_facts_document())
        del doc["cost_range"]
        with pytest.raises(DocumentError):
            FactSet.from_document(doc)

    def test_bad_enum_rejected(self):
        with pytest.raises(DocumentError) as err:
            facts_with(vehicle_type="boat")
        assert err.value.field == "vehicle_type"

    def test_nonpositive_number_rejected(self):
        with pytest.raises(DocumentError):
            facts_with(curb_weight_lbs=0)


class TestLoader:
    def test_bundled_kb_loads(self, bumper_kb):
        assert len(bumper_kb.slots) == 3
        assert all(len(s.materials) >= 3 for s in bumper_kb.slots)
        assert len(bumper_kb.attributes) == 4
        assert bumper_kb.rules_of("restriction")
        assert bumper_kb.rules_of("configuration")
        assert bumper_kb.rules_of("applicability")

    def test_unknown_material_reference(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"][0]["effect"]["material"] = "unobtainium"
        with pytest.raises(SchemaError) as err:
            load_knowledge_base(doc)
        assert any(doc["rules"][0]["id"] in v for v in err.value.violations)

    def test_empty_rules_is_valid(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"] = []
        kb = load_knowledge_base(doc)
        assert kb.rules == ()

    def test_category_objectivity_mismatch(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"][0]["objectivity"] = "subjective"
        with pytest.raises(SchemaError):
            load_knowledge_base(doc)

    def test_select_forbidden_for_objective_rules(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"][0]["effect"] = {"kind": "select", "slot": "beam",
                                     "material": "aluminum"}
        with pytest.raises(SchemaError):
            load_knowledge_base(doc)

    def test_missing_estimate_row(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["estimates"] = [r for r in doc["estimates"]
                            if not (r["slot"] == "beam"
                                    and r["material"] == "aluminum")]
        with pytest.raises(SchemaError) as err:
            load_knowledge_base(doc)
        assert any("aluminum" in v for v in err.value.violations)

    def test_missing_contribution_attribute(self):
        doc = copy.deepcopy(bumper_kb_document())
        del doc["estimates"][0]["contributions"]["cost"]
        with pytest.raises(SchemaError):
            load_knowledge_base(doc)

    def test_two_beta_slots_per_attribute_rejected(self):
        doc = copy.deepcopy(bumper_kb_document())
        for row in doc["estimates"]:
            if row["slot"] == "beam" and row["material"] == "aluminum":
                row["contributions"]["cost"] = {
                    "beta": {"lower": 1.0, "upper": 5.0, "p": 2.0, "q": 2.0}}
        with pytest.raises(SchemaError) as err:
            load_knowledge_base(doc)
        assert any("beta" in v for v in err.value.violations)

    def test_unknown_format_version(self):
        doc = copy.deepcopy(bumper_kb_document())
        doc["format_version"] = "99"
        with pytest.raises(SchemaError):
            load_knowledge_base(doc)

    def test_bytes_input(self):
        raw = json.dumps(bumper_kb_document()).encode("utf-8")
        kb = load_knowledge_base(raw)
        assert kb.name


class TestRestrictions:
    def test_vacuous_facts_leave_everything(self, bumper_kb, truck_facts):
        result = run_restrictions(bumper_kb, truck_facts)
        for slot in bumper_kb.slots:
            assert result.feasible[slot.id] == slot.materials
        assert result.fired_rule_ids == ()

    def test_short_lead_time_removes_slow_materials(self, bumper_kb):
        facts = facts_with(lead_time_years=1.2)
        result = run_restrictions(bumper_kb, facts)
        assert "reinforced_thermoset" not in result.feasible["beam"]
        assert "thermoset" in result.feasible["fascia"]  # needs < 1.0
        facts = facts_with(lead_time_years=0.5)
        result = run_restrictions(bumper_kb, facts)
        assert result.feasible["fascia"] == ("none",)

    def test_bright_finish_removes_fascias(self, bumper_kb):
        result = run_restrictions(bumper_kb, facts_with(desired_finish="bright"))
        assert result.feasible["fascia"] == ("none",)

    def test_monotone_filtering(self, bumper_kb):
        base = run_restrictions(bumper_kb, truck_facts_document() and
                                facts_with())
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"].append({
            "id": "extra_restriction",
            "category": "restriction",
            "objectivity": "objective",
            "when": {"facts": [{"field": "vehicle_type", "op": "eq",
                                "value": "pickup_truck"}]},
            "effect": {"kind": "forbid", "slot": "beam",
                       "material": "thermoplastic"},
        })
        grown = load_knowledge_base(doc)
        result = run_restrictions(grown, facts_with())
        for slot_id, mats in result.feasible.items():
            assert set(mats) <= set(base.feasible[slot_id])

    def test_trace_justifies_every_removal(self, bumper_kb):
        facts = facts_with(lead_time_years=0.5, desired_finish="bright")
        result = run_restrictions(bumper_kb, facts)
        for slot in bumper_kb.slots:
            removed = set(slot.materials) - set(result.feasible[slot.id])
            for material in removed:
                assert any(r.slot == slot.id and r.material == material
                           for r in result.removals)

    def test_emptied_slot_raises(self, bumper_kb):
        doc = copy.deepcopy(bumper_kb_document())
        for mat in ("stamped_steel", "aluminum", "reinforced_thermoset",
                    "thermoplastic"):
            doc["rules"].append({
                "id": f"kill_{mat}",
                "category": "restriction",
                "objectivity": "objective",
                "when": {},
                "effect": {"kind": "forbid", "slot": "beam", "material": mat},
            })
        kb = load_knowledge_base(doc)
        with pytest.raises(InfeasibleDesignError) as err:
            run_restrictions(kb, facts_with())
        assert err.value.slot == "beam"
        assert "kill_stamped_steel" in err.value.rule_ids


class TestEnumeration:
    def test_product_minus_forbidden(self, bumper_kb, truck_facts):
        restriction = run_restrictions(bumper_kb, truck_facts)
        config = enumerate_configurations(bumper_kb, truck_facts,
                                          restriction.feasible)
        # 3 * 4 * 4 = 48 minus (fascia none) x {foam, collapsing} x 4 beams
        assert len(config.alternatives) == 48 - 8
        for alt in config.alternatives:
            a = alt.assignment_map
            if a["fascia"] == "none":
                assert a["energy_absorber"] not in ("foam", "collapsing_column")

    def test_plain_product_without_config_rules(self, truck_facts):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"] = [r for r in doc["rules"]
                        if r["category"] != "configuration"]
        kb = load_knowledge_base(doc)
        feasible = run_restrictions(kb, truck_facts).feasible
        config = enumerate_configurations(kb, truck_facts, feasible)
        assert len(config.alternatives) == 48

    def test_stable_slot_major_order(self, bumper_kb, truck_facts):
        feasible = run_restrictions(bumper_kb, truck_facts).feasible
        config = enumerate_configurations(bumper_kb, truck_facts, feasible)
        assignments = [alt.assignment for alt in config.alternatives]
        assert assignments == sorted(
            assignments,
            key=lambda a: tuple(
                bumper_kb.slot(s).materials.index(m) for s, m in a))
        assert [alt.index for alt in config.alternatives] == \
            list(range(len(config.alternatives)))

    def test_all_forbidden_raises(self, truck_facts):
        doc = copy.deepcopy(bumper_kb_document())
        for slot, mats in [("fascia", ["none", "thermoset", "thermoplastic"])]:
            for mat in mats:
                doc["rules"].append({
                    "id": f"no_{mat}",
                    "category": "restriction",
                    "objectivity": "objective",
                    "when": {},
                    "effect": {"kind": "forbid", "slot": slot, "material": mat},
                })
        kb = load_knowledge_base(doc)
        with pytest.raises(InfeasibleDesignError):
            run_restrictions(kb, truck_facts)

    def test_configuration_forbid_with_assignment_condition(self, truck_facts):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"].append({
            "id": "no_aluminum_under_thermoset",
            "category": "configuration",
            "objectivity": "objective",
            "when": {"assignment": [{"slot": "fascia",
                                     "materials": ["thermoset"]}]},
            "effect": {"kind": "forbid", "slot": "beam", "material": "aluminum"},
        })
        kb = load_knowledge_base(doc)
        feasible = run_restrictions(kb, truck_facts).feasible
        config = enumerate_configurations(kb, truck_facts, feasible)
        for alt in config.alternatives:
            a = alt.assignment_map
            assert not (a["fascia"] == "thermoset" and a["beam"] == "aluminum")


class TestApplicability:
    def test_truck_selection(self, bumper_kb, truck_facts):
        feasible = run_restrictions(bumper_kb, truck_facts).feasible
        config = enumerate_configurations(bumper_kb, truck_facts, feasible)
        outcome = run_applicability(bumper_kb, truck_facts, config.alternatives)
        assert outcome.pick.assignment_map == {
            "fascia": "none", "energy_absorber": "none",
            "beam": "stamped_steel"}
        fired = [e for e in outcome.events if e.outcome == "selected"]
        assert [e.rule_id for e in fired] == [
            "applic_truck_no_fascia", "applic_truck_no_absorber",
            "applic_high_volume_stamped_steel"]

    def test_sedan_selection_uses_assignment_chain(self, bumper_kb):
        facts = facts_with(vehicle_type="sedan")
        feasible = run_restrictions(bumper_kb, facts).feasible
        config = enumerate_configurations(bumper_kb, facts, feasible)
        outcome = run_applicability(bumper_kb, facts, config.alternatives)
        # fascia pin unlocks the foam rule through its assignment condition
        assert outcome.pick.assignment_map == {
            "fascia": "thermoplastic", "energy_absorber": "foam",
            "beam": "stamped_steel"}

    def test_single_survivor_returned_unchanged(self, bumper_kb, truck_facts):
        feasible = run_restrictions(bumper_kb, truck_facts).feasible
        config = enumerate_configurations(bumper_kb, truck_facts, feasible)
        only = config.alternatives[:1]
        outcome = run_applicability(bumper_kb, truck_facts, tuple(only))
        assert outcome.pick == only[0]
        assert outcome.events == ()

    def test_conflict_first_priority_wins(self, truck_facts):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"].append({
            "id": "late_conflicting_beam",
            "category": "applicability",
            "objectivity": "subjective",
            "priority": 99,
            "when": {},
            "effect": {"kind": "select", "slot": "beam", "material": "aluminum"},
        })
        kb = load_knowledge_base(doc)
        feasible = run_restrictions(kb, truck_facts).feasible
        config = enumerate_configurations(kb, truck_facts, feasible)
        outcome = run_applicability(kb, truck_facts, config.alternatives)
        assert outcome.pick.material("beam") == "stamped_steel"
        assert any(e.rule_id == "late_conflicting_beam"
                   and e.outcome == "conflict" for e in outcome.events)

    def test_unpinned_slot_raises(self):
        # without the fascia->foam chain, nothing pins a sedan's absorber
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"] = [r for r in doc["rules"]
                        if r["id"] != "applic_fascia_gets_foam"]
        kb = load_knowledge_base(doc)
        facts = facts_with(vehicle_type="sedan")
        feasible = run_restrictions(kb, facts).feasible
        config = enumerate_configurations(kb, facts, feasible)
        with pytest.raises(ConventionalModeIncompleteError) as err:
            run_applicability(kb, facts, config.alternatives)
        assert "energy_absorber" in err.value.slots

    def test_no_applicability_rules_raises(self, truck_facts):
        doc = copy.deepcopy(bumper_kb_document())
        doc["rules"] = [r for r in doc["rules"]
                        if r["category"] != "applicability"]
        kb = load_knowledge_base(doc)
        feasible = run_restrictions(kb, truck_facts).feasible
        config = enumerate_configurations(kb, truck_facts, feasible)
        with pytest.raises(ConventionalModeIncompleteError):
            run_applicability(kb, truck_facts, config.alternatives)


class TestDeterminism:
    def test_identical_runs_identical_outputs(self, bumper_kb, truck_facts):
        r1 = run_restrictions(bumper_kb, truck_facts)
        r2 = run_restrictions(bumper_kb, truck_facts)
        assert r1.feasible == r2.feasible
        assert r1.removals == r2.removals
        c1 = enumerate_configurations(bumper_kb, truck_facts, r1.feasible)
        c2 = enumerate_configurations(bumper_kb, truck_facts, r2.feasible)
        assert c1.alternatives == c2.alternatives
        a1 = run_applicability(bumper_kb, truck_facts, c1.alternatives)
        a2 = run_applicability(bumper_kb, truck_facts, c2.alternatives)
        assert a1.pick == a2.pick
        assert a1.events == a2.events
