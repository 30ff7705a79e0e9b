"""Acceptance suite: one test per release criterion, each printing a
[PASS]/[FAIL] line with its runtime.  Tolerances are fixed here, not
calibrated elsewhere."""

import math
import time

import numpy as np
import pytest

from maud.assessment import certainty_equivalent_for, fit_single_attribute, run_answer_script
from maud.documents import profile_from_document
from maud.errors import MaudError
from maud.evaluation import compare_modes
from maud.fixtures import (
    atypical_profile_document,
    bumper_attributes_document,
    bumper_kb_document,
    truck_facts_document,
    typical_profile_document,
)
from maud.rules import FactSet, load_knowledge_base, run_restrictions
from maud.uncertainty import (
    BetaSpec,
    beta_density,
    beta_mean,
    beta_mode,
    expected_utility_quadrature,
    expected_utility_series,
    fit_beta,
)
from maud.utility import (
    AggregationMode,
    aggregate,
    build_profile,
    evaluate_utility,
    make_exponential_utility,
    master_equation_residual,
    solve_master_constant,
)
from maud.numerics import adaptive_gauss_legendre

from conftest import make_attribute


class _Criterion:
    def __init__(self, name, budget_s=None):
        self.name = name
        self.budget = budget_s

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"[{status}] {self.name} ({elapsed:.2f}s)")
        if exc_type is None and self.budget is not None:
            assert elapsed < self.budget, \
                f"{self.name}: runtime {elapsed:.2f}s over budget {self.budget}s"
        return False


def unit_attrs(n):
    return [make_attribute(f"a{i}", 0.0, 1.0) for i in range(n)]


def test_mau_normalization_and_corners():
    with _Criterion("MAU normalization & corners (1000 profiles)", 1.0):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            J = int(rng.integers(2, 9))
            k = rng.uniform(0.05, 0.95, size=J)
            K, mode = solve_master_constant(k)
            profile = build_profile(unit_attrs(J), [0.0] * J, k)
            if mode is AggregationMode.MULTIPLICATIVE:
                assert abs(master_equation_residual(k, K)) <= 1e-10
            assert aggregate(profile, [1.0] * J) == pytest.approx(1.0, abs=1e-9)
            for j in range(J):
                corner = [0.0] * J
                corner[j] = 1.0
                assert aggregate(profile, corner) == pytest.approx(
                    k[j], abs=1e-9)


def test_additive_limit():
    with _Criterion("Additive limit agreement at sum(k) = 1 +/- 1e-4"):
        rng = np.random.default_rng(7)
        for sign in (+1.0, -1.0):
            for _ in range(50):
                J = int(rng.integers(2, 7))
                raw = rng.uniform(0.1, 0.9, size=J)
                k = raw / raw.sum() * (1.0 + sign * 1e-4)
                profile = build_profile(unit_attrs(J), [0.0] * J, k)
                assert profile.aggregation_mode is AggregationMode.MULTIPLICATIVE
                u = rng.uniform(0.0, 1.0, size=J)
                additive = float(np.dot(k, u))
                assert abs(aggregate(profile, list(u)) - additive) <= 1e-3
        # exact additive path at |sum(k) - 1| <= 1e-9
        k = [0.4, 0.35, 0.25]
        K, mode = solve_master_constant(k)
        assert mode is AggregationMode.ADDITIVE and K is None


def test_beta_correctness():
    with _Criterion("Beta density/mean/mode correctness + elicitation fixture", 5.0):
        grid = [1.0, 1.5, 2.0, 3.0, 5.0, 9.0]
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        for p in grid:
            for q in grid:
                spec = BetaSpec(2.0, 9.0, p, q)
                total = adaptive_gauss_legendre(
                    lambda y: np.array([beta_density(spec, x) for x in y]),
                    2.0, 9.0, abs_tol=1e-10)
                assert total == pytest.approx(1.0, abs=1e-8)
                mean_num = adaptive_gauss_legendre(
                    lambda y: np.array([x * beta_density(spec, x) for x in y]),
                    2.0, 9.0, abs_tol=1e-10)
                assert beta_mean(spec) == pytest.approx(mean_num, abs=1e-6)
                if p > 1.0 and q > 1.0:
                    a, b = 2.0, 9.0
                    x1 = b - phi * (b - a)
                    x2 = a + phi * (b - a)
                    f1, f2 = beta_density(spec, x1), beta_density(spec, x2)
                    for _ in range(200):
                        if f1 >= f2:
                            b, x2, f2 = x2, x1, f1
                            x1 = b - phi * (b - a)
                            f1 = beta_density(spec, x1)
                        else:
                            a, x1, f1 = x1, x2, f2
                            x2 = a + phi * (b - a)
                            f2 = beta_density(spec, x2)
                    assert beta_mode(spec) == pytest.approx(
                        0.5 * (a + b), abs=1e-6)
        fitted = fit_beta(10.0, 100.0, p=1.1, mode=18.0)
        assert fitted.shape_q == pytest.approx(2.025, abs=1e-9)
        assert beta_mean(fitted) == pytest.approx(41.68, abs=1e-9)


def test_series_quadrature_agreement():
    with _Criterion("Closed-form series vs quadrature (p,q in 1..9)", 10.0):
        supports = [(0.0, 1.0), (0.2, 0.75)]
        attr = make_attribute("z", 0.0, 1.0)
        for c in (-2.0, -0.5, 0.5, 2.0):
            u = make_exponential_utility(attr, c)
            for p in range(1, 10):
                for q in range(1, 10):
                    for lo, hi in supports:
                        spec = BetaSpec(lo, hi, float(p), float(q))
                        series = expected_utility_series(u, spec)
                        quad = expected_utility_quadrature(u, spec)
                        assert abs(series - quad) <= 1e-7, (c, p, q, lo, hi)


def test_jensen_property():
    with _Criterion("Jensen inequality over 200 random (curve, beta) pairs"):
        rng = np.random.default_rng(99)
        attr = make_attribute("z", 0.0, 1.0)
        for _ in range(200):
            c = float(rng.uniform(0.2, 6.0))
            lo = float(rng.uniform(0.0, 0.4))
            hi = float(rng.uniform(0.6, 1.0))
            spec = BetaSpec(lo, hi, float(rng.uniform(1.0, 6.0)),
                            float(rng.uniform(1.0, 6.0)))
            mu = beta_mean(spec)
            concave = make_exponential_utility(attr, c)
            convex = make_exponential_utility(attr, -c)
            linear = make_exponential_utility(attr, 0.0)
            assert expected_utility_quadrature(concave, spec) <= \
                evaluate_utility(concave, mu) + 1e-10
            assert expected_utility_quadrature(convex, spec) >= \
                evaluate_utility(convex, mu) - 1e-10
            assert abs(expected_utility_quadrature(linear, spec)
                       - evaluate_utility(linear, mu)) <= 1e-10


def test_elicitation_fit():
    with _Criterion("Elicitation round trip for 100 synthetic users"):
        rng = np.random.default_rng(5)
        attr = make_attribute("cost", 460.0, 60.0)
        for _ in range(100):
            c_true = float(rng.uniform(-10.0, 10.0))
            answer = certainty_equivalent_for(attr, c_true)
            fit = fit_single_attribute(attr, [answer])
            assert fit.utility.risk_coefficient == pytest.approx(
                c_true, abs=1e-6)
        # scripted scaling answers are adopted verbatim
        attrs = [make_attribute("a"), make_attribute("b"),
                 make_attribute("c")]
        pis = [0.41, 0.27, 0.19]
        _, profile = run_answer_script(attrs, [5.0, 5.0, 5.0] + pis)
        assert list(profile.scaling_constants) == pis


def test_comparison_scenario():
    with _Criterion("Truck comparison scenario (selection pattern)", 1.0):
        kb = load_knowledge_base(bumper_kb_document())
        facts = FactSet.from_document(truck_facts_document())
        typical = profile_from_document(typical_profile_document())
        atypical = profile_from_document(atypical_profile_document())

        conventional_pick = {"fascia": "none", "energy_absorber": "none",
                             "beam": "stamped_steel"}
        atypical_pick = {"fascia": "thermoset", "energy_absorber": "foam",
                         "beam": "stamped_steel"}

        report_typ = compare_modes(kb, facts, typical)
        # (a) the heuristic mode selects the plain steel bumper
        assert report_typ.conventional.pick.assignment_map == conventional_pick
        # (b) the integrated mode mirrors it under the typical profile
        assert report_typ.integrated.pick.assignment_map == conventional_pick

        report_aty = compare_modes(kb, facts, atypical)
        # (c) the atypical profile flips fascia and absorber, keeps the beam
        assert report_aty.conventional.pick.assignment_map == conventional_pick
        assert report_aty.integrated.pick.assignment_map == atypical_pick
        # (d) strictly better expected utility, both inside (0, 1)
        assert report_aty.integrated.expected_utility > \
            report_aty.conventional.expected_utility
        for eu in (report_aty.integrated.expected_utility,
                   report_aty.conventional.expected_utility,
                   report_typ.integrated.expected_utility):
            assert 0.0 < eu < 1.0


def test_rule_engine_properties():
    with _Criterion("Rule-engine properties over 500 randomized mutations"):
        import copy
        base_doc = bumper_kb_document()
        base_facts = truck_facts_document()
        rng = np.random.default_rng(31)
        vehicle_types = ("sedan", "subcompact", "sport", "pickup_truck")
        finishes = ("bright", "neutral_color", "match_body_color", "unknown")
        ratings = ("over_5mph", "5mph", "2.5mph", "no_standard")
        slots = {s["id"]: s["materials"] for s in base_doc["slots"]}
        for trial in range(500):
            facts_doc = dict(base_facts)
            facts_doc["vehicle_type"] = vehicle_types[rng.integers(4)]
            facts_doc["desired_finish"] = finishes[rng.integers(4)]
            facts_doc["impact_rating"] = ratings[rng.integers(4)]
            facts_doc["lead_time_years"] = float(rng.uniform(0.3, 5.0))
            facts_doc["production_volume_thousands"] = float(rng.uniform(10, 600))
            facts_doc["curb_weight_lbs"] = float(rng.uniform(1500, 8000))
            facts = FactSet.from_document(facts_doc)

            doc = copy.deepcopy(base_doc)
            # random extra restriction rule
            slot_id = list(slots)[rng.integers(len(slots))]
            materials = slots[slot_id]
            material = materials[rng.integers(len(materials))]
            doc["rules"].append({
                "id": f"mutant_{trial}",
                "category": "restriction",
                "objectivity": "objective",
                "when": {"facts": [{"field": "lead_time_years", "op": "lt",
                                    "value": float(rng.uniform(0.2, 6.0))}]},
                "effect": {"kind": "forbid", "slot": slot_id,
                           "material": material},
            })
            kb_base = load_knowledge_base(base_doc)
            kb_grown = load_knowledge_base(doc)
            try:
                r_base = run_restrictions(kb_base, facts)
            except MaudError:
                continue
            # determinism
            r_again = run_restrictions(kb_base, facts)
            assert r_base.feasible == r_again.feasible
            assert r_base.removals == r_again.removals
            # trace soundness
            for sid, mats in slots.items():
                for removed in set(mats) - set(r_base.feasible[sid]):
                    assert any(r.slot == sid and r.material == removed
                               for r in r_base.removals)
            # restriction monotonicity under the added rule
            try:
                r_grown = run_restrictions(kb_grown, facts)
            except MaudError:
                continue
            for sid in slots:
                assert set(r_grown.feasible[sid]) <= set(r_base.feasible[sid])


def test_cli_service_equivalence(tmp_path, service_client):
    with _Criterion("CLI vs session-API fingerprints for 20 random scripts"):
        import json as json_mod

        from maud.cli import main as cli_main

        rng = np.random.default_rng(17)
        attributes_doc = bumper_attributes_document()
        attrs_path = tmp_path / "attrs.json"
        attrs_path.write_text(json_mod.dumps(attributes_doc))
        from maud.documents import attributes_from_document
        attributes = attributes_from_document(attributes_doc)

        for trial in range(20):
            answers = []
            for attr in attributes:
                c = float(rng.uniform(-6.0, 6.0))
                answers.append(certainty_equivalent_for(attr, c))
            answers.extend(float(p) for p in rng.uniform(0.05, 0.95,
                                                         size=len(attributes)))
            # CLI path
            script_path = tmp_path / f"script_{trial}.json"
            out_path = tmp_path / f"profile_{trial}.json"
            script_path.write_text(json_mod.dumps({"answers": answers}))
            rc = cli_main(["assess", "--attributes", str(attrs_path),
                           "--answers", str(script_path),
                           "--out", str(out_path)])
            assert rc == 0
            cli_fingerprint = json_mod.loads(out_path.read_text())["fingerprint"]
            # service path
            status, resp = service_client.call(
                "POST", "/sessions", {"attributes": attributes_doc["attributes"]})
            sid = resp["session_id"]
            for i, answer in enumerate(answers):
                status, resp = service_client.call(
                    "POST", f"/sessions/{sid}/answers",
                    {"index": i, "answer": answer})
                assert status == 200, resp
            status, resp = service_client.call(
                "POST", f"/sessions/{sid}/finalize", {})
            assert status == 201
            assert resp["profile_fingerprint"] == cli_fingerprint
