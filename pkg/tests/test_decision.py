"""Decision-kernel tests: evaluation, axioms, event comparison, extraction."""

import itertools
from fractions import Fraction

import pytest

from branchlab import (
    Act,
    AxiomError,
    Comparison,
    Infeasible,
    PreferenceRelation,
    Representation,
    Setup,
    all_acts,
    all_events,
    check_axioms,
    expected_utility,
    extract_representation,
    generate_preferences,
    qualitative_probability,
)
from branchlab.decision import (
    orderings_match,
    preferences_from_json_dict,
    preferences_to_json_dict,
    representation_roundtrip_sweep,
)

TWO = Setup("fission", ("s1", "s2"), ("c1", "c2"))


def rep(p, u):
    return Representation(probability=p, utility=u)


class TestExpectedUtility:
    def test_constant_act(self):
        r = rep({"s1": Fraction(1, 4), "s2": Fraction(3, 4)}, {"c1": 7, "c2": 0})
        act = Act.constant(TWO, "c1")
        assert expected_utility(act, r) == 7

    def test_weighted_mix(self):
        r = rep({"s1": Fraction(1, 3), "s2": Fraction(2, 3)}, {"c1": 10, "c2": 0})
        act = Act.from_mapping({"s1": "c1", "s2": "c2"})
        assert expected_utility(act, r) == Fraction(10, 3)

    def test_uniform_two_state(self):
        r = rep({"s1": Fraction(1, 2), "s2": Fraction(1, 2)}, {"c1": 0, "c2": 1})
        act = Act.from_mapping({"s1": "c1", "s2": "c2"})
        assert expected_utility(act, r) == Fraction(1, 2)

    def test_missing_state_raises(self):
        r = rep({"s1": 1.0}, {"c1": 1})
        with pytest.raises(KeyError):
            expected_utility(Act.from_mapping({"sX": "c1"}), r)

    def test_affine_invariance_of_ordering(self):
        base = rep(
            {"s1": Fraction(2, 7), "s2": Fraction(5, 7)},
            {"c1": Fraction(-3), "c2": Fraction(4)},
        )
        shifted = rep(
            base.probability,
            {c: Fraction(5, 2) * u + 11 for c, u in base.utility.items()},
        )
        tiers_a = [
            [a.assignment for a in tier]
            for tier in generate_preferences(TWO, base).tiers()
        ]
        tiers_b = [
            [a.assignment for a in tier]
            for tier in generate_preferences(TWO, shifted).tiers()
        ]
        assert tiers_a == tiers_b


class TestCheckAxioms:
    def test_eu_generated_preferences_pass(self):
        r = rep({"s1": Fraction(1, 3), "s2": Fraction(2, 3)}, {"c1": 0, "c2": 1})
        assert check_axioms(generate_preferences(TWO, r)) == []

    def test_strict_cycle_detected(self):
        acts = [
            Act.from_mapping({"s1": "c1", "s2": "c1"}),
            Act.from_mapping({"s1": "c1", "s2": "c2"}),
            Act.from_mapping({"s1": "c2", "s2": "c1"}),
        ]
        prefs = PreferenceRelation.from_pairs(
            TWO, acts, [(acts[0], acts[1]), (acts[1], acts[2]), (acts[2], acts[0])]
        )
        violations = check_axioms(prefs)
        assert any(v.kind == "transitivity" for v in violations)

    def test_dominance_violation_detected(self):
        good, bad = Act.constant(TWO, "c1"), Act.constant(TWO, "c2")
        mixed = Act.from_mapping({"s1": "c1", "s2": "c2"})
        # mixed state-wise weakly beats the all-bad act, yet is ranked below it
        prefs = PreferenceRelation.from_tiers(TWO, [[good], [bad], [mixed]])
        violations = check_axioms(prefs)
        assert any(
            v.kind == "dominance" and v.acts == (mixed, bad) for v in violations
        )

    def test_totality_enforced(self):
        acts = [Act.constant(TWO, "c1"), Act.constant(TWO, "c2")]
        with pytest.raises(ValueError, match="total"):
            PreferenceRelation(TWO, tuple(acts), frozenset())


class TestQualitativeProbability:
    def prefs(self):
        setup = Setup("fission", ("s1", "s2", "s3"), ("win", "lose"))
        r = rep(
            {"s1": Fraction(7, 10), "s2": Fraction(2, 10), "s3": Fraction(1, 10)},
            {"win": 1, "lose": 0},
        )
        return setup, r, generate_preferences(setup, r)

    def test_identical_events(self):
        setup, _, prefs = self.prefs()
        assert qualitative_probability(prefs, {"s1"}, {"s1"}) == Comparison.HIGHER_OR_EQUAL

    def test_majority_state_beats_the_rest(self):
        setup, _, prefs = self.prefs()
        assert (
            qualitative_probability(prefs, {"s1"}, {"s2", "s3"})
            == Comparison.HIGHER_OR_EQUAL
        )
        assert qualitative_probability(prefs, {"s2"}, {"s1"}) == Comparison.LOWER

    def test_absent_acts_incomparable(self):
        setup, r, _ = self.prefs()
        consts = [Act.constant(setup, "win"), Act.constant(setup, "lose")]
        sparse = PreferenceRelation.from_tiers(setup, [[consts[0]], [consts[1]]])
        assert qualitative_probability(sparse, {"s1"}, {"s2"}) == Comparison.INCOMPARABLE

    def test_agrees_with_numeric_probability_on_all_event_pairs(self):
        setup, r, prefs = self.prefs()
        for ea, eb in itertools.product(all_events(setup), repeat=2):
            verdict = qualitative_probability(prefs, ea, eb)
            pa = sum(r.probability[s] for s in ea)
            pb = sum(r.probability[s] for s in eb)
            if verdict == Comparison.HIGHER_OR_EQUAL:
                assert pa >= pb
            else:
                assert verdict == Comparison.LOWER and pa < pb


class TestExtraction:
    def test_worked_two_state_instance(self):
        r = rep({"s1": Fraction(1, 3), "s2": Fraction(2, 3)}, {"c1": 0, "c2": 1})
        prefs = generate_preferences(TWO, r)
        out = extract_representation(prefs)
        assert isinstance(out, Representation)
        assert out.probability["s1"] == pytest.approx(1 / 3, abs=1e-6)
        assert out.probability["s2"] == pytest.approx(2 / 3, abs=1e-6)
        assert orderings_match(prefs, out)

    def test_constant_acts_only_returns_uniform(self):
        consts = [[Act.constant(TWO, "c2")], [Act.constant(TWO, "c1")]]
        prefs = PreferenceRelation.from_tiers(TWO, consts)
        out = extract_representation(prefs)
        assert out.probability == {"s1": 0.5, "s2": 0.5}
        assert out.utility == {"c1": 0.0, "c2": 1.0}

    def test_single_indifference_class(self):
        consts = [[Act.constant(TWO, "c1"), Act.constant(TWO, "c2")]]
        prefs = PreferenceRelation.from_tiers(TWO, consts)
        out = extract_representation(prefs)
        assert out.utility == {"c1": 0.0, "c2": 0.0}
        assert out.probability == {"s1": 0.5, "s2": 0.5}

    def test_intransitive_input_rejected(self):
        acts = [
            Act.constant(TWO, "c1"),
            Act.constant(TWO, "c2"),
            Act.from_mapping({"s1": "c1", "s2": "c2"}),
        ]
        prefs = PreferenceRelation.from_pairs(
            TWO, acts, [(acts[0], acts[1]), (acts[1], acts[2]), (acts[2], acts[0])]
        )
        with pytest.raises(AxiomError):
            extract_representation(prefs)

    def test_unrepresentable_ordering_gets_witness(self):
        # A qualitative-probability cycle: the singleton bets demand
        # p1 > p2 while the pair bets demand p2 > p1.  Transitive, total,
        # dominance-clean, and EU-infeasible.
        setup = Setup("fission", ("s1", "s2", "s3"), ("win", "lose"))

        def bet(event):
            return Act.from_mapping(
                {s: ("win" if s in event else "lose") for s in setup.states}
            )

        tiers = [
            [Act.constant(setup, "win")],
            [bet({"s2", "s3"})],
            [bet({"s1", "s3"})],
            [bet({"s1"})],
            [bet({"s2"})],
            [bet({"s3"})],
            [Act.constant(setup, "lose")],
        ]
        prefs = PreferenceRelation.from_tiers(setup, tiers)
        assert check_axioms(prefs) == []
        out = extract_representation(prefs)
        assert isinstance(out, Infeasible)
        assert len(out.witness) == 2

    def test_requires_all_constant_acts(self):
        r = rep({"s1": Fraction(1, 3), "s2": Fraction(2, 3)}, {"c1": 0, "c2": 1})
        prefs = generate_preferences(TWO, r)
        trimmed = [
            [a for a in tier if a != Act.constant(TWO, "c1")] for tier in prefs.tiers()
        ]
        trimmed = [tier for tier in trimmed if tier]
        with pytest.raises(ValueError, match="constant act"):
            extract_representation(PreferenceRelation.from_tiers(TWO, trimmed))

    def test_roundtrip_sample(self):
        results = representation_roundtrip_sweep(12, seed=42)
        assert all(r["ok"] for r in results)


class TestPreferenceJson:
    def test_round_trip(self):
        r = rep({"s1": Fraction(1, 3), "s2": Fraction(2, 3)}, {"c1": 0, "c2": 1})
        prefs = generate_preferences(TWO, r)
        doc = preferences_to_json_dict(prefs)
        back = preferences_from_json_dict(doc)
        assert back.setup == prefs.setup
        assert [len(t) for t in back.tiers()] == [len(t) for t in prefs.tiers()]

    def test_bare_tier_list_accepted(self):
        doc = [
            [{"s1": "c2", "s2": "c2"}],
            [{"s1": "c1", "s2": "c2"}],
            [{"s1": "c2", "s2": "c1"}],
            [{"s1": "c1", "s2": "c1"}],
        ]
        prefs = preferences_from_json_dict(doc)
        assert prefs.setup.states == ("s1", "s2")
        assert len(prefs.acts) == 4

    def test_enumeration_caps(self):
        big = Setup("chance", tuple(f"s{i}" for i in range(13)), ("c",))
        with pytest.raises(ValueError):
            all_events(big)
        huge = Setup("chance", tuple(f"s{i}" for i in range(9)), tuple(f"c{i}" for i in range(9)))
        with pytest.raises(ValueError):
            all_acts(huge)
