import json

import pytest

import genretext as gt
from genretext.errors import NoDistributionError, RenormalizationWarning, UnknownFeatureError
from genretext.genre import load_profiles, profile_file_hash
from genretext.rng import SplitMix64


def test_shipped_profiles_renormalize(profiles):
    proc = profiles["procedure"]
    dist = proc.distribution("substep", "mood-system")
    assert dist.weights["imperative"] == pytest.approx(0.973)
    assert dist.weights["declarative"] == pytest.approx(0.027)
    assert sum(dist.weights.values()) == pytest.approx(1.0, abs=1e-9)


def test_renormalization_warns_and_preserves_raw(network):
    from genretext.genre import default_profiles_text

    with pytest.warns(RenormalizationWarning) as record:
        profiles = load_profiles(default_profiles_text(), network)
    messages = [str(w.message) for w in record]
    assert any("fig3" in m and "92" in m for m in messages)
    assert any("fig4" in m and "101" in m for m in messages)

    dist = profiles["elaboration"].distribution("goal", "modal-system")
    assert dist.raw == {"modal": 28.4, "non-modal": 72.6}
    assert dist.weights["non-modal"] == pytest.approx(0.7188, abs=1e-4)
    assert dist.weights["modal"] == pytest.approx(0.2812, abs=1e-4)


def test_unknown_feature_rejected(network):
    doc = {
        "genres": {
            "procedure": {
                "availability": {"substep": 100},
                "realization": {"substep": {"mood-system": {"subjunctive": 100}}},
                "qualitative": {
                    "causatives_allowed": False,
                    "verbal_processes_allowed": False,
                    "allowed_conjunctions": [],
                    "goal_as_nominalisation_heading": True,
                },
            }
        }
    }
    with pytest.raises(UnknownFeatureError):
        load_profiles(json.dumps(doc), network)


def test_element_availability_values(profiles):
    assert gt.element_availability(profiles["procedure"], "constraint") == 0.0
    assert gt.element_availability(profiles["procedure"], "substep") == pytest.approx(0.77)
    assert gt.element_availability(profiles["ready-reference"], "result") == pytest.approx(0.25)


def test_select_deterministic(profiles):
    assert gt.select_feature(profiles["procedure"], "substep", "mood-system",
                             gt.DETERMINISTIC) == "imperative"
    assert gt.select_feature(profiles["ready-reference"], "constraint", "polarity",
                             gt.DETERMINISTIC) == "positive"


def test_deterministic_tie_breaks_by_declaration_order(network, profiles):
    from genretext.genre import Distribution, GenreProfile

    proc = profiles["procedure"]
    tied = Distribution("polarity", {"positive": 0.5, "negative": 0.5},
                        {"positive": 50, "negative": 50})
    patched = GenreProfile(
        genre=proc.genre,
        element_availability=proc.element_availability,
        realization={**proc.realization, ("substep", "polarity"): tied},
        qualitative=proc.qualitative,
        modal_defaults=proc.modal_defaults,
        network=network,
    )
    assert gt.select_feature(patched, "substep", "polarity", gt.DETERMINISTIC) == "positive"


def test_select_stochastic_zero_weight_never_drawn(profiles):
    rng = SplitMix64(123)
    for _ in range(2000):
        assert gt.select_feature(profiles["procedure"], "goal", "modal-system",
                                 gt.STOCHASTIC, rng) == "non-modal"


def test_select_stochastic_reproducible(profiles):
    a = SplitMix64(42)
    b = SplitMix64(42)
    seq_a = [gt.select_feature(profiles["elaboration"], "substep", "mood-system",
                               gt.STOCHASTIC, a) for _ in range(10)]
    seq_b = [gt.select_feature(profiles["elaboration"], "substep", "mood-system",
                               gt.STOCHASTIC, b) for _ in range(10)]
    assert seq_a == seq_b


def test_select_stochastic_converges(profiles):
    # empirical frequency within 4*sqrt(p(1-p)/n) of the weight at n=2000
    rng = SplitMix64(99)
    n = 2000
    draws = [gt.select_feature(profiles["elaboration"], "substep", "mood-system",
                               gt.STOCHASTIC, rng) for _ in range(n)]
    dist = profiles["elaboration"].distribution("substep", "mood-system")
    for feature, p in dist.weights.items():
        bound = 4 * (p * (1 - p) / n) ** 0.5
        assert abs(draws.count(feature) / n - p) <= bound


def test_no_distribution_error(profiles):
    with pytest.raises(NoDistributionError):
        gt.select_feature(profiles["procedure"], "constraint", "polarity", gt.DETERMINISTIC)


def test_stage_structure_procedure_drops_zero_availability(model, profiles):
    plan = gt.stage_structure(profiles["procedure"], model, "save-with-duplicate-title", "fr")
    kinds = [s.element.kind for s in plan.stages]
    assert kinds == ["goal", "substep", "substep"]
    assert plan.stages[0].as_heading
    assert plan.stages[1].attach_purpose_goal is model.element_index["save-with-duplicate-title"]
    assert plan.stages[2].attach_purpose_goal is None


def test_stage_structure_ready_reference_order(model, profiles):
    plan = gt.stage_structure(profiles["ready-reference"], model, "save-with-duplicate-title", "fr")
    kinds = [s.element.kind for s in plan.stages]
    assert kinds == ["function", "constraint", "substep", "substep", "result"]
    assert not any(s.as_heading for s in plan.stages)
    assert plan.stages[0].element.id == "f-save-cmd"


def test_stage_structure_elaboration_keeps_plan_order(model, profiles):
    plan = gt.stage_structure(profiles["elaboration"], model, "paste", "fr")
    ids = [s.element.id for s in plan.stages]
    assert ids == ["paste", "s-open-target", "s-choose-paste", "r-copy-appears"]


def test_stage_structure_never_emits_unavailable(model, profiles):
    for genre, profile in profiles.items():
        for goal in ("select-word", "close-find-window", "paste", "save-with-duplicate-title"):
            plan = gt.stage_structure(profile, model, goal, "fr")
            for stage in plan.stages:
                assert profile.element_availability[stage.element.kind] > 0.0


def test_profile_hash_stable():
    assert profile_file_hash("abc") == profile_file_hash("abc")
    assert profile_file_hash("abc") != profile_file_hash("abd")


def test_renormalization_preserves_argmax(network, profiles):
    for profile in profiles.values():
        for (kind, system), dist in profile.realization.items():
            best_raw = max(dist.raw.values())
            raw_argmax = next(
                f for f in network.system(system).features if dist.raw[f] == best_raw
            )
            assert dist.argmax(network) == raw_argmax


def test_negative_weights_bounded_by_undifferentiated_row(profiles):
    # forced cases: function never negative; goal/substep negative stays at or
    # below the genre-undifferentiated weights (3%)
    for profile in profiles.values():
        for kind, cap in (("function", 0.0), ("goal", 0.03), ("substep", 0.03)):
            if profile.element_availability[kind] == 0.0:
                continue
            weight = profile.distribution(kind, "polarity").weights.get("negative", 0.0)
            assert weight <= cap + 1e-9


def test_modal_weight_zero_for_function_and_constraint(profiles):
    for profile in profiles.values():
        for kind in ("function", "constraint"):
            if profile.element_availability[kind] == 0.0:
                continue
            assert profile.distribution(kind, "modal-system").weights["modal"] == 0.0
