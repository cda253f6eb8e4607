"""Generation pipeline: sampled bundles, corpora and staged documents.

Element kinds are apportioned over a corpus by availability with the
largest-remainder method, so structural zeros stay exactly zero and the
element mix is reproduced at any seed. In stochastic mode, features are
likewise apportioned per (kind, system) cell over the units the system
applies to and assigned in an rng-shuffled order: every unit is an
unpredictable draw, while the corpus-level frequencies recover the profile
distributions to within rounding, which is what the downstream table
comparisons check. Deterministic mode takes the maximum-weight feature
everywhere and ignores the rng.
"""

from __future__ import annotations

from .corpus import CodedCorpus, CodedUnit
from .errors import GenretextError
from .genre import (
    DETERMINISTIC,
    GenreProfile,
    STOCHASTIC,
    select_feature,
    stage_structure,
)
from .lexicon import Lexicon
from .realize import RuleSet, heading_bundle, realize_document, realize_unit
from .rng import SplitMix64, largest_remainder
from .systems import (
    FINITE_CLAUSE,
    FeatureBundle,
    NON_FINITE_CLAUSE,
    SystemNetwork,
    validate_bundle,
)
from .task_model import (
    ActionSpec,
    CONSTRAINT,
    ELEMENT_KINDS,
    FUNCTION,
    GOAL,
    RESULT,
    SUBSTEP,
    TaskElement,
    TaskModel,
)

# systems sampled from profile distributions, in order, per element kind;
# conjunction for goals is derived from modality (purpose clause vs none)
_SAMPLED_SYSTEMS = {
    GOAL: ("modal-system", "polarity"),
    FUNCTION: ("modal-system", "mood-system", "polarity", "conjunction-type"),
    CONSTRAINT: ("modal-system", "mood-system", "polarity", "conjunction-type"),
    RESULT: ("modal-system", "mood-system", "polarity", "conjunction-type"),
    SUBSTEP: ("mood-system", "modal-system", "polarity", "conjunction-type"),
}


def head_entry(element: TaskElement, lexicon: Lexicon):
    payload = element.payload
    name = payload.verb if isinstance(payload, ActionSpec) else payload.predicate
    return lexicon.get(name)


def eligible_elements(
    model: TaskModel, kind: str, profile: GenreProfile, lexicon: Lexicon
) -> list[TaskElement]:
    """Elements of this kind whose process obeys the genre's qualitative flags."""
    out = []
    for element in model.elements_of_kind(kind):
        entry = head_entry(element, lexicon)
        if entry.causative and not profile.qualitative.causatives_allowed:
            continue
        if entry.process_type == "verbal" and not profile.qualitative.verbal_processes_allowed:
            continue
        out.append(element)
    return out


def _derive_rest(
    kind: str,
    selections: dict[str, str],
    element: TaskElement,
    profile: GenreProfile,
    lexicon: Lexicon,
) -> FeatureBundle:
    """Fill the dimensions that task element kind and prior choices determine."""
    sel = dict(selections)
    modal = sel.get("modal-system") == "modal"
    if kind == GOAL:
        sel["conjunction-type"] = "none" if modal else "purpose"
        if not modal:
            sel.pop("mood-system", None)
    if modal:
        if kind == RESULT:
            sel.setdefault("modal-subtype", "possibility")
            sel.setdefault("modal-voice", "impersonal")
        else:
            sel.setdefault("modal-subtype", profile.modal_defaults["modal-subtype"])
            sel.setdefault("modal-voice", profile.modal_defaults["modal-voice"])
    else:
        sel.pop("modal-subtype", None)
        sel.pop("modal-voice", None)

    if sel.get("polarity") == "negative":
        sel["negation-kind"] = "true-negative"
    else:
        sel.pop("negation-kind", None)

    if kind in (RESULT, FUNCTION):
        sel["agency"] = "system-agent"
    elif kind == CONSTRAINT:
        sel["agency"] = "reader-direct"
    elif sel.get("mood-system") == "imperative":
        sel["agency"] = "reader-direct"
    elif modal:
        sel["agency"] = (
            "reader-direct" if sel["modal-voice"] == "personal" else "impersonal-on"
        )
    elif kind == GOAL:
        sel["agency"] = "reader-direct"
    else:
        sel["agency"] = "impersonal-on"

    sel["voice"] = "active"
    sel["process-type"] = head_entry(element, lexicon).process_type
    sel["clause-dependency"] = (
        "dependent"
        if sel.get("conjunction-type") in ("purpose", "conditional")
        else "independent"
    )

    context = FINITE_CLAUSE
    if kind == GOAL and not modal:
        context = NON_FINITE_CLAUSE
    return FeatureBundle(sel, context)


def build_bundle(
    profile: GenreProfile,
    kind: str,
    element: TaskElement,
    lexicon: Lexicon,
    mode: str,
    rng: SplitMix64 | None = None,
) -> FeatureBundle:
    """One unit's bundle via per-system selection (the per-unit sampling path)."""
    sel: dict[str, str] = {}
    for system in _SAMPLED_SYSTEMS[kind]:
        if kind == SUBSTEP and system == "modal-system" and sel.get("mood-system") == "imperative":
            sel[system] = "non-modal"  # imperatives take no modal operator
            continue
        if kind == GOAL and system == "polarity" and sel.get("modal-system") == "modal":
            sel["mood-system"] = select_feature(profile, kind, "mood-system", mode, rng)
        sel[system] = select_feature(profile, kind, system, mode, rng)
    return _derive_rest(kind, sel, element, profile, lexicon)


def _assign_balanced(
    drafts: list[dict],
    profile: GenreProfile,
    kind: str,
    system: str,
    rng: SplitMix64,
) -> None:
    """Apportion one system's features over the given drafts and shuffle."""
    if not drafts:
        return
    dist = profile.distribution(kind, system)
    features, weights = dist.ordered(profile.network)
    counts = largest_remainder(weights, len(drafts))
    assigned: list[str] = []
    for feature, count in zip(features, counts):
        assigned.extend([feature] * count)
    rng.shuffle(assigned)
    for draft, feature in zip(drafts, assigned):
        draft[system] = feature


def generate_corpus(
    model: TaskModel,
    profile: GenreProfile,
    count: int,
    lang: str,
    mode: str,
    seed: int | None,
    lexicon: Lexicon,
    rules: RuleSet,
    network: SystemNetwork,
    metadata: dict | None = None,
) -> CodedCorpus:
    """Generate a coded corpus of `count` units under one genre profile."""
    if mode == STOCHASTIC and seed is None:
        raise GenretextError("stochastic mode requires a seed")
    rng = SplitMix64(seed) if mode == STOCHASTIC else None
    availability = [profile.element_availability[k] for k in ELEMENT_KINDS]
    kind_counts = largest_remainder(availability, count)

    units: list[CodedUnit] = []
    serial = 0
    for kind, m in zip(ELEMENT_KINDS, kind_counts):
        if m == 0:
            continue
        candidates = eligible_elements(model, kind, profile, lexicon)
        if not candidates:
            raise GenretextError(
                f"task model has no eligible {kind!r} elements for genre {profile.genre!r}"
            )
        if mode == DETERMINISTIC:
            drafts = [
                {"_element": candidates[j % len(candidates)]} for j in range(m)
            ]
            for draft in drafts:
                element = draft.pop("_element")
                bundle = build_bundle(profile, kind, element, lexicon, mode)
                draft["_element"] = element
                draft["_bundle"] = bundle
        else:
            drafts = [
                {"_element": candidates[rng.choice_index(len(candidates))]}
                for _ in range(m)
            ]
            if kind == SUBSTEP:
                _assign_balanced(drafts, profile, kind, "mood-system", rng)
                declarative = [d for d in drafts if d["mood-system"] == "declarative"]
                for d in drafts:
                    if d["mood-system"] == "imperative":
                        d["modal-system"] = "non-modal"
                _assign_balanced(declarative, profile, kind, "modal-system", rng)
            elif kind == GOAL:
                _assign_balanced(drafts, profile, kind, "modal-system", rng)
                modal = [d for d in drafts if d["modal-system"] == "modal"]
                _assign_balanced(modal, profile, kind, "mood-system", rng)
            else:
                _assign_balanced(drafts, profile, kind, "modal-system", rng)
                _assign_balanced(drafts, profile, kind, "mood-system", rng)
            _assign_balanced(drafts, profile, kind, "polarity", rng)
            if kind != GOAL:
                _assign_balanced(drafts, profile, kind, "conjunction-type", rng)
            for draft in drafts:
                element = draft.pop("_element")
                selections = {k: v for k, v in draft.items() if not k.startswith("_")}
                draft["_element"] = element
                draft["_bundle"] = _derive_rest(kind, selections, element, profile, lexicon)

        for draft in drafts:
            element = draft["_element"]
            bundle = draft["_bundle"]
            violations = validate_bundle(network, bundle)
            assert not violations, f"generated bundle invalid: {violations}"
            serial += 1
            text = realize_unit(element, bundle, lang, lexicon, rules)
            units.append(
                CodedUnit(
                    # genre-qualified so per-genre corpora concatenate cleanly
                    id=f"u-{profile.genre}-{serial:06d}",
                    genre=profile.genre,
                    element=kind,
                    lang=lang,
                    text=text,
                    bundle=bundle,
                )
            )

    meta = dict(metadata or {})
    meta.setdefault("seed", seed)
    meta.setdefault("mode", mode)
    meta.setdefault("genre", profile.genre)
    meta.setdefault("lang", lang)
    return CodedCorpus(units, meta)


def generate_document(
    model: TaskModel,
    profile: GenreProfile,
    goal_id: str,
    lang: str,
    mode: str,
    seed: int | None,
    lexicon: Lexicon,
    rules: RuleSet,
    network: SystemNetwork,
) -> str:
    """Generate one staged document for a goal under a genre profile."""
    if mode == STOCHASTIC and seed is None:
        raise GenretextError("stochastic mode requires a seed")
    rng = SplitMix64(seed) if mode == STOCHASTIC else None
    plan = stage_structure(profile, model, goal_id, lang)
    bundles = []
    for stage in plan.stages:
        if stage.as_heading:
            bundles.append(heading_bundle())
        else:
            bundles.append(
                build_bundle(profile, stage.element.kind, stage.element, lexicon, mode, rng)
            )
    return realize_document(plan, bundles, lang, lexicon, rules)


def enumerate_emittable_selections(
    profiles: dict[str, GenreProfile], kind: str
) -> list[dict[str, str]]:
    """Every sampled-selection combination some shipped profile can emit.

    The union over genres of the gated cartesian product of positive-weight
    features, before derivation of the determined dimensions.
    """
    combos: list[dict[str, str]] = []
    seen: set[tuple] = set()

    def add(sel: dict[str, str], profile: GenreProfile) -> None:
        full = _pre_derivation_key(kind, sel, profile)
        if full not in seen:
            seen.add(full)
            combos.append({"_profile": profile, **sel})  # type: ignore[dict-item]

    for profile in profiles.values():
        if profile.element_availability[kind] == 0.0:
            continue
        systems = _SAMPLED_SYSTEMS[kind]
        if kind == GOAL:
            systems = systems + ("mood-system",)
        positive = {
            system: [
                f
                for f, w in profile.distribution(kind, system).weights.items()
                if w > 0.0
            ]
            for system in systems
        }
        if kind == SUBSTEP:
            for mood in positive["mood-system"]:
                modal_opts = ["non-modal"] if mood == "imperative" else positive["modal-system"]
                for modal in modal_opts:
                    for pol in positive["polarity"]:
                        for conj in positive["conjunction-type"]:
                            add(
                                {
                                    "mood-system": mood,
                                    "modal-system": modal,
                                    "polarity": pol,
                                    "conjunction-type": conj,
                                },
                                profile,
                            )
        elif kind == GOAL:
            for modal in positive["modal-system"]:
                for pol in positive["polarity"]:
                    sel = {"modal-system": modal, "polarity": pol}
                    if modal == "modal":
                        for mood in positive["mood-system"]:
                            add({**sel, "mood-system": mood}, profile)
                    else:
                        add(sel, profile)
        else:
            for modal in positive["modal-system"]:
                for mood in positive["mood-system"]:
                    for pol in positive["polarity"]:
                        for conj in positive["conjunction-type"]:
                            add(
                                {
                                    "modal-system": modal,
                                    "mood-system": mood,
                                    "polarity": pol,
                                    "conjunction-type": conj,
                                },
                                profile,
                            )
    return combos


def _pre_derivation_key(kind: str, sel: dict[str, str], profile: GenreProfile) -> tuple:
    extra: tuple = ()
    if sel.get("modal-system") == "modal":
        if kind == RESULT:
            extra = ("possibility", "impersonal")
        else:
            extra = (
                profile.modal_defaults["modal-subtype"],
                profile.modal_defaults["modal-voice"],
            )
    return (kind, tuple(sorted(sel.items())), extra)


def emittable_bundles(
    profiles: dict[str, GenreProfile],
    kind: str,
    element: TaskElement,
    lexicon: Lexicon,
) -> list[FeatureBundle]:
    """All distinct completed bundles the corpus generator can emit for `kind`."""
    bundles = []
    seen = set()
    for combo in enumerate_emittable_selections(profiles, kind):
        profile = combo.pop("_profile")
        bundle = _derive_rest(kind, combo, element, profile, lexicon)
        key = (tuple(sorted(bundle.selections.items())), bundle.context)
        if key not in seen:
            seen.add(key)
            bundles.append(bundle)
    return bundles
