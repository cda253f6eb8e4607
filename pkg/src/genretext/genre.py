"""Genre profiles: element availability, realization distributions, staging.

Profiles ship as editable JSON holding the raw percentages as printed in the
reference tables; columns are renormalized at load time and a warning names
the table when a column strays from 100% by more than the tolerance.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from importlib import resources

from .errors import (
    NoDistributionError,
    RenormalizationWarning,
    SchemaError,
    UnknownFeatureError,
)
from .rng import SplitMix64, sample_categorical
from .systems import SystemNetwork
from .task_model import (
    CONSTRAINT,
    ELEMENT_KINDS,
    FUNCTION,
    GOAL,
    RESULT,
    SUBSTEP,
    TaskElement,
    TaskModel,
    plan_elements,
)

GENRES = ("procedure", "ready-reference", "elaboration")

DETERMINISTIC = "deterministic"
STOCHASTIC = "stochastic"

# which bundled reference table a profile column reproduces; used to name
# the table in renormalization warnings
REFERENCE_LABELS = {
    "availability": "fig3",
    (GOAL, "modal-system"): "fig4",
    (CONSTRAINT, "polarity"): "fig5",
    (SUBSTEP, "mood-system"): "fig6",
}

_RENORM_TOLERANCE = 0.005  # on the renormalized scale, i.e. 0.5 points


def _reference_label(kind: str | None, system: str | None) -> str:
    if kind is None:
        return REFERENCE_LABELS["availability"]
    return REFERENCE_LABELS.get((kind, system), "fig2")


@dataclass(frozen=True)
class Distribution:
    """Renormalized weights over one system's features for one element kind."""

    system: str
    weights: dict[str, float]        # feature -> proportion, sums to 1
    raw: dict[str, float]            # percentages as authored

    def ordered(self, network: SystemNetwork) -> tuple[list[str], list[float]]:
        features = list(network.system(self.system).features)
        return features, [self.weights.get(f, 0.0) for f in features]

    def argmax(self, network: SystemNetwork) -> str:
        features, weights = self.ordered(network)
        best = max(weights)
        for f, w in zip(features, weights):
            if w == best:
                return f
        return features[0]


@dataclass(frozen=True)
class Qualitative:
    causatives_allowed: bool
    verbal_processes_allowed: bool
    allowed_conjunctions: frozenset[str]
    goal_as_nominalisation_heading: bool


@dataclass(frozen=True)
class GenreProfile:
    genre: str
    element_availability: dict[str, float]           # kind -> renormalized proportion
    realization: dict[tuple[str, str], Distribution]  # (kind, system) -> distribution
    qualitative: Qualitative
    modal_defaults: dict[str, str]                    # modal-subtype / modal-voice
    network: SystemNetwork = field(repr=False, compare=False, default=None)

    def distribution(self, kind: str, system: str) -> Distribution:
        try:
            return self.realization[(kind, system)]
        except KeyError:
            raise NoDistributionError(
                f"genre {self.genre!r} has no distribution for ({kind}, {system})"
            ) from None


@dataclass(frozen=True)
class Stage:
    element: TaskElement
    lang: str
    as_heading: bool = False
    attach_purpose_goal: TaskElement | None = None


@dataclass(frozen=True)
class DocumentPlan:
    genre: str
    stages: tuple[Stage, ...]


def _renormalize(
    raw: dict[str, float], genre: str, label: str, what: str
) -> dict[str, float]:
    total = sum(raw.values())
    if total <= 0:
        raise SchemaError(f"{what}: weights sum to {total}")
    scaled = {k: v / total for k, v in raw.items()}
    if abs(total / 100.0 - 1.0) > _RENORM_TOLERANCE:
        warnings.warn(
            f"renormalized {what} for {genre} (table {label}): "
            f"raw column sums to {total:g}%",
            RenormalizationWarning,
            stacklevel=3,
        )
    return scaled


def load_profiles(text: str, network: SystemNetwork) -> dict[str, GenreProfile]:
    """Parse a profile file; distributions renormalized, warnings on drift."""
    raw = json.loads(text)
    if not isinstance(raw, dict) or "genres" not in raw:
        raise SchemaError("profile file must be a JSON object with a 'genres' key")
    profiles: dict[str, GenreProfile] = {}
    for genre, body in raw["genres"].items():
        if genre not in GENRES:
            raise SchemaError(f"unknown genre {genre!r}")
        for key in body:
            if key not in ("availability", "realization", "qualitative", "modal_defaults"):
                raise SchemaError(f"genre {genre!r}: unexpected key {key!r}")
        avail_raw = {k: float(v) for k, v in body["availability"].items()}
        for kind in avail_raw:
            if kind not in ELEMENT_KINDS:
                raise SchemaError(f"genre {genre!r}: unknown element kind {kind!r}")
        for kind in ELEMENT_KINDS:
            avail_raw.setdefault(kind, 0.0)
        availability = _renormalize(
            avail_raw, genre, _reference_label(None, None), "element availability"
        )

        realization: dict[tuple[str, str], Distribution] = {}
        for kind, by_system in body.get("realization", {}).items():
            if kind not in ELEMENT_KINDS:
                raise SchemaError(f"genre {genre!r}: unknown element kind {kind!r}")
            if availability[kind] == 0.0:
                raise SchemaError(
                    f"genre {genre!r}: {kind} has availability 0 but a realization block"
                )
            for system, weights in by_system.items():
                declared = network.system(system).features
                for feature in weights:
                    if feature not in declared:
                        raise UnknownFeatureError(
                            f"genre {genre!r}: {feature!r} is not a feature of {system!r}"
                        )
                raw_w = {f: float(weights.get(f, 0.0)) for f in declared}
                norm = _renormalize(
                    raw_w, genre, _reference_label(kind, system), f"{kind}/{system}"
                )
                realization[(kind, system)] = Distribution(system, norm, raw_w)

        q = body["qualitative"]
        qualitative = Qualitative(
            causatives_allowed=bool(q["causatives_allowed"]),
            verbal_processes_allowed=bool(q["verbal_processes_allowed"]),
            allowed_conjunctions=frozenset(q["allowed_conjunctions"]),
            goal_as_nominalisation_heading=bool(q["goal_as_nominalisation_heading"]),
        )
        profiles[genre] = GenreProfile(
            genre=genre,
            element_availability=availability,
            realization=realization,
            qualitative=qualitative,
            modal_defaults=dict(body.get("modal_defaults", {})),
            network=network,
        )
    return profiles


def element_availability(profile: GenreProfile, kind: str) -> float:
    """Renormalized share of this element kind; 0 means it never surfaces."""
    if kind not in ELEMENT_KINDS:
        raise SchemaError(f"unknown element kind {kind!r}")
    return profile.element_availability[kind]


def select_feature(
    profile: GenreProfile,
    kind: str,
    system: str,
    mode: str,
    rng: SplitMix64 | None = None,
) -> str:
    """Pick one feature for (kind, system) under this genre.

    Deterministic mode returns the maximum-weight feature (declaration order
    breaks ties); stochastic mode samples the distribution and advances rng.
    """
    dist = profile.distribution(kind, system)
    if mode == DETERMINISTIC:
        return dist.argmax(profile.network)
    if mode != STOCHASTIC:
        raise ValueError(f"unknown mode {mode!r}")
    if rng is None:
        raise ValueError("stochastic mode needs an rng")
    features, weights = dist.ordered(profile.network)
    return sample_categorical(rng, features, weights)


def stage_structure(
    profile: GenreProfile, model: TaskModel, goal_id: str, lang: str
) -> DocumentPlan:
    """Select and order the stages a document for this goal will realize.

    Elements whose kind has availability 0 are dropped. The procedure genre
    renders the goal as a nominalised heading and attaches it as a purpose
    clause to the first substep; ready-reference opens with the related
    function and realizes everything as clauses; elaboration keeps plan order.
    """
    ordered = plan_elements(model, goal_id)
    goal = ordered[0]
    available = [
        e for e in ordered if profile.element_availability[e.kind] > 0.0
    ]

    stages: list[Stage] = []
    if profile.qualitative.goal_as_nominalisation_heading:
        stages.append(Stage(goal, lang, as_heading=True))
        first_substep = True
        for e in available:
            if e.kind == GOAL:
                continue
            if e.kind == SUBSTEP and first_substep:
                stages.append(Stage(e, lang, attach_purpose_goal=goal))
                first_substep = False
            else:
                stages.append(Stage(e, lang))
        return DocumentPlan(profile.genre, tuple(stages))

    if profile.genre == "ready-reference":
        goal_verb = getattr(goal.payload, "verb", None)
        if profile.element_availability[FUNCTION] > 0.0 and goal_verb is not None:
            for fid, _ in model.functions:
                f = model.element_index[fid]
                if getattr(f.payload, "verb", None) == goal_verb:
                    stages.append(Stage(f, lang))
                    break
        for want in (CONSTRAINT, SUBSTEP, RESULT):
            for e in available:
                if e.kind == want:
                    stages.append(Stage(e, lang))
        return DocumentPlan(profile.genre, tuple(stages))

    # elaboration: plan order, everything available kept as clauses
    stages = [Stage(e, lang) for e in available]
    return DocumentPlan(profile.genre, tuple(stages))


def profile_file_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def default_profiles_text() -> str:
    return resources.files("genretext").joinpath("data/paper-profiles.json").read_text("utf-8")


def default_profiles(network: SystemNetwork) -> dict[str, GenreProfile]:
    return load_profiles(default_profiles_text(), network)
