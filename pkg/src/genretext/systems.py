"""Systems of mutually exclusive grammatical features with entry conditions.

A system fires for a text unit when its entry condition holds against the
unit's context flags and the selections already made; dependent systems
(entered through a parent feature) become applicable only once that parent
feature is selected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import MissingDefaultError, SchemaError, UnknownFeatureError, UnknownSystemError

ENTRY_ALWAYS = "always"
ENTRY_CONTEXT = "context"
ENTRY_FEATURE = "feature"


@dataclass(frozen=True)
class EntryCondition:
    kind: str                      # "always" | "context" | "feature"
    context_flag: str | None = None    # "finite" | "clausal"
    system: str | None = None
    feature: str | None = None


@dataclass(frozen=True)
class System:
    name: str
    features: tuple[str, ...]
    entry: EntryCondition

    def __post_init__(self):
        if len(self.features) < 2:
            raise SchemaError(f"system {self.name!r} needs at least two features")
        if len(set(self.features)) != len(self.features):
            raise SchemaError(f"system {self.name!r} repeats a feature name")


@dataclass(frozen=True)
class UnitContext:
    finite: bool
    clausal: bool

    def as_dict(self) -> dict:
        return {"finite": self.finite, "clausal": self.clausal}


NON_CLAUSAL = UnitContext(finite=False, clausal=False)
FINITE_CLAUSE = UnitContext(finite=True, clausal=True)
NON_FINITE_CLAUSE = UnitContext(finite=False, clausal=True)


@dataclass
class FeatureBundle:
    """One coded unit: at most one feature per applicable system."""

    selections: dict[str, str] = field(default_factory=dict)
    context: UnitContext = FINITE_CLAUSE

    def copy(self) -> "FeatureBundle":
        return FeatureBundle(dict(self.selections), self.context)

    def get(self, system: str) -> str | None:
        return self.selections.get(system)


@dataclass(frozen=True)
class Violation:
    system: str
    message: str


class SystemNetwork:
    """Immutable collection of systems with validated entry dependencies."""

    def __init__(self, systems: list[System]):
        self.systems: tuple[System, ...] = tuple(systems)
        self.by_name: dict[str, System] = {}
        owner: dict[str, str] = {}
        for sys_ in self.systems:
            if sys_.name in self.by_name:
                raise SchemaError(f"duplicate system name {sys_.name!r}")
            self.by_name[sys_.name] = sys_
            for f in sys_.features:
                if f in owner:
                    raise SchemaError(
                        f"feature {f!r} declared in both {owner[f]!r} and {sys_.name!r}"
                    )
                owner[f] = sys_.name
        self.feature_owner = owner
        self._check_entries()

    def _check_entries(self) -> None:
        for sys_ in self.systems:
            e = sys_.entry
            if e.kind == ENTRY_FEATURE:
                if e.system not in self.by_name:
                    raise SchemaError(f"{sys_.name!r} enters through unknown system {e.system!r}")
                if e.feature not in self.by_name[e.system].features:
                    raise UnknownFeatureError(
                        f"{sys_.name!r} enters through {e.feature!r}, "
                        f"not a feature of {e.system!r}"
                    )
        # entry edges must be acyclic
        visiting: set[str] = set()
        done: set[str] = set()

        def visit(name: str) -> None:
            if name in done:
                return
            if name in visiting:
                raise SchemaError(f"entry conditions cycle through {name!r}")
            visiting.add(name)
            e = self.by_name[name].entry
            if e.kind == ENTRY_FEATURE:
                visit(e.system)  # type: ignore[arg-type]
            visiting.discard(name)
            done.add(name)

        for sys_ in self.systems:
            visit(sys_.name)

    def system(self, name: str) -> System:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownSystemError(f"unknown system {name!r}") from None

    def entry_holds(self, system: System, bundle: FeatureBundle) -> bool:
        e = system.entry
        if e.kind == ENTRY_ALWAYS:
            return True
        if e.kind == ENTRY_CONTEXT:
            if e.context_flag == "finite":
                return bundle.context.finite and bundle.context.clausal
            return bundle.context.clausal
        return bundle.selections.get(e.system) == e.feature  # type: ignore[arg-type]


def applicable_systems(network: SystemNetwork, bundle: FeatureBundle) -> set[str]:
    """Names of the systems whose entry conditions hold for this bundle."""
    return {s.name for s in network.systems if network.entry_holds(s, bundle)}


def validate_bundle(network: SystemNetwork, bundle: FeatureBundle) -> list[Violation]:
    """Check the bundle invariants; violations are data, not failures."""
    violations: list[Violation] = []
    applicable = applicable_systems(network, bundle)
    for name, feature in bundle.selections.items():
        if name not in network.by_name:
            violations.append(Violation(name, f"unknown system: {name}"))
            continue
        if feature not in network.by_name[name].features:
            violations.append(Violation(name, f"unknown feature {feature!r} for system: {name}"))
            continue
        if name not in applicable:
            violations.append(Violation(name, f"entry condition not met: {name}"))
    for name in sorted(applicable):
        if name not in bundle.selections:
            violations.append(Violation(name, f"unselected applicable system: {name}"))
    return violations


def complete_bundle(
    network: SystemNetwork,
    partial: FeatureBundle,
    defaults: dict[str, str],
) -> FeatureBundle:
    """Fill every applicable system from defaults, never overwriting selections.

    Selecting a feature can make further systems applicable, so filling
    iterates to a fixed point. Raises MissingDefaultError when an applicable
    system has neither a selection nor a default.
    """
    out = partial.copy()
    while True:
        missing = [
            name
            for name in sorted(applicable_systems(network, out))
            if name not in out.selections
        ]
        if not missing:
            return out
        for name in missing:
            if name not in defaults:
                raise MissingDefaultError(name)
            feature = defaults[name]
            if feature not in network.by_name[name].features:
                raise UnknownFeatureError(
                    f"default {feature!r} is not a feature of {name!r}"
                )
            out.selections[name] = feature


def _parse_entry(raw) -> EntryCondition:
    if raw == ENTRY_ALWAYS:
        return EntryCondition(ENTRY_ALWAYS)
    if not isinstance(raw, dict):
        raise SchemaError(f"bad entry condition: {raw!r}")
    if "context" in raw:
        flag = raw["context"]
        if flag not in ("finite", "clausal"):
            raise SchemaError(f"bad context flag: {flag!r}")
        return EntryCondition(ENTRY_CONTEXT, context_flag=flag)
    if "system" in raw and "feature" in raw:
        return EntryCondition(ENTRY_FEATURE, system=raw["system"], feature=raw["feature"])
    raise SchemaError(f"bad entry condition: {raw!r}")


def load_network(text: str) -> SystemNetwork:
    """Parse a network definition file (JSON list of systems)."""
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise SchemaError("network file must be a JSON list of systems")
    systems = []
    for item in raw:
        try:
            systems.append(
                System(
                    name=item["name"],
                    features=tuple(item["features"]),
                    entry=_parse_entry(item.get("entry", ENTRY_ALWAYS)),
                )
            )
        except KeyError as exc:
            raise SchemaError(f"system entry missing field {exc}") from None
    return SystemNetwork(systems)


def default_network() -> SystemNetwork:
    """The network definition shipped with the package."""
    text = resources.files("genretext").joinpath("data/network.json").read_text("utf-8")
    return load_network(text)
