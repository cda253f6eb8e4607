"""Surface realization from task elements and completed feature bundles.

Rules are ordered data: the first rule whose element kind, language and
feature conditions match is rendered, and a catch-all per kind guarantees
totality. Patterns are slot lists; slots cover literals, lexical forms with
optional negation wrapping, patient/carrier noun phrases, modifiers and
nominalised headings. French assembly runs an elision pass (ne/le/la/de
before a vowel) before capitalization.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .errors import SchemaError, UnresolvedLexemeError
from .lexicon import Lexicon
from .systems import FeatureBundle, NON_CLAUSAL, UnitContext
from .task_model import (
    ActionSpec,
    CONSTRAINT,
    InterfaceObject,
    StateSpec,
    TaskElement,
)

# French definite article gender for interface objects, by object kind;
# menu items are proper names and take no article
_OBJECT_GENDER = {
    "window": "f",
    "dialog": "f",
    "button": "m",
    "document": "m",
    "other": "m",
}

_VOWELS = "aàâäeéèêëiîïoôöuùûüyAÀÂÄEÉÈÊËIÎÏOÔÖUÙÛÜY"
_ELISION_RE = re.compile(r"\b(ne|de|le|la)\s+(?=[" + _VOWELS + r"])")
_ELIDED = {"ne": "n'", "de": "d'", "le": "l'", "la": "l'"}

_CONJ_ADVERBS = {
    "fr": {"temporal": "ensuite,", "alternative": "ou bien,"},
    "en": {"temporal": "next,", "alternative": "alternatively,"},
}


@dataclass(frozen=True)
class TemplateRule:
    kind: str
    lang: str
    when: dict[str, object]
    pattern: tuple[dict, ...]


class RuleSet:
    def __init__(self, rules: list[TemplateRule]):
        self.rules = tuple(rules)
        # totality: every (kind, lang) that has rules must end in a catch-all
        seen: dict[tuple[str, str], bool] = {}
        for rule in self.rules:
            key = (rule.kind, rule.lang)
            seen[key] = seen.get(key, False) or not rule.when
        for key, has_catch_all in seen.items():
            if not has_catch_all:
                raise SchemaError(f"no catch-all rule for {key}")

    def match(self, kind: str, lang: str, bundle: FeatureBundle) -> TemplateRule | None:
        for rule in self.rules:
            if rule.kind != kind or rule.lang != lang:
                continue
            if _conditions_hold(rule.when, bundle):
                return rule
        return None


def _conditions_hold(when: dict, bundle: FeatureBundle) -> bool:
    for key, expected in when.items():
        if key == "_clausal":
            if bundle.context.clausal != bool(expected):
                return False
        elif key == "_finite":
            if bundle.context.finite != bool(expected):
                return False
        elif bundle.selections.get(key) != expected:
            return False
    return True


def load_rules(text: str) -> RuleSet:
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise SchemaError("rules file must be a JSON array")
    rules = []
    for item in raw:
        try:
            rules.append(
                TemplateRule(
                    kind=item["kind"],
                    lang=item["lang"],
                    when=dict(item.get("when", {})),
                    pattern=tuple(item["pattern"]),
                )
            )
        except KeyError as exc:
            raise SchemaError(f"rule missing field {exc}") from None
    return RuleSet(rules)


def default_rules() -> RuleSet:
    text = resources.files("genretext").joinpath("data/rules.json").read_text("utf-8")
    return load_rules(text)


def _np(ref, lang: str, lexicon: Lexicon) -> str:
    """Noun phrase for a patient/carrier reference.

    Interface objects are identifiable and take the definite article in
    French (menu items stay bare names); lexeme references are indefinite.
    English noun phrases are stored with their article frozen in.
    """
    if isinstance(ref, InterfaceObject):
        name = ref.name_fr if lang == "fr" else ref.name_en
        if ref.kind == "menu-item":
            return name
        if lang == "fr":
            article = "le" if _OBJECT_GENDER[ref.kind] == "m" else "la"
            return f"{article} {name}"
        return f"the {name}"
    entry = lexicon.get(ref)
    if lang == "fr":
        noun = entry.form("fr", "nominalisation")
        if entry.article_gender_fr is None:
            return noun
        article = "un" if entry.article_gender_fr == "m" else "une"
        return f"{article} {noun}"
    return entry.form("en", "nominalisation")


def _head_entry(element: TaskElement, lexicon: Lexicon):
    payload = element.payload
    if isinstance(payload, ActionSpec):
        return lexicon.get(payload.verb)
    return lexicon.get(payload.predicate)


def _wrap_negation_fr(fragment: str, style: str) -> str:
    if style == "wrap":
        head, _, rest = fragment.partition(" ")
        out = f"ne {head} pas"
        return f"{out} {rest}" if rest else out
    if style == "pre":
        return f"ne pas {fragment}"
    raise SchemaError(f"unknown French negation style {style!r}")


def _render_slot(
    slot: dict,
    element: TaskElement,
    bundle: FeatureBundle,
    lang: str,
    lexicon: Lexicon,
) -> str:
    if "lit" in slot:
        return slot["lit"]
    if "adv" in slot:
        conj = bundle.selections.get("conjunction-type")
        return _CONJ_ADVERBS[lang].get(conj, "")
    if "form" in slot:
        entry = _head_entry(element, lexicon)
        fragment = entry.form(lang, slot["form"])
        neg = slot.get("neg")
        if neg and bundle.selections.get("polarity") == "negative":
            if lang == "fr":
                fragment = _wrap_negation_fr(fragment, neg)
            else:
                fragment = f"not {fragment}"
        return fragment
    if "patient" in slot:
        payload = element.payload
        if not isinstance(payload, ActionSpec) or payload.patient is None:
            return ""
        return _np(payload.patient, lang, lexicon)
    if "carrier" in slot:
        payload = element.payload
        if not isinstance(payload, StateSpec):
            return ""
        return _np(payload.carrier, lang, lexicon)
    if "mods" in slot:
        payload = element.payload
        mods = payload.modifiers if isinstance(payload, ActionSpec) else ()
        return " ".join(
            lexicon.get(m).form(lang, "nominalisation") for m in mods
        )
    if "nom" in slot:
        entry = _head_entry(element, lexicon)
        noun = entry.form(lang, "nominalisation")
        if slot["nom"] == "def" and lang == "fr":
            article = "le" if entry.article_gender_fr == "m" else "la"
            return f"{article} {noun}"
        return noun
    raise SchemaError(f"unknown pattern slot {slot!r}")


def _capitalize(text: str) -> str:
    for i, ch in enumerate(text):
        if ch.isalpha():
            return text[:i] + ch.upper() + text[i + 1 :]
    return text


def _lower_first(text: str) -> str:
    for i, ch in enumerate(text):
        if ch.isalpha():
            return text[:i] + ch.lower() + text[i + 1 :]
    return text


def _assemble(fragments: list[str], lang: str) -> str:
    text = " ".join(f for f in fragments if f)
    text = re.sub(r"\s+", " ", text).strip()
    if lang == "fr":
        text = _ELISION_RE.sub(lambda m: _ELIDED[m.group(1)], text)
    return _capitalize(text)


def realize_unit(
    element: TaskElement,
    bundle: FeatureBundle,
    lang: str,
    lexicon: Lexicon,
    rules: RuleSet,
) -> str:
    """Render one task element under a completed bundle to a surface string."""
    rule = rules.match(element.kind, lang, bundle)
    assert rule is not None, (
        f"no template for kind={element.kind!r} lang={lang!r}; "
        "the rule set must end in a catch-all per kind"
    )
    fragments = [
        _render_slot(slot, element, bundle, lang, lexicon) for slot in rule.pattern
    ]
    return _assemble(fragments, lang)


def purpose_clause(goal: TaskElement, lang: str, lexicon: Lexicon, rules: RuleSet) -> str:
    """The goal rendered as a purpose clause ("Pour <infinitive> ...")."""
    bundle = FeatureBundle(
        {
            "modal-system": "non-modal",
            "polarity": "positive",
            "conjunction-type": "purpose",
        },
        UnitContext(finite=False, clausal=True),
    )
    return realize_unit(goal, bundle, lang, lexicon, rules)


def realize_document(plan, bundles, lang: str, lexicon: Lexicon, rules: RuleSet) -> str:
    """Render a staged document plan with one bundle per stage.

    Heading stages become "## "-prefixed nominalisation lines followed by a
    blank line; a purpose-goal hint prepends "Pour <infinitive>, " to its
    substep; constraint stages attach as conditional clauses to the stage
    that follows them.
    """
    stages = plan.stages
    if len(bundles) != len(stages):
        raise ValueError("one bundle per stage required")
    lines: list[str] = []
    pending_conditional: str | None = None
    for stage, bundle in zip(stages, bundles):
        text = realize_unit(stage.element, bundle, lang, lexicon, rules)
        if stage.as_heading:
            lines.append(f"## {text}")
            lines.append("")
            continue
        if stage.attach_purpose_goal is not None:
            lead = purpose_clause(stage.attach_purpose_goal, lang, lexicon, rules)
            text = f"{lead}, {_lower_first(text)}"
        if pending_conditional is not None:
            text = f"{pending_conditional}, {_lower_first(text)}"
            pending_conditional = None
        if stage.element.kind == CONSTRAINT:
            pending_conditional = text
            continue
        lines.append(text)
    if pending_conditional is not None:
        lines.append(pending_conditional)
    return "\n".join(lines)


def heading_bundle() -> FeatureBundle:
    """Bundle for a non-clausal heading stage: no systems apply."""
    return FeatureBundle({}, NON_CLAUSAL)
