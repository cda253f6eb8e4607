"""Closed bilingual lexicon with explicitly stored inflected forms.

The sublanguage is small enough that every form a template needs is stored
per entry; there is no morphology engine. Nominal entries keep their noun
phrase in the nominalisation slot (French bare, English with its article
frozen in) and carry a French gender for article agreement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .errors import SchemaError, UnresolvedLexemeError

FR_SLOTS = ("infinitive", "imperative_vous", "present_3sg", "nominalisation")
EN_SLOTS = ("base", "present_3sg", "gerund", "nominalisation")


@dataclass(frozen=True)
class LexicalEntry:
    lemma: str
    process_type: str | None          # None for nominal/modifier entries
    fr: dict[str, str]
    en: dict[str, str]
    article_gender_fr: str | None = None   # "m" | "f" for nominals
    causative: bool = False

    def form(self, lang: str, slot: str) -> str:
        forms = self.fr if lang == "fr" else self.en
        value = forms.get(slot, "")
        if not value:
            raise UnresolvedLexemeError(
                f"entry {self.lemma!r} has no {lang} form for slot {slot!r}"
            )
        return value


class Lexicon:
    def __init__(self, entries: list[LexicalEntry]):
        self.entries: dict[str, LexicalEntry] = {}
        for e in entries:
            if e.lemma in self.entries:
                raise SchemaError(f"duplicate lexical entry {e.lemma!r}")
            self.entries[e.lemma] = e
        self._form_index: dict[str, dict[str, list[tuple[str, str]]]] = {}

    def has(self, lemma: str) -> bool:
        return lemma in self.entries

    def get(self, lemma: str) -> LexicalEntry:
        try:
            return self.entries[lemma]
        except KeyError:
            raise UnresolvedLexemeError(f"unknown lexeme {lemma!r}") from None

    def verbs(self) -> list[LexicalEntry]:
        return [e for e in self.entries.values() if e.process_type is not None]

    def form_index(self, lang: str) -> dict[str, list[tuple[str, str]]]:
        """Map lowercased surface form -> [(lemma, slot), ...] for recoding."""
        if lang not in self._form_index:
            index: dict[str, list[tuple[str, str]]] = {}
            slots = FR_SLOTS if lang == "fr" else EN_SLOTS
            for e in self.entries.values():
                forms = e.fr if lang == "fr" else e.en
                for slot in slots:
                    value = forms.get(slot, "")
                    if value:
                        index.setdefault(value.lower(), []).append((e.lemma, slot))
            self._form_index[lang] = index
        return self._form_index[lang]


_ENTRY_FIELDS = {"lemma", "process_type", "fr", "en", "article_gender_fr", "causative"}


def load_lexicon(text: str) -> Lexicon:
    raw = json.loads(text)
    if not isinstance(raw, list):
        raise SchemaError("lexicon file must be a JSON array of entries")
    entries = []
    for item in raw:
        extra = set(item) - _ENTRY_FIELDS
        if extra:
            raise SchemaError(f"lexical entry {item.get('lemma')!r}: unexpected {sorted(extra)}")
        if "lemma" not in item or "fr" not in item or "en" not in item:
            raise SchemaError(f"lexical entry missing lemma/fr/en: {item!r}")
        gender = item.get("article_gender_fr")
        if gender not in (None, "m", "f"):
            raise SchemaError(f"entry {item['lemma']!r}: bad gender {gender!r}")
        entries.append(
            LexicalEntry(
                lemma=item["lemma"],
                process_type=item.get("process_type"),
                fr=dict(item["fr"]),
                en=dict(item["en"]),
                article_gender_fr=gender,
                causative=bool(item.get("causative", False)),
            )
        )
    return Lexicon(entries)


def default_lexicon() -> Lexicon:
    text = resources.files("genretext").joinpath("data/lexicon.json").read_text("utf-8")
    return load_lexicon(text)
