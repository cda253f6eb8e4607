"""Coded corpora: ordered units carrying genre, element kind, text and coding."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SchemaError
from .systems import FeatureBundle, SystemNetwork, UnitContext, validate_bundle

_UNIT_FIELDS = {"id", "genre", "element", "lang", "text", "bundle", "context"}


@dataclass(frozen=True)
class CodedUnit:
    id: str
    genre: str
    element: str
    lang: str
    text: str
    bundle: FeatureBundle

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "genre": self.genre,
            "element": self.element,
            "lang": self.lang,
            "text": self.text,
            "bundle": dict(self.bundle.selections),
            "context": self.bundle.context.as_dict(),
        }


@dataclass
class CodedCorpus:
    units: list[CodedUnit] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def filter(self, genre: str | None = None, element: str | None = None) -> "CodedCorpus":
        units = [
            u
            for u in self.units
            if (genre is None or u.genre == genre)
            and (element is None or u.element == element)
        ]
        return CodedCorpus(units, dict(self.metadata))

    def genres(self) -> list[str]:
        seen = []
        for u in self.units:
            if u.genre not in seen:
                seen.append(u.genre)
        return seen


def dump_corpus(corpus: CodedCorpus) -> str:
    """JSON Lines rendering; a leading meta line carries corpus metadata."""
    lines = []
    if corpus.metadata:
        lines.append(json.dumps({"meta": corpus.metadata}, ensure_ascii=False, sort_keys=True))
    for unit in corpus.units:
        lines.append(json.dumps(unit.to_json(), ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + "\n"


def load_corpus(text: str) -> CodedCorpus:
    corpus = CodedCorpus()
    ids = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        raw = json.loads(line)
        if "meta" in raw and "id" not in raw:
            corpus.metadata = raw["meta"]
            continue
        extra = set(raw) - _UNIT_FIELDS
        if extra:
            raise SchemaError(f"line {lineno}: unexpected unit field(s) {sorted(extra)}")
        missing = _UNIT_FIELDS - set(raw)
        if missing:
            raise SchemaError(f"line {lineno}: missing unit field(s) {sorted(missing)}")
        ctx_raw = raw["context"]
        if not isinstance(ctx_raw, dict) or not {"finite", "clausal"} <= set(ctx_raw):
            raise SchemaError(f"line {lineno}: context needs 'finite' and 'clausal' flags")
        context = UnitContext(finite=bool(ctx_raw["finite"]), clausal=bool(ctx_raw["clausal"]))
        unit = CodedUnit(
            id=raw["id"],
            genre=raw["genre"],
            element=raw["element"],
            lang=raw["lang"],
            text=raw["text"],
            bundle=FeatureBundle(dict(raw["bundle"]), context),
        )
        if unit.id in ids:
            raise SchemaError(f"line {lineno}: duplicate unit id {unit.id!r}")
        ids.add(unit.id)
        corpus.units.append(unit)
    return corpus


def validate_corpus(corpus: CodedCorpus, network: SystemNetwork) -> list[dict]:
    """Bundle violations per unit, as data records."""
    records = []
    for unit in corpus.units:
        for v in validate_bundle(network, unit.bundle):
            records.append({"unit": unit.id, "system": v.system, "message": v.message})
    return records
