"""Recover a partial feature bundle from a generated surface string.

This is the verification side of the pipeline: it works from surface marker
patterns and the closed lexicon's form index, independently of the template
rules, and leaves any dimension it cannot see unselected.
"""

from __future__ import annotations

import re

from .errors import UnresolvedLexemeError
from .lexicon import Lexicon
from .systems import (
    FeatureBundle,
    FINITE_CLAUSE,
    NON_CLAUSAL,
    NON_FINITE_CLAUSE,
)
from .textutil import tokenize

# French clitic elisions expanded before tokenizing so particles match
_FR_ELISION_RE = re.compile(r"\b([nNdDlL])['’](?=\w)")

# aux token -> (modal-subtype, modal-voice, agency); None = not recoverable here
_FR_MODALS = {
    "faut": ("obligation", "impersonal", "impersonal-on"),
    "pouvez": ("possibility", "personal", "reader-direct"),
    "devez": ("obligation", "personal", "reader-direct"),
    "peut": ("possibility", "impersonal", None),
    "peuvent": ("possibility", "impersonal", None),
}
# English "you must" also glosses impersonal obligation, so voice and agency
# stay unset for "must"
_EN_MODALS = {"can": "possibility", "cannot": "possibility", "must": "obligation", "may": "possibility"}

_FR_IMPLICIT_NEG = {"sans", "jamais", "aucun", "aucune"}
_EN_IMPLICIT_NEG = {"without", "never"}

_FR_ARTICLES = ("le", "la", "les", "un", "une")


def _normalize_fr(text: str) -> str:
    return _FR_ELISION_RE.sub(lambda m: m.group(1) + "e ", text)


class _Recoder:
    def __init__(self, text: str, lang: str, lexicon: Lexicon):
        self.lang = lang
        self.lexicon = lexicon
        self.index = lexicon.form_index(lang)
        raw = _normalize_fr(text) if lang == "fr" else text
        self.tokens = [t.lower() for t in tokenize(raw)]
        self.sel: dict[str, str] = {}
        self.head = None  # lexical entry of the main process, once found

    def slots_of(self, token: str) -> set[str]:
        return {slot for _, slot in self.index.get(token, ())}

    def entry_of(self, token: str, slot: str):
        for lemma, s in self.index.get(token, ()):
            if s == slot:
                return self.lexicon.get(lemma)
        return None

    def match_nominal(self, pos: int) -> int | None:
        """End position of the longest known nominal starting at pos, if any.

        French articles before the noun are skipped; English noun phrases
        carry their article inside the stored form.
        """
        toks = self.tokens
        start = pos
        if (
            self.lang == "fr"
            and start < len(toks)
            and toks[start] in _FR_ARTICLES
        ):
            start = pos + 1
        best = None
        for entry in self.lexicon.entries.values():
            forms = entry.fr if self.lang == "fr" else entry.en
            noun = forms.get("nominalisation", "")
            if not noun:
                continue
            noun_toks = [t.lower() for t in tokenize(noun)]
            if not noun_toks:
                continue
            for anchor in (pos, start):
                if toks[anchor : anchor + len(noun_toks)] == noun_toks:
                    end = anchor + len(noun_toks)
                    if best is None or end > best:
                        best = end
                    break
        return best

    def set(self, system: str, feature: str) -> None:
        self.sel[system] = feature

    def finish_clausal(self, finite: bool) -> FeatureBundle:
        toks = self.tokens
        negation = None
        if self.lang == "fr":
            if "ne" in toks and "pas" in toks:
                negation = "true-negative"
            elif set(toks) & _FR_IMPLICIT_NEG:
                negation = "implicit-negative"
        else:
            if "not" in toks or "cannot" in toks:
                negation = "true-negative"
            elif set(toks) & _EN_IMPLICIT_NEG:
                negation = "implicit-negative"
        if negation:
            self.set("polarity", "negative")
            self.set("negation-kind", negation)
        else:
            self.set("polarity", "positive")
        self.sel.setdefault("modal-system", "non-modal")
        self.sel.setdefault("conjunction-type", "none")
        dep = (
            "dependent"
            if self.sel["conjunction-type"] in ("purpose", "conditional")
            else "independent"
        )
        self.set("clause-dependency", dep)
        self.set("voice", "active")
        if self.head is not None and self.head.process_type is not None:
            self.set("process-type", self.head.process_type)
        context = FINITE_CLAUSE if finite else NON_FINITE_CLAUSE
        return FeatureBundle(self.sel, context)

    def find_modal(self) -> tuple[str, int] | None:
        table = _FR_MODALS if self.lang == "fr" else _EN_MODALS
        for i, tok in enumerate(self.tokens):
            if tok in table:
                return tok, i
        return None

    def head_from(self, pos: int, slots: tuple[str, ...]) -> None:
        toks = self.tokens
        for j in range(pos, len(toks)):
            tok = toks[j]
            # English dummy auxiliary, not a head verb
            if tok in ("do", "does") and toks[j + 1 : j + 2] == ["not"]:
                continue
            for slot in slots:
                entry = self.entry_of(tok, slot)
                if entry is not None and entry.process_type is not None:
                    self.head = entry
                    return


def recode_surface(text: str, lang: str, lexicon: Lexicon) -> FeatureBundle:
    """Recode one unit string; unrecognized dimensions stay unselected."""
    r = _Recoder(text, lang, lexicon)
    toks = r.tokens
    if not toks:
        return FeatureBundle({}, NON_CLAUSAL)

    i = 0
    if lang == "fr":
        if toks[0] == "ensuite":
            r.set("conjunction-type", "temporal")
            i = 1
        elif toks[:2] == ["ou", "bien"]:
            r.set("conjunction-type", "alternative")
            i = 2
    else:
        if toks[0] in ("next", "then"):
            r.set("conjunction-type", "temporal")
            i = 1
        elif toks[0] in ("alternatively", "or"):
            r.set("conjunction-type", "alternative")
            i = 1

    inf_slot = "infinitive" if lang == "fr" else "base"
    imp_slot = "imperative_vous" if lang == "fr" else "base"

    # purpose clause: non-finite, mood inapplicable
    if toks[i : i + 1] == (["pour"] if lang == "fr" else ["to"]):
        r.set("conjunction-type", "purpose")
        r.head_from(i + 1, (inf_slot,))
        return r.finish_clausal(finite=False)

    # conditional clause
    if toks[i : i + 1] == (["si"] if lang == "fr" else ["if"]):
        r.set("conjunction-type", "conditional")
        if toks[i + 1 : i + 2] == (["vous"] if lang == "fr" else ["you"]):
            r.set("agency", "reader-direct")
        r.set("mood-system", "declarative")
        r.head_from(i + 1, (imp_slot, "present_3sg"))
        return r.finish_clausal(finite=True)

    # enabling frame: the scaffolding verb is skipped, the head is the infinitive
    if lang == "fr" and toks[i : i + 2] == ["cet", "article"]:
        r.set("agency", "system-agent")
        r.set("mood-system", "declarative")
        r.head_from(i + 2, (inf_slot,))
        return r.finish_clausal(finite=True)
    if lang == "en" and toks[i : i + 2] == ["this", "command"]:
        r.set("agency", "system-agent")
        r.set("mood-system", "declarative")
        if "to" in toks[i:]:
            r.head_from(toks.index("to", i) + 1, (inf_slot,))
        return r.finish_clausal(finite=True)

    modal_hit = r.find_modal()
    if modal_hit is not None:
        aux, pos = modal_hit
        r.set("modal-system", "modal")
        r.set("mood-system", "declarative")
        if lang == "fr":
            subtype, voice, agency = _FR_MODALS[aux]
            r.set("modal-subtype", subtype)
            r.set("modal-voice", voice)
            if agency is not None:
                r.set("agency", agency)
            elif toks[i : i + 1] == ["on"]:
                r.set("agency", "impersonal-on")
            elif r.match_nominal(i) is not None:
                r.set("agency", "system-agent")
        else:
            r.set("modal-subtype", _EN_MODALS[aux])
            if aux in ("can", "cannot"):
                if toks[i : i + 1] == ["you"]:
                    r.set("modal-voice", "personal")
                    r.set("agency", "reader-direct")
                elif toks[i : i + 1] == ["one"]:
                    r.set("modal-voice", "impersonal")
                    r.set("agency", "impersonal-on")
            elif aux == "may":
                r.set("modal-voice", "impersonal")
                if r.match_nominal(i) is not None:
                    r.set("agency", "system-agent")
        r.head_from(pos + 1, (inf_slot,))
        return r.finish_clausal(finite=True)

    # impersonal-on declarative
    if toks[i : i + 1] == (["on"] if lang == "fr" else ["one"]):
        r.set("agency", "impersonal-on")
        r.set("mood-system", "declarative")
        r.head_from(i + 1, ("present_3sg", inf_slot))
        return r.finish_clausal(finite=True)

    # reader-addressed declarative
    if toks[i : i + 1] == (["vous"] if lang == "fr" else ["you"]):
        r.set("agency", "reader-direct")
        r.set("mood-system", "declarative")
        r.head_from(i + 1, ("present_3sg", imp_slot, inf_slot))
        return r.finish_clausal(finite=True)

    # negative imperative: "Ne fermez pas ..." / "Do not close ..."
    if lang == "fr" and toks[i : i + 1] == ["ne"] and i + 1 < len(toks):
        entry = r.entry_of(toks[i + 1], imp_slot)
        if entry is not None and entry.process_type is not None:
            r.set("mood-system", "imperative")
            r.set("agency", "reader-direct")
            r.head = entry
            return r.finish_clausal(finite=True)
    if lang == "en" and toks[i : i + 2] == ["do", "not"]:
        r.set("mood-system", "imperative")
        r.set("agency", "reader-direct")
        r.head_from(i + 2, ("base",))
        return r.finish_clausal(finite=True)

    # bare imperative: unit-initial imperative form
    if i < len(toks):
        entry = r.entry_of(toks[i], imp_slot)
        if entry is not None and entry.process_type is not None:
            r.set("mood-system", "imperative")
            r.set("agency", "reader-direct")
            r.head = entry
            return r.finish_clausal(finite=True)

    # subject noun phrase + third person verb (system as agent)
    end = r.match_nominal(i)
    if end is not None:
        r.head_from(end, ("present_3sg", inf_slot))
        if r.head is not None or "does" in toks[end:]:
            r.set("agency", "system-agent")
            r.set("mood-system", "declarative")
            return r.finish_clausal(finite=True)
        # nominal with no verb after it: a heading, nothing grammatical applies
        return FeatureBundle({}, NON_CLAUSAL)

    if any("nominalisation" in r.slots_of(t) for t in toks):
        return FeatureBundle({}, NON_CLAUSAL)

    raise UnresolvedLexemeError(f"no lexical material recognized in {text!r}")
