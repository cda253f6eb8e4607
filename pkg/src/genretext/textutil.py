"""Tokenization shared by the concordancer and the surface recoder.

Splits on whitespace and punctuation but keeps intra-word hyphens and
apostrophes, so "presse-papiers" and "l'article" survive as single tokens.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"\w+(?:[-'’]\w+)*", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)
