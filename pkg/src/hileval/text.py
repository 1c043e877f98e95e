"""Deterministic tokenization, sentence splitting and n-gram extraction.

Every other module works on :class:`TokenizedText` values produced here, so
scores are reproducible as long as the same :class:`TokenizerConfig` is used.
Tokens keep character offsets into the raw text, which lets interfaces render
the original string while all bookkeeping happens at the token level.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

__all__ = [
    "Token",
    "TokenizedText",
    "TokenizerConfig",
    "Ngram",
    "tokenize",
    "extract_ngrams",
    "ngram_counts",
    "clipped_count",
]

# An n-gram is the tuple of its token surfaces; its order is len(gram).
Ngram = tuple[str, ...]

_SENTENCE_TERMINALS = {".", "?", "!"}


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class TokenizerConfig:
    """Normalization switches; the default is the simplest deterministic scheme.

    ``lowercase`` folds case during normalization.  ``count_punctuation``
    does not affect tokenization itself but is carried along so highlight
    budgets know whether punctuation tokens count (see highlights module).
    """

    lowercase: bool = True
    count_punctuation: bool = True

    def normalize(self, text: str) -> str:
        return text.lower() if self.lowercase else text

    def to_dict(self) -> dict:
        return {"lowercase": self.lowercase, "count_punctuation": self.count_punctuation}

    @classmethod
    def from_dict(cls, data: dict) -> "TokenizerConfig":
        return cls(
            lowercase=bool(data.get("lowercase", True)),
            count_punctuation=bool(data.get("count_punctuation", True)),
        )


@dataclass(frozen=True)
class Token:
    """One token: normalized surface plus [char_start, char_end) into the raw text."""

    surface: str
    char_start: int
    char_end: int

    @property
    def is_punctuation(self) -> bool:
        return all(_is_punct(ch) for ch in self.surface)


@dataclass(frozen=True)
class TokenizedText:
    """Raw text with its token sequence and sentence bounds.

    ``sentence_bounds`` is a list of token-index ranges [start, end) that
    partitions the token list; it is empty only for empty input.
    """

    raw: str
    tokens: tuple[Token, ...]
    sentence_bounds: tuple[tuple[int, int], ...]
    config: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __len__(self) -> int:
        return len(self.tokens)

    @cached_property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def sentence_tokens(self, index: int) -> tuple[Token, ...]:
        start, end = self.sentence_bounds[index]
        return self.tokens[start:end]

    def sentence_text(self, index: int) -> str:
        """Raw substring spanned by one sentence's tokens."""
        start, end = self.sentence_bounds[index]
        return self.raw[self.tokens[start].char_start : self.tokens[end - 1].char_end]


def tokenize(raw: str, config: TokenizerConfig | None = None) -> TokenizedText:
    """Tokenize ``raw`` deterministically.

    Splits on whitespace, detaches leading/trailing punctuation characters as
    their own tokens, and closes a sentence at ``. ? !`` tokens followed by
    whitespace or end of text.  Empty input yields zero tokens and zero
    sentences.
    """
    config = config or TokenizerConfig()
    tokens: list[Token] = []

    i = 0
    n = len(raw)
    while i < n:
        if raw[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not raw[j].isspace():
            j += 1
        tokens.extend(_split_chunk(raw, i, j, config))
        i = j

    bounds: list[tuple[int, int]] = []
    sent_start = 0
    for idx, tok in enumerate(tokens):
        at_end = tok.char_end >= n or raw[tok.char_end].isspace()
        if tok.surface in _SENTENCE_TERMINALS and at_end:
            bounds.append((sent_start, idx + 1))
            sent_start = idx + 1
    if sent_start < len(tokens):
        bounds.append((sent_start, len(tokens)))

    return TokenizedText(raw=raw, tokens=tuple(tokens), sentence_bounds=tuple(bounds), config=config)


def _split_chunk(raw: str, start: int, end: int, config: TokenizerConfig) -> list[Token]:
    """Split one whitespace-free chunk into leading punct, core, trailing punct."""
    head = start
    while head < end and _is_punct(raw[head]):
        head += 1
    tail = end
    while tail > head and _is_punct(raw[tail - 1]):
        tail -= 1

    pieces: list[tuple[int, int]] = []
    pieces.extend((k, k + 1) for k in range(start, head))
    if head < tail:
        pieces.append((head, tail))
    pieces.extend((k, k + 1) for k in range(tail, end))
    return [Token(config.normalize(raw[a:b]), a, b) for a, b in pieces]


def extract_ngrams(text: TokenizedText, n: int) -> list[tuple[Ngram, int]]:
    """Every contiguous window of ``n`` tokens with its start index.

    Windows may cross sentence bounds; they never cross the document end,
    so the result has max(0, m - n + 1) entries.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    surfaces = text.surfaces
    return [(surfaces[i : i + n], i) for i in range(len(surfaces) - n + 1)]


def ngram_counts(text: TokenizedText, n: int) -> Mapping[Ngram, int]:
    """Occurrence count per distinct n-gram.

    The result is cached on the (immutable) text and returned as a read-only
    view, so repeated scoring against the same document costs one pass.
    """
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    cache = text.__dict__.setdefault("_ngram_count_cache", {})
    counts = cache.get(n)
    if counts is None:
        surfaces = text.surfaces
        raw: dict[Ngram, int] = {}
        for i in range(len(surfaces) - n + 1):
            gram = surfaces[i : i + n]
            raw[gram] = raw.get(gram, 0) + 1
        counts = cache[n] = MappingProxyType(raw)
    return counts


def clipped_count(gram: Ngram, a: TokenizedText, b: TokenizedText) -> int:
    """min of the occurrence counts of ``gram`` in the two texts.

    Symmetric, and never exceeds either individual count; the count of a
    gram against the text itself is just its plain count.
    """
    n = len(gram)
    if n < 1:
        raise ValueError("empty n-gram")
    return min(_count_in(gram, a), _count_in(gram, b))


def _count_in(gram: Ngram, text: TokenizedText) -> int:
    n = len(gram)
    surfaces = text.surfaces
    return sum(1 for i in range(len(surfaces) - n + 1) if surfaces[i : i + n] == gram)
