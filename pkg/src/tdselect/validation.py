"""Input coercion and validation helpers for the public API."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

from .corpus import TokenizedSentence, tokenize


def as_sentences(data: Iterable) -> list[TokenizedSentence]:
    """Coerce sentence-like input into a list of TokenizedSentence.

    Accepts an iterable of TokenizedSentence (ids must be unique and
    non-negative, and are kept), of strings (whitespace-tokenized), or of
    token sequences. Coerced items get dense 0-based ids in input order.
    """
    items = list(data)
    if items and isinstance(items[0], TokenizedSentence):
        ids = set()
        for s in items:
            if not isinstance(s, TokenizedSentence):
                raise TypeError(
                    "cannot mix TokenizedSentence with raw sentence inputs"
                )
            if s.id < 0:
                raise ValueError(f"sentence id must be non-negative, got {s.id}")
            if s.id in ids:
                raise ValueError(f"duplicate sentence id: {s.id}")
            ids.add(s.id)
        return items
    out = []
    for i, item in enumerate(items):
        if isinstance(item, str):
            out.append(TokenizedSentence(i, tokenize(item)))
        elif isinstance(item, Sequence):
            out.append(TokenizedSentence(i, tuple(str(t) for t in item)))
        else:
            raise TypeError(
                f"cannot interpret {type(item).__name__!r} as a sentence"
            )
    return out


def check_positive_int(name: str, value) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value


def check_unit_interval(name: str, value) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value
