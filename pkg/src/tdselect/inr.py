"""Infrequent n-gram recovery scoring.

A sentence is scored by how much headroom its seed n-grams still have
under a frequency threshold: each distinct seed n-gram type in the
sentence contributes ``max(0, threshold - counts[g])``. Once a feature's
count reaches the threshold it is "frequent" and contributes nothing, so
very common n-grams (stop words and the like) stop driving selection on
their own. Counts may be pre-seeded from an in-domain initialization
corpus, so already well-covered n-grams start saturated.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .corpus import Ngram, TokenizedSentence, seed_matches
from .engine import Scorer, SelectionState


@dataclass(frozen=True)
class InrConfig:
    threshold: int
    init_set_path: str | None = None

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError(f"threshold must be >= 1, got {self.threshold}")


class InrScorer(Scorer):
    """Per-type threshold-headroom scoring."""

    def __init__(self, config: InrConfig):
        self.config = config

    def score_matches(self, matches, length, counts):
        t = self.config.threshold
        total = 0
        for g in matches:
            gap = t - counts[g]
            if gap > 0:
                total += gap
        return float(total)

    def score_indexed(self, fids, mults, length, counts):
        t = self.config.threshold
        total = 0
        for fid in fids:
            gap = t - counts[fid]
            if gap > 0:
                total += gap
        return float(total)


def inr_score(
    sentence: TokenizedSentence, state: SelectionState, cfg: InrConfig
) -> float:
    """Threshold-headroom score of one sentence under the current counts.

    Repeating a seed n-gram inside the sentence does not raise the score:
    the sum ranges over distinct types. The seed inventory is the key set
    of ``state.counts``.
    """
    matches = seed_matches(sentence.tokens, state.counts, state.max_order)
    return InrScorer(cfg).score_matches(matches, sentence.length, state.counts)


def init_counts_from_corpus(
    s_i: Iterable[TokenizedSentence], seed_features: Iterable[Ngram]
) -> dict[Ngram, int]:
    """Occurrence counts of every seed feature across an initialization
    corpus; features absent from the corpus map to 0."""
    features = set(seed_features)
    counts = dict.fromkeys(features, 0)
    max_order = max(map(len, features), default=0)
    for sent in s_i:
        for g, mult in seed_matches(sent.tokens, features, max_order).items():
            counts[g] += mult
    return counts
