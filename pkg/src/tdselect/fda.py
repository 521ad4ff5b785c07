"""Feature-decay scoring.

A sentence is scored by summing, over every occurrence of a seed n-gram
it contains, a contribution that decays exponentially with how often that
n-gram has already been acquired by the selected pool: each occurrence of
``g`` is worth ``decay_base ** counts[g]``. The sum is divided by the
sentence length unless normalization is disabled, so long sentences do
not win on bulk alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import TokenizedSentence, seed_matches
from .engine import Scorer, SelectionState


@dataclass(frozen=True)
class FdaConfig:
    decay_base: float = 0.5
    length_normalize: bool = True

    def __post_init__(self):
        if not 0.0 < self.decay_base < 1.0:
            raise ValueError(
                f"decay_base must be strictly between 0 and 1, got {self.decay_base}"
            )


class FdaScorer(Scorer):
    """Per-occurrence decayed n-gram scoring, optionally length-normalized."""

    def __init__(self, config: FdaConfig | None = None):
        self.config = config or FdaConfig()

    def score_matches(self, matches, length, counts):
        if length <= 0:
            return 0.0
        base = self.config.decay_base
        total = 0.0
        for g, mult in matches.items():
            total += mult * base ** counts[g]
        return total / length if self.config.length_normalize else total

    def score_indexed(self, fids, mults, length, counts):
        if length <= 0:
            return 0.0
        base = self.config.decay_base
        total = 0.0
        for fid, mult in zip(fids, mults):
            total += mult * base ** counts[fid]
        return total / length if self.config.length_normalize else total


def fda_score(
    sentence: TokenizedSentence,
    state: SelectionState,
    cfg: FdaConfig | None = None,
) -> float:
    """Feature-decay score of one sentence under the current counts.

    Zero-length sentences score 0 by fiat (no division by zero). The
    seed inventory is the key set of ``state.counts``.
    """
    if sentence.length == 0:
        return 0.0
    matches = seed_matches(sentence.tokens, state.counts, state.max_order)
    return FdaScorer(cfg).score_matches(matches, sentence.length, state.counts)
