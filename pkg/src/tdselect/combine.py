"""Alpha-proportional combination of two rankings.

Two selection runs over the same candidate corpus - one seeded with the
test text itself, one with its approximated translation - are merged by
concatenating the top ``floor(N * alpha)`` entries of the first with the
top ``N - floor(N * alpha)`` of the second. The same sentence can surface
through both seeds, so by default duplicates keep their first occurrence
and the output is topped back up from the unused tails (first ranking's
tail first); ``dedup=False`` keeps the literal concatenation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import RankedSelection, SelectionEntry


@dataclass(frozen=True)
class CombineSpec:
    alpha: float
    total_n: int
    dedup: bool = True

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.total_n < 1:
            raise ValueError(f"total_n must be >= 1, got {self.total_n}")


def source_share(total_n: int, alpha: float) -> int:
    """floor(N * alpha), guarded against float representation error so
    that e.g. 100 * 0.29 lands on 29, not 28."""
    return min(total_n, math.floor(total_n * alpha + 1e-9))


def combine_rankings(
    ta_src: RankedSelection, ta_trg: RankedSelection, spec: CombineSpec
) -> RankedSelection:
    """Merge two rankings into one of (at most) ``spec.total_n`` entries.

    Entries keep the score they had in the ranking they came from and are
    renumbered 1..k. If one input is shorter than its share, or dedup
    removes duplicates, the output is backfilled from the unused tail of
    ta_src, then ta_trg; it falls short of total_n only when the inputs
    run out of distinct ids.
    """
    n = spec.total_n
    k_src = source_share(n, spec.alpha)
    k_trg = n - k_src

    src_entries = ta_src.entries
    trg_entries = ta_trg.entries
    stream = (
        src_entries[:k_src]
        + trg_entries[:k_trg]
        + src_entries[k_src:]
        + trg_entries[k_trg:]
    )

    picked: list[SelectionEntry] = []
    seen: set[int] = set()
    for entry in stream:
        if len(picked) >= n:
            break
        if spec.dedup:
            if entry.sentence_id in seen:
                continue
            seen.add(entry.sentence_id)
        picked.append(entry)

    entries = [
        SelectionEntry(step, e.sentence_id, e.score)
        for step, e in enumerate(picked, start=1)
    ]
    return RankedSelection(entries=entries, seed_kind="combined")
