"""Iterative greedy selection over an indexed candidate corpus.

One engine serves both scoring rules: repeatedly pick the highest-scoring
candidate, add it to the selected pool, fold its n-gram occurrences into
the running counts, and rescore. Because both scoring rules are
non-increasing in every count, any previously computed score is an upper
bound on the current one - which makes a lazy max-heap with stale-entry
revalidation safe. ``run_selection`` is that fast path;
``run_selection_eager`` is the transparent reference that rescores every
remaining candidate at every step, used to cross-check the lazy engine.
"""

from __future__ import annotations

import abc
import heapq
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .corpus import FeatureIndex, Ngram
from .errors import DataError

SEED_KINDS = ("source_seed", "approx_target_seed", "combined")


@dataclass
class SelectionState:
    """Mutable state of one selection run.

    ``counts`` has one entry per seed feature: the occurrence count
    accumulated from the initialization corpus plus every selected
    sentence. ``remaining`` holds the not-yet-selected candidates that
    could still score above zero (candidates sharing no n-gram with the
    seed score zero forever and are pruned up front).
    """

    counts: dict[Ngram, int]
    selected: list[int] = field(default_factory=list)
    remaining: set[int] = field(default_factory=set)
    max_order: int = 1


@dataclass(frozen=True)
class SelectionEntry:
    step: int
    sentence_id: int
    score: float


@dataclass
class RankedSelection:
    """Output of one selection run: sentence ids in selection order with
    the exact score each had at the step it was chosen.

    ``seed_kind`` records which seed drove the run: the test text itself
    (``source_seed``), its machine translation (``approx_target_seed``),
    or a ``combined`` merge of the two.
    """

    entries: list[SelectionEntry]
    seed_kind: str = "source_seed"

    def __post_init__(self):
        if self.seed_kind not in SEED_KINDS:
            raise ValueError(f"unknown seed_kind: {self.seed_kind!r}")

    def ids(self) -> list[int]:
        return [e.sentence_id for e in self.entries]

    def scores(self) -> list[float]:
        return [e.score for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class Scorer(abc.ABC):
    """Scoring capability shared by the selection engines.

    Implementations must be non-increasing in every count (monotone
    staleness): the lazy engine treats any cached score as an upper bound
    on the true current score.

    The two methods compute the same quantity from the two match
    representations the index offers; both must accumulate contributions
    in the index's scan order so they agree float-for-float.
    """

    @abc.abstractmethod
    def score_matches(
        self,
        matches: Mapping[Ngram, int],
        length: int,
        counts: Mapping[Ngram, int],
    ) -> float:
        """Score from a multiset of seed n-gram occurrences."""

    @abc.abstractmethod
    def score_indexed(
        self,
        fids: Sequence[int],
        mults: Sequence[int],
        length: int,
        counts: Sequence[int],
    ) -> float:
        """Score from the index's dense feature-id representation."""


def initial_state(
    index: FeatureIndex, init_counts: Mapping[Ngram, int] | None = None
) -> SelectionState:
    """Fresh state over an index: zero counts for every seed feature,
    overridden by ``init_counts`` where given (unknown features ignored -
    they can never contribute to any score)."""
    counts = dict.fromkeys(index.features, 0)
    if init_counts:
        for g, c in init_counts.items():
            if g in counts:
                counts[g] = c
    return SelectionState(
        counts=counts,
        selected=[],
        remaining=set(index.matched_ids()),
        max_order=index.max_order,
    )


def apply_selection(state: SelectionState, index: FeatureIndex, sentence_id: int) -> None:
    """Move a candidate into the selected pool and fold its n-gram
    occurrences into the counts."""
    for g, mult in index.matches_for(sentence_id).items():
        state.counts[g] += mult
    state.remaining.discard(sentence_id)
    state.selected.append(sentence_id)


def recompute_all_scores(
    index: FeatureIndex, scorer: Scorer, state: SelectionState
) -> dict[int, float]:
    """Exact score of every remaining candidate under the current state."""
    matches = index.materialize_matches()
    lengths = index.lengths
    counts = state.counts
    return {
        sid: scorer.score_matches(matches[sid], lengths[sid], counts)
        for sid in state.remaining
    }


def _check_budget(budget: int) -> None:
    if budget < 1:
        raise ValueError(f"selection budget must be >= 1, got {budget}")


def run_selection(
    index: FeatureIndex,
    scorer: Scorer,
    budget: int,
    init_counts: Mapping[Ngram, int] | None = None,
    seed_kind: str = "source_seed",
) -> RankedSelection:
    """Greedy selection with lazy rescoring.

    Selects until the budget is reached or no candidate scores above zero,
    whichever comes first. Ties on score go to the lowest sentence id.
    Heap entries carry the count-version at which their score was
    computed; a popped entry is only accepted outright when its score is
    current, or when its freshly recomputed score strictly beats the best
    cached score left in the heap (strictness keeps tie-breaking identical
    to the eager reference).
    """
    _check_budget(budget)
    counts = [0] * len(index.features)
    if init_counts:
        fid_get = index.feature_ids.get
        for g, c in init_counts.items():
            fid = fid_get(g)
            if fid is not None:
                counts[fid] = c

    match_fids = index._match_fids
    match_mults = index._match_mults
    lengths = index.lengths
    score_indexed = scorer.score_indexed

    heap: list[tuple[float, int, int]] = []
    for sid, fids in match_fids.items():
        s = score_indexed(fids, match_mults[sid], lengths[sid], counts)
        if s > 0.0:
            heap.append((-s, sid, 0))
    heapq.heapify(heap)

    entries: list[SelectionEntry] = []
    version = 0
    while heap and version < budget:
        neg, sid, ver = heapq.heappop(heap)
        if ver != version:
            s = score_indexed(match_fids[sid], match_mults[sid], lengths[sid], counts)
            if s <= 0.0:
                continue  # pruned: scores never increase
            if heap and -s >= heap[0][0]:
                heapq.heappush(heap, (-s, sid, version))
                continue
            neg = -s
        score = -neg
        if score <= 0.0:
            break
        version += 1
        entries.append(SelectionEntry(version, sid, score))
        for fid, mult in zip(match_fids[sid], match_mults[sid]):
            counts[fid] += mult

    return RankedSelection(entries=entries, seed_kind=seed_kind)


def run_selection_eager(
    index: FeatureIndex,
    scorer: Scorer,
    budget: int,
    init_counts: Mapping[Ngram, int] | None = None,
    seed_kind: str = "source_seed",
) -> RankedSelection:
    """Reference engine: rescore every remaining candidate at every step.

    Equivalent to ``run_selection`` by contract; quadratic, so only fit
    for small corpora and for validating the lazy path.
    """
    _check_budget(budget)
    state = initial_state(index, init_counts)
    entries: list[SelectionEntry] = []
    while state.remaining and len(entries) < budget:
        scores = recompute_all_scores(index, scorer, state)
        sid, best = max(scores.items(), key=lambda kv: (kv[1], -kv[0]))
        if best <= 0.0:
            break
        entries.append(SelectionEntry(len(entries) + 1, sid, best))
        apply_selection(state, index, sid)
    return RankedSelection(entries=entries, seed_kind=seed_kind)


RANKING_HEADER = ("step", "sentence_id", "score")


def write_ranking(ranking: RankedSelection, path: str) -> None:
    """Serialize a ranking as TSV: columns step, sentence_id, score
    (scores rendered with 6 decimal places)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(RANKING_HEADER) + "\n")
        for e in ranking.entries:
            fh.write(f"{e.step}\t{e.sentence_id}\t{e.score:.6f}\n")


def read_ranking(path: str, seed_kind: str = "source_seed") -> RankedSelection:
    """Load a ranking TSV produced by write_ranking."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != list(RANKING_HEADER):
            raise DataError(f"{path}: not a ranking TSV (header {header!r})")
        entries = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 columns")
            try:
                entries.append(
                    SelectionEntry(int(parts[0]), int(parts[1]), float(parts[2]))
                )
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return RankedSelection(entries=entries, seed_kind=seed_kind)


def write_selected_sentences(
    ranking: RankedSelection, sentences_by_id, path: str
) -> None:
    """Sidecar for a ranking: the selected sentences, one per line, in
    selection order. ``sentences_by_id`` maps id -> TokenizedSentence;
    a list indexed by dense line ids works too."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in ranking.entries:
            fh.write(sentences_by_id[e.sentence_id].text())
            fh.write("\n")
