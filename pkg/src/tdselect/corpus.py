"""Line-oriented corpus ingestion, n-gram feature extraction, and indexing.

A corpus is a UTF-8 text file with one pre-tokenized sentence per line
(``mono`` format) or one ``source<TAB>target`` pair per line
(``parallel-tsv``). Tokenization is whitespace splitting; upstream
tooling is expected to have handled real tokenization, truecasing, or
subword segmentation. Empty lines are kept so line numbers stay aligned
with any parallel side, but a zero-length sentence can never be selected.
"""

from __future__ import annotations

import sys
from array import array
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

from .errors import DataError

Ngram = tuple[str, ...]

DEFAULT_MAX_ORDER = 3

CORPUS_FORMATS = ("mono", "parallel-tsv")


@dataclass(frozen=True)
class TokenizedSentence:
    """One corpus line: a token sequence plus its stable 0-based line index.

    A sentence loaded from an empty or whitespace-only line has no tokens;
    it is retained for alignment but is never selectable.
    """

    id: int
    tokens: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.tokens)

    @property
    def selectable(self) -> bool:
        return len(self.tokens) > 0

    def text(self) -> str:
        """Render back to one corpus line (tokens joined by single spaces)."""
        return " ".join(self.tokens)


SentencePair = tuple[TokenizedSentence, TokenizedSentence]


def tokenize(line: str) -> tuple[str, ...]:
    """Whitespace-split a pre-tokenized line. Interns tokens so large
    corpora share token storage."""
    return tuple(sys.intern(t) for t in line.split())


def _decode(path: str) -> str:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(
            f"{path}: invalid UTF-8 at byte offset {exc.start}"
        ) from exc


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def load_corpus(
    path: str, format: str = "mono"
) -> list[TokenizedSentence] | list[SentencePair]:
    """Load a corpus file.

    ``mono`` returns one TokenizedSentence per line; ``parallel-tsv``
    returns (source, target) sentence pairs sharing the line id. Raises
    DataError on malformed UTF-8 (naming the byte offset) or on a
    parallel line without exactly one TAB.
    """
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format: {format!r}")
    text = _decode(path)
    if format == "mono":
        return [
            TokenizedSentence(i, tokenize(line))
            for i, line in enumerate(_lines(text))
        ]
    pairs: list[SentencePair] = []
    for i, line in enumerate(_lines(text)):
        if line.count("\t") != 1:
            raise DataError(
                f"{path}:{i + 1}: parallel-tsv line must contain exactly one TAB"
            )
        src, trg = line.split("\t")
        pairs.append(
            (TokenizedSentence(i, tokenize(src)), TokenizedSentence(i, tokenize(trg)))
        )
    return pairs


def load_parallel_sides(source_path: str, target_path: str) -> list[SentencePair]:
    """Load a parallel corpus given as two aligned mono files."""
    src = load_corpus(source_path, "mono")
    trg = load_corpus(target_path, "mono")
    if len(src) != len(trg):
        raise DataError(
            f"parallel sides are misaligned: {source_path} has {len(src)} lines, "
            f"{target_path} has {len(trg)}"
        )
    return list(zip(src, trg))


def write_corpus(sentences: Iterable[TokenizedSentence], path: str) -> None:
    """Write sentences one per line, tokens joined by single spaces."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for sent in sentences:
            fh.write(sent.text())
            fh.write("\n")


def write_parallel(pairs: Iterable[SentencePair], path: str) -> None:
    """Write sentence pairs as ``source<TAB>target`` lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for src, trg in pairs:
            fh.write(f"{src.text()}\t{trg.text()}\n")


def sentence_ngrams(tokens: Sequence[str], max_order: int) -> Iterator[Ngram]:
    """Yield every n-gram occurrence of orders 1..max_order, order-major.

    The iteration order (all unigrams left to right, then all bigrams, ...)
    is part of the scoring contract: scorers sum contributions in this
    order, so every scoring path sees the same float accumulation.
    """
    n = len(tokens)
    for order in range(1, max_order + 1):
        if order > n:
            break
        for i in range(n - order + 1):
            yield tuple(tokens[i : i + order])


def extract_features(
    sentences: Iterable[TokenizedSentence], max_order: int = DEFAULT_MAX_ORDER
) -> set[Ngram]:
    """All distinct n-grams of orders 1..max_order occurring in the text."""
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    features: set[Ngram] = set()
    for sent in sentences:
        features.update(sentence_ngrams(sent.tokens, max_order))
    return features


def seed_matches(
    tokens: Sequence[str], seed_features, max_order: int
) -> Counter[Ngram]:
    """Multiset of seed-feature occurrences in a token sequence.

    ``seed_features`` is anything supporting ``in`` (a set, a dict keyed by
    n-gram, or FeatureIndex.feature_ids).
    """
    matches: Counter[Ngram] = Counter()
    for g in sentence_ngrams(tokens, max_order):
        if g in seed_features:
            matches[g] += 1
    return matches


class _PostingsView(Mapping):
    """Read-only mapping: seed n-gram -> sorted tuple of candidate ids."""

    def __init__(self, index: "FeatureIndex"):
        self._index = index

    def __getitem__(self, ngram: Ngram) -> tuple[int, ...]:
        fid = self._index.feature_ids[ngram]
        return tuple(self._index._postings[fid])

    def __iter__(self) -> Iterator[Ngram]:
        return iter(self._index.features)

    def __len__(self) -> int:
        return len(self._index.features)


class _MatchesView(Mapping):
    """Read-only mapping: candidate id -> multiset of its seed n-grams.

    Only candidates with at least one seed-matching n-gram appear.
    """

    def __init__(self, index: "FeatureIndex"):
        self._index = index

    def __getitem__(self, sentence_id: int) -> Counter[Ngram]:
        fids = self._index._match_fids[sentence_id]
        mults = self._index._match_mults[sentence_id]
        features = self._index.features
        return Counter(dict(zip((features[f] for f in fids), mults)))

    def __iter__(self) -> Iterator[int]:
        return iter(self._index._match_fids)

    def __len__(self) -> int:
        return len(self._index._match_fids)


class FeatureIndex:
    """Forward and inverted index of seed n-grams over a candidate corpus.

    Only n-grams present in the seed are indexed: anything else can never
    contribute to a selection score. Immutable after construction and safe
    for concurrent reads.

    Internally features are interned to dense integer ids (assigned over
    the sorted feature list, so construction is reproducible regardless of
    set iteration order) and per-sentence matches are stored as parallel
    id/multiplicity arrays. The spec-level views are exposed as
    ``seed_features``, ``postings`` and ``per_sentence``.
    """

    def __init__(
        self,
        features: tuple[Ngram, ...],
        max_order: int,
        num_candidates: int,
        lengths: array,
        match_fids: dict[int, array],
        match_mults: dict[int, array],
        postings: list[array],
    ):
        self.features = features
        self.feature_ids: dict[Ngram, int] = {g: i for i, g in enumerate(features)}
        self.max_order = max_order
        self.num_candidates = num_candidates
        self.lengths = lengths
        self._match_fids = match_fids
        self._match_mults = match_mults
        self._postings = postings
        self._matches_memo: dict[int, Counter[Ngram]] | None = None

    @property
    def seed_features(self) -> frozenset[Ngram]:
        return frozenset(self.features)

    @property
    def postings(self) -> Mapping:
        return _PostingsView(self)

    @property
    def per_sentence(self) -> Mapping:
        return _MatchesView(self)

    def matched_ids(self) -> Iterable[int]:
        """Candidate ids sharing at least one n-gram with the seed,
        ascending."""
        return self._match_fids.keys()

    def matches_for(self, sentence_id: int) -> Counter[Ngram]:
        """Multiset of seed n-grams in one candidate (empty if unmatched)."""
        if sentence_id not in self._match_fids:
            return Counter()
        return self.per_sentence[sentence_id]

    def materialize_matches(self) -> dict[int, Counter[Ngram]]:
        """Memoized dict form of ``per_sentence``; used by eager rescoring."""
        if self._matches_memo is None:
            view = self.per_sentence
            self._matches_memo = {sid: view[sid] for sid in self._match_fids}
        return self._matches_memo

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_matches_memo"] = None
        return state


def build_index(
    candidates: Sequence[TokenizedSentence], seed_features: Iterable[Ngram]
) -> FeatureIndex:
    """Index the candidate corpus against the seed's n-gram inventory.

    Candidates sharing no n-gram with the seed appear in no posting list
    and carry no match record. Candidate ids must be unique and
    non-negative; load_corpus yields dense 0..n-1 line indexes.
    """
    features = tuple(sorted(set(seed_features)))
    max_order = max(map(len, features), default=0)
    feature_ids = {g: i for i, g in enumerate(features)}
    unigram_ids = {g[0]: i for g, i in feature_ids.items() if len(g) == 1}
    # A window can only match if every token occurs somewhere in the seed
    # inventory; the per-token mask below prunes the n-gram loops with it.
    seed_vocab = {tok for g in features for tok in g}

    candidates = list(candidates)
    if any(candidates[i].id >= candidates[i + 1].id for i in range(len(candidates) - 1)):
        candidates.sort(key=lambda s: s.id)
        for i in range(len(candidates) - 1):
            if candidates[i].id == candidates[i + 1].id:
                raise ValueError(f"duplicate candidate id: {candidates[i].id}")
    num = len(candidates)
    max_id = candidates[-1].id if candidates else -1
    if max_id >= 0 and candidates[0].id < 0:
        raise ValueError("candidate ids must be non-negative")
    lengths = array("i", [0]) * (max_id + 1)
    match_fids: dict[int, array] = {}
    match_mults: dict[int, array] = {}
    postings: list[array] = [array("i") for _ in features]

    uni_get = unigram_ids.get
    fid_get = feature_ids.get
    for sent in candidates:
        sid = sent.id
        tokens = sent.tokens
        n = len(tokens)
        lengths[sid] = n
        local: dict[int, int] = {}
        mask = []
        mask_append = mask.append
        for tok in tokens:
            if tok in seed_vocab:
                mask_append(True)
                fid = uni_get(tok)
                if fid is not None:
                    local[fid] = local.get(fid, 0) + 1
            else:
                mask_append(False)
        for order in range(2, max_order + 1):
            for i in range(n - order + 1):
                usable = True
                for j in range(i, i + order):
                    if not mask[j]:
                        usable = False
                        break
                if not usable:
                    continue
                fid = fid_get(tuple(tokens[i : i + order]))
                if fid is not None:
                    local[fid] = local.get(fid, 0) + 1
        if local:
            match_fids[sid] = array("i", local.keys())
            match_mults[sid] = array("i", local.values())
            for fid in local:
                postings[fid].append(sid)

    return FeatureIndex(
        features=features,
        max_order=max_order,
        num_candidates=num,
        lengths=lengths,
        match_fids=match_fids,
        match_mults=match_mults,
        postings=postings,
    )
