"""Estimator-style selectors, composable with scikit-learn tooling.

The transductive selection step is transform-shaped: ``fit`` learns the
n-gram inventory of a seed text, ``transform`` reduces a candidate corpus
to the selected subset. ``select`` returns the full ranking with
per-step scores when the ordering and score trace matter.

    >>> selector = FdaSelector(n=100).fit(seed_lines)
    >>> subset = selector.transform(pool_lines)
    >>> ranking = selector.select(pool_lines)

Inputs may be strings (whitespace-tokenized), token sequences, or
TokenizedSentence records; see ``tdselect.validation.as_sentences``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .corpus import TokenizedSentence, build_index, extract_features
from .engine import RankedSelection, Scorer, run_selection
from .fda import FdaConfig, FdaScorer
from .inr import InrConfig, InrScorer, init_counts_from_corpus
from .validation import as_sentences, check_positive_int


class _BaseSelector(TransformerMixin, BaseEstimator):
    """Shared fit/select/transform mechanics; subclasses supply the scorer."""

    def __init__(self, n=1000, max_order=3, seed_kind="source_seed"):
        self.n = n
        self.max_order = max_order
        self.seed_kind = seed_kind

    def _make_scorer(self) -> Scorer:
        raise NotImplementedError

    def _init_counts(self):
        return None

    def fit(self, seed, y=None):
        """Learn the seed text's n-gram inventory.

        ``seed`` is the text whose n-grams drive selection: the test set
        itself, or its approximated translation.
        """
        check_positive_int("n", self.n)
        check_positive_int("max_order", self.max_order)
        sentences = as_sentences(seed)
        self.seed_features_ = frozenset(
            extract_features(sentences, max_order=self.max_order)
        )
        self.n_seed_sentences_ = len(sentences)
        return self

    def select(self, candidates) -> RankedSelection:
        """Rank and select up to ``n`` candidates; returns the full
        ranking with the exact score each sentence had when chosen."""
        check_is_fitted(self, "seed_features_")
        sentences = as_sentences(candidates)
        index = build_index(sentences, self.seed_features_)
        return run_selection(
            index,
            self._make_scorer(),
            budget=self.n,
            init_counts=self._init_counts(),
            seed_kind=self.seed_kind,
        )

    def transform(self, candidates) -> list[TokenizedSentence]:
        """The selected subset of ``candidates``, in selection order."""
        check_is_fitted(self, "seed_features_")
        sentences = as_sentences(candidates)
        index = build_index(sentences, self.seed_features_)
        ranking = run_selection(
            index,
            self._make_scorer(),
            budget=self.n,
            init_counts=self._init_counts(),
            seed_kind=self.seed_kind,
        )
        by_id = {s.id: s for s in sentences}
        return [by_id[e.sentence_id] for e in ranking.entries]


class FdaSelector(_BaseSelector):
    """Greedy selection under exponentially decaying n-gram gains.

    Parameters
    ----------
    n : int, selection budget.
    max_order : int, highest n-gram order extracted from the seed.
    decay_base : float in (0, 1), per-acquisition decay of a feature's
        contribution.
    length_normalize : bool, divide sentence scores by sentence length.
    seed_kind : recorded on the produced ranking.
    """

    def __init__(
        self,
        n=1000,
        max_order=3,
        decay_base=0.5,
        length_normalize=True,
        seed_kind="source_seed",
    ):
        super().__init__(n=n, max_order=max_order, seed_kind=seed_kind)
        self.decay_base = decay_base
        self.length_normalize = length_normalize

    def _make_scorer(self):
        return FdaScorer(
            FdaConfig(
                decay_base=self.decay_base, length_normalize=self.length_normalize
            )
        )


class InrSelector(_BaseSelector):
    """Greedy selection by threshold headroom of infrequent n-grams.

    Parameters
    ----------
    n : int, selection budget.
    threshold : int >= 1, count at which a seed n-gram stops contributing.
        Typical reference settings: 80 for news-style test sets, 640 for
        specialized domains such as biomedical text.
    max_order : int, highest n-gram order extracted from the seed.
    init_set : optional in-domain corpus (same input forms as fit) whose
        n-gram counts pre-saturate the scorer.
    seed_kind : recorded on the produced ranking.
    """

    def __init__(
        self,
        n=1000,
        threshold=None,
        max_order=3,
        init_set=None,
        seed_kind="source_seed",
    ):
        super().__init__(n=n, max_order=max_order, seed_kind=seed_kind)
        self.threshold = threshold
        self.init_set = init_set

    def fit(self, seed, y=None):
        if self.threshold is None:
            raise ValueError("InrSelector requires a threshold")
        check_positive_int("threshold", self.threshold)
        super().fit(seed, y)
        if self.init_set is not None:
            self.init_counts_ = init_counts_from_corpus(
                as_sentences(self.init_set), self.seed_features_
            )
        else:
            self.init_counts_ = None
        return self

    def _init_counts(self):
        return self.init_counts_

    def _make_scorer(self):
        return InrScorer(InrConfig(threshold=self.threshold))
