import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from tdselect import (
    FdaScorer,
    FdaSelector,
    InrConfig,
    InrScorer,
    InrSelector,
    TokenizedSentence,
    build_index,
    extract_features,
    init_counts_from_corpus,
    run_selection,
)

SEED = ["the cat sat", "a dog barked"]
POOL = [
    "the cat ran",
    "a dog slept",
    "nothing in common here",
    "sat the cat sat",
    "dog dog dog",
]


class TestEstimatorProtocol:
    def test_get_params_round_trip(self):
        sel = FdaSelector(n=7, max_order=2, decay_base=0.3, length_normalize=False)
        params = sel.get_params()
        assert params["n"] == 7
        assert params["decay_base"] == 0.3
        sel2 = FdaSelector(**params)
        assert sel2.get_params() == params

    def test_set_params(self):
        sel = InrSelector(threshold=4)
        sel.set_params(n=3, threshold=9)
        assert sel.n == 3 and sel.threshold == 9

    def test_clone(self):
        sel = InrSelector(n=5, threshold=2, max_order=1).fit(SEED)
        fresh = clone(sel)
        assert fresh.get_params() == sel.get_params()
        with pytest.raises(NotFittedError):
            fresh.select(POOL)

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            FdaSelector().select(POOL)
        with pytest.raises(NotFittedError):
            FdaSelector().transform(POOL)

    def test_fit_returns_self_and_sets_attributes(self):
        sel = FdaSelector(n=2, max_order=2)
        assert sel.fit(SEED) is sel
        assert sel.n_seed_sentences_ == 2
        assert ("the", "cat") in sel.seed_features_

    def test_parameter_validation_happens_in_fit(self):
        sel = FdaSelector(n=0)
        with pytest.raises(ValueError):
            sel.fit(SEED)
        with pytest.raises(ValueError):
            FdaSelector(n=2, max_order=0).fit(SEED)
        with pytest.raises(ValueError):
            InrSelector(n=2).fit(SEED)  # threshold missing


class TestSelectionBehaviour:
    def test_fda_matches_functional_core(self):
        sel = FdaSelector(n=4, max_order=2).fit(SEED)
        via_estimator = sel.select(POOL)

        seed_sents = [TokenizedSentence(i, tuple(t.split())) for i, t in enumerate(SEED)]
        pool_sents = [TokenizedSentence(i, tuple(t.split())) for i, t in enumerate(POOL)]
        index = build_index(pool_sents, extract_features(seed_sents, 2))
        direct = run_selection(index, FdaScorer(), 4)
        assert via_estimator.ids() == direct.ids()
        assert via_estimator.scores() == direct.scores()

    def test_inr_matches_functional_core_with_init_set(self):
        init = ["the the cat"]
        sel = InrSelector(n=4, threshold=2, max_order=1, init_set=init).fit(SEED)
        via_estimator = sel.select(POOL)

        seed_sents = [TokenizedSentence(i, tuple(t.split())) for i, t in enumerate(SEED)]
        pool_sents = [TokenizedSentence(i, tuple(t.split())) for i, t in enumerate(POOL)]
        init_sents = [TokenizedSentence(0, ("the", "the", "cat"))]
        feats = extract_features(seed_sents, 1)
        index = build_index(pool_sents, feats)
        direct = run_selection(
            index, InrScorer(InrConfig(threshold=2)), 4,
            init_counts=init_counts_from_corpus(init_sents, feats))
        assert via_estimator.ids() == direct.ids()

    def test_transform_returns_subset_in_selection_order(self):
        sel = FdaSelector(n=3, max_order=2).fit(SEED)
        ranking = sel.select(POOL)
        subset = sel.transform(POOL)
        assert [s.id for s in subset] == ranking.ids()
        assert all(s.text() == POOL[s.id] for s in subset)

    def test_input_forms_equivalent(self):
        as_strings = FdaSelector(n=3).fit(SEED).select(POOL)
        as_tokens = FdaSelector(n=3).fit(
            [s.split() for s in SEED]).select([s.split() for s in POOL])
        as_sent = FdaSelector(n=3).fit(
            [TokenizedSentence(i, tuple(s.split())) for i, s in enumerate(SEED)]
        ).select(
            [TokenizedSentence(i, tuple(s.split())) for i, s in enumerate(POOL)])
        assert as_strings.ids() == as_tokens.ids() == as_sent.ids()

    def test_fit_transform_self_selection(self):
        sel = FdaSelector(n=2, max_order=1)
        subset = sel.fit_transform(SEED)
        assert len(subset) == 2
        assert {s.text() for s in subset} <= set(SEED)

    def test_seed_kind_recorded(self):
        sel = FdaSelector(n=1, seed_kind="approx_target_seed").fit(SEED)
        assert sel.select(POOL).seed_kind == "approx_target_seed"
