"""tdselect: transductive corpus selection for machine translation adaptation.

Select the subset of a large corpus that best covers the n-grams of a
test text, with feature-decay or infrequent-n-gram-recovery scoring,
two-seed ranking combination, and batch/online back-translation
pipelines around a pluggable translator.
"""

from .combine import CombineSpec, combine_rankings, source_share
from .corpus import (
    DEFAULT_MAX_ORDER,
    FeatureIndex,
    TokenizedSentence,
    build_index,
    extract_features,
    load_corpus,
    load_parallel_sides,
    sentence_ngrams,
    seed_matches,
    write_corpus,
    write_parallel,
)
from .engine import (
    RankedSelection,
    Scorer,
    SelectionEntry,
    SelectionState,
    apply_selection,
    initial_state,
    read_ranking,
    recompute_all_scores,
    run_selection,
    run_selection_eager,
    write_ranking,
    write_selected_sentences,
)
from .errors import DataError, TdselectError, TranslatorError
from .fda import FdaConfig, FdaScorer, fda_score
from .inr import InrConfig, InrScorer, init_counts_from_corpus, inr_score
from .metrics import CoverageReport, OrderCoverage, coverage, render_table
from .pipeline import PipelineConfig, PipelineResult, run_batch, run_online
from .selectors import FdaSelector, InrSelector
from .translators import (
    DictionaryTranslator,
    ExternalProcessTranslator,
    IdentityTranslator,
    NoisyDictionaryTranslator,
    Translator,
    TranslatorSpec,
    load_dictionary,
    make_translator,
)
from .validation import as_sentences

__version__ = "0.1.0"

__all__ = [
    "CombineSpec",
    "CoverageReport",
    "DEFAULT_MAX_ORDER",
    "DataError",
    "DictionaryTranslator",
    "ExternalProcessTranslator",
    "FdaConfig",
    "FdaScorer",
    "FdaSelector",
    "FeatureIndex",
    "IdentityTranslator",
    "InrConfig",
    "InrScorer",
    "InrSelector",
    "NoisyDictionaryTranslator",
    "OrderCoverage",
    "PipelineConfig",
    "PipelineResult",
    "RankedSelection",
    "Scorer",
    "SelectionEntry",
    "SelectionState",
    "TdselectError",
    "TokenizedSentence",
    "Translator",
    "TranslatorError",
    "TranslatorSpec",
    "apply_selection",
    "as_sentences",
    "build_index",
    "combine_rankings",
    "coverage",
    "extract_features",
    "fda_score",
    "init_counts_from_corpus",
    "initial_state",
    "inr_score",
    "load_corpus",
    "load_dictionary",
    "load_parallel_sides",
    "make_translator",
    "read_ranking",
    "recompute_all_scores",
    "render_table",
    "run_batch",
    "run_online",
    "run_selection",
    "run_selection_eager",
    "seed_matches",
    "sentence_ngrams",
    "source_share",
    "write_corpus",
    "write_parallel",
    "write_ranking",
    "write_selected_sentences",
]
