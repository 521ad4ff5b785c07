"""End-to-end selection pipelines over a pluggable translator.

Two flows produce a selected synthetic parallel corpus:

- batch: back-translate the whole monolingual corpus first (or accept a
  pre-built synthetic parallel corpus), then select from the synthetic
  pairs using the test text as seed against the machine-generated source
  side.
- online: select directly from the monolingual target-side corpus using
  an approximated translation of the test text as seed, then
  back-translate only the selected sentences. Nothing outside the
  selection ever reaches the translator.

Every run writes four artifacts into its output directory: ranking.tsv,
selected.txt (the scored sentences in selection order), selected_pairs.tsv
and manifest.json. Artifacts are written under a ``.partial`` suffix and
renamed into place once complete, so an interrupted run never leaves a
truncated file under a final name.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import (
    SentencePair,
    TokenizedSentence,
    extract_features,
    build_index,
    load_corpus,
    tokenize,
    write_parallel,
)
from .engine import (
    RankedSelection,
    run_selection,
    write_ranking,
    write_selected_sentences,
)
from .fda import FdaConfig, FdaScorer
from .inr import InrConfig, InrScorer, init_counts_from_corpus
from .translators import TranslatorSpec, make_translator

ALGORITHMS = ("fda", "inr")
MODES = ("batch", "online")


@dataclass
class PipelineConfig:
    mode: str
    algorithm: str
    seed_path: str
    budget: int
    output_dir: str
    translator: TranslatorSpec | None = None
    max_order: int = 3
    fda: FdaConfig = field(default_factory=FdaConfig)
    inr: InrConfig | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown pipeline mode: {self.mode!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm: {self.algorithm!r}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.max_order < 1:
            raise ValueError(f"max_order must be >= 1, got {self.max_order}")
        if self.algorithm == "inr" and self.inr is None:
            raise ValueError("algorithm 'inr' requires an InrConfig")


@dataclass
class PipelineResult:
    ranking: RankedSelection
    pairs: list[SentencePair]
    manifest: dict
    output_dir: str


class _Stages:
    """Wall-clock timings plus per-stage line counters for the manifest."""

    def __init__(self):
        self.records: list[dict] = []

    def run(self, name: str, fn, **extra):
        t0 = time.perf_counter()
        result = fn()
        record = {"name": name, "seconds": round(time.perf_counter() - t0, 6)}
        record.update(extra)
        self.records.append(record)
        return result


def _digest_lines(lines: list[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def _corpus_digest(sentences) -> str:
    return _digest_lines([s.text() for s in sentences])


def _pairs_digest(pairs) -> str:
    return _digest_lines([f"{s.text()}\t{t.text()}" for s, t in pairs])


def atomic_write(path: Path, write_fn) -> None:
    """Write through a ``.partial`` name, renaming on success."""
    partial = path.with_name(path.name + ".partial")
    write_fn(str(partial))
    os.replace(partial, path)


def _make_scorer_and_init(cfg: PipelineConfig, seed_features):
    if cfg.algorithm == "fda":
        return FdaScorer(cfg.fda), None
    init_counts = None
    if cfg.inr.init_set_path:
        s_i = load_corpus(cfg.inr.init_set_path, "mono")
        init_counts = init_counts_from_corpus(s_i, seed_features)
    return InrScorer(cfg.inr), init_counts


def _select(cfg: PipelineConfig, seed_sentences, candidates, seed_kind, stages):
    features = stages.run(
        "extract_features", lambda: extract_features(seed_sentences, cfg.max_order)
    )
    index = stages.run("build_index", lambda: build_index(candidates, features))
    scorer, init_counts = _make_scorer_and_init(cfg, features)
    ranking = stages.run(
        "select",
        lambda: run_selection(
            index, scorer, cfg.budget, init_counts=init_counts, seed_kind=seed_kind
        ),
    )
    return ranking


def _write_artifacts(cfg, ranking, scored_sentences, pairs, manifest) -> None:
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    by_id = {s.id: s for s in scored_sentences}
    atomic_write(outdir / "ranking.tsv", lambda p: write_ranking(ranking, p))
    atomic_write(
        outdir / "selected.txt",
        lambda p: write_selected_sentences(ranking, by_id, p),
    )
    atomic_write(outdir / "selected_pairs.tsv", lambda p: write_parallel(pairs, p))

    def write_manifest(p):
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")

    atomic_write(outdir / "manifest.json", write_manifest)


def _base_manifest(cfg: PipelineConfig, seed_sentences) -> dict:
    translator = None
    if cfg.translator is not None:
        translator = {
            "kind": cfg.translator.kind,
            "command": cfg.translator.command,
            "seed_command": cfg.translator.seed_command,
            "dictionary_path": cfg.translator.dictionary_path,
            "copy_through_prob": cfg.translator.copy_through_prob,
            "drop_prob": cfg.translator.drop_prob,
            "swap_prob": cfg.translator.swap_prob,
            "rng_seed": cfg.translator.rng_seed,
            "timeout_secs": cfg.translator.timeout_secs,
        }
    algorithm_config: dict = {"max_order": cfg.max_order}
    if cfg.algorithm == "fda":
        algorithm_config.update(
            decay_base=cfg.fda.decay_base, length_normalize=cfg.fda.length_normalize
        )
    else:
        algorithm_config.update(
            threshold=cfg.inr.threshold, init_set_path=cfg.inr.init_set_path
        )
    return {
        "config": {
            "mode": cfg.mode,
            "algorithm": cfg.algorithm,
            "seed_path": cfg.seed_path,
            "budget": cfg.budget,
            "output_dir": cfg.output_dir,
            "algorithm_config": algorithm_config,
            "translator": translator,
        },
        "inputs": {
            "seed": {
                "sha256": _corpus_digest(seed_sentences),
                "sentences": len(seed_sentences),
            }
        },
    }


def run_batch(
    cfg: PipelineConfig,
    synthetic_parallel: list[SentencePair] | None = None,
    mono_target: list[TokenizedSentence] | None = None,
) -> PipelineResult:
    """Select from a synthetic parallel corpus using the test text as seed.

    Pass either a pre-built synthetic parallel corpus (source side machine
    generated) or a monolingual target corpus plus a translator, in which
    case the whole corpus is back-translated up front.
    """
    if cfg.mode != "batch":
        raise ValueError(f"run_batch called with mode {cfg.mode!r}")
    if (synthetic_parallel is None) == (mono_target is None):
        raise ValueError(
            "provide exactly one of synthetic_parallel or mono_target"
        )
    stages = _Stages()
    seed = load_corpus(cfg.seed_path, "mono")

    back_translated = None
    if synthetic_parallel is None:
        if cfg.translator is None:
            raise ValueError("batch mode from a monolingual corpus needs a translator")
        translator = make_translator(cfg.translator, direction="backward")
        target_lines = [s.text() for s in mono_target]
        source_lines = stages.run(
            "back_translate_all",
            lambda: translator.translate(target_lines),
            lines=len(target_lines),
        )
        back_translated = len(target_lines)
        synthetic_parallel = [
            (TokenizedSentence(t.id, tokenize(line)), t)
            for line, t in zip(source_lines, mono_target)
        ]

    sources = [src for src, _ in synthetic_parallel]
    targets = {t.id: t for _, t in synthetic_parallel}
    ranking = _select(cfg, seed, sources, "source_seed", stages)
    by_id = {s.id: s for s in sources}
    pairs = [(by_id[e.sentence_id], targets[e.sentence_id]) for e in ranking.entries]

    manifest = _base_manifest(cfg, seed)
    manifest["inputs"]["corpus"] = {
        "sha256": _pairs_digest(synthetic_parallel),
        "sentences": len(synthetic_parallel),
    }
    manifest["selection"] = {
        "size": len(ranking),
        "budget": cfg.budget,
        "seed_kind": ranking.seed_kind,
    }
    manifest["translation"] = {"back_translated_lines": back_translated}
    manifest["stages"] = stages.records
    _write_artifacts(cfg, ranking, sources, pairs, manifest)
    return PipelineResult(ranking, pairs, manifest, cfg.output_dir)


def run_online(
    cfg: PipelineConfig,
    mono_target: list[TokenizedSentence],
    test_set: list[TokenizedSentence] | None = None,
) -> PipelineResult:
    """Select from the monolingual target corpus, then back-translate only
    the selection.

    The seed is fabricated by translating the test set (loaded from
    cfg.seed_path unless passed in) into the target language; selection
    runs over the authentic target side; the selected sentences are then
    back-translated to form the synthetic source side of the output pairs.
    """
    if cfg.mode != "online":
        raise ValueError(f"run_online called with mode {cfg.mode!r}")
    if cfg.translator is None:
        raise ValueError("online mode requires a translator")
    stages = _Stages()
    test = test_set if test_set is not None else load_corpus(cfg.seed_path, "mono")

    forward = make_translator(cfg.translator, direction="forward")
    test_lines = [s.text() for s in test]
    seed_lines = stages.run(
        "translate_seed", lambda: forward.translate(test_lines), lines=len(test_lines)
    )
    approx_seed = [TokenizedSentence(i, tokenize(line)) for i, line in enumerate(seed_lines)]

    ranking = _select(cfg, approx_seed, mono_target, "approx_target_seed", stages)

    by_id = {s.id: s for s in mono_target}
    selected_targets = [by_id[e.sentence_id] for e in ranking.entries]
    backward = make_translator(cfg.translator, direction="backward")
    selected_lines = [s.text() for s in selected_targets]
    back_lines = stages.run(
        "back_translate_selection",
        lambda: backward.translate(selected_lines),
        lines=len(selected_lines),
    )
    pairs = [
        (TokenizedSentence(t.id, tokenize(line)), t)
        for line, t in zip(back_lines, selected_targets)
    ]

    manifest = _base_manifest(cfg, test)
    manifest["inputs"]["corpus"] = {
        "sha256": _corpus_digest(mono_target),
        "sentences": len(mono_target),
    }
    manifest["selection"] = {
        "size": len(ranking),
        "budget": cfg.budget,
        "seed_kind": ranking.seed_kind,
    }
    manifest["translation"] = {
        "seed_lines": forward.lines_translated,
        "back_translated_lines": backward.lines_translated,
    }
    manifest["stages"] = stages.records
    _write_artifacts(cfg, ranking, mono_target, pairs, manifest)
    return PipelineResult(ranking, pairs, manifest, cfg.output_dir)
