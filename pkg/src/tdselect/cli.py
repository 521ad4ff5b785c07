"""Command-line surface.

Subcommands: index, select-fda, select-inr, combine, pipeline, stats.
Progress goes to stderr; artifacts are written only under the requested
output location, through a ``.partial`` name renamed on success.

Exit codes: 0 success, 1 usage error, 2 data error (encoding, alignment),
3 translator failure.

Settings merge as flags > environment > config file > defaults. The
config file is a flat JSON object whose keys mirror the long flag names
of the subcommand (``{"decay-base": 0.7, "max-order": 4}``).
"""

from __future__ import annotations

import json as _json
import os
import pickle
import sys
from pathlib import Path

import click
from click.core import ParameterSource

from .combine import CombineSpec, combine_rankings
from .corpus import build_index, extract_features, load_corpus, write_parallel
from .engine import (
    read_ranking,
    run_selection,
    write_ranking,
    write_selected_sentences,
)
from .errors import DataError, TranslatorError
from .fda import FdaConfig, FdaScorer
from .inr import InrConfig, InrScorer, init_counts_from_corpus
from .metrics import coverage, render_table
from .pipeline import PipelineConfig, atomic_write, run_batch, run_online
from .translators import TranslatorSpec

OUTPUT_DIR_ENV = "TDSELECT_OUTPUT_DIR"
TIMEOUT_ENV = "TDSELECT_TRANSLATOR_TIMEOUT_SECS"

_EXISTING_FILE = click.Path(exists=True, dir_okay=False)


def _progress(message: str) -> None:
    click.echo(f"[tdselect] {message}", err=True)


def _merge_config(ctx: click.Context, values: dict) -> dict:
    """Fill defaults from a flat JSON config file; explicit flags and
    environment values win. Config keys mirror the long flag names."""
    config_path = values.pop("config", None)
    if not config_path:
        return values
    try:
        with open(config_path, encoding="utf-8") as fh:
            doc = _json.load(fh)
    except _json.JSONDecodeError as exc:
        raise click.UsageError(f"{config_path}: invalid JSON: {exc}")
    if not isinstance(doc, dict):
        raise click.UsageError(f"{config_path}: config must be a flat JSON object")
    merged = dict(values)
    for key, value in doc.items():
        param = key.replace("-", "_")
        if param not in values:
            raise click.UsageError(f"{config_path}: unknown config key {key!r}")
        if ctx.get_parameter_source(param) == ParameterSource.DEFAULT:
            merged[param] = value
    return merged


def _advise_memory(paths, advisory_size_mb: int) -> None:
    total = sum(os.path.getsize(p) for p in paths if p and os.path.exists(p))
    if total > advisory_size_mb * 1024 * 1024:
        _progress(
            f"inputs total {total / 1e6:.0f} MB (advisory threshold "
            f"{advisory_size_mb} MB): the corpus and index are held in memory; "
            "budget roughly 50-80 bytes of RAM per input token"
        )


def _resolve_format(corpus_path: str, corpus_format: str | None) -> str:
    """An explicit --format wins; otherwise .tsv files are treated as
    parallel and everything else as mono."""
    if corpus_format:
        return corpus_format
    return "parallel-tsv" if corpus_path.endswith(".tsv") else "mono"


def _load_candidates(corpus_path: str, corpus_format: str | None):
    """Returns (candidates, pairs); pairs is None for mono corpora."""
    if _resolve_format(corpus_path, corpus_format) == "parallel-tsv":
        pairs = load_corpus(corpus_path, "parallel-tsv")
        return [src for src, _ in pairs], pairs
    return load_corpus(corpus_path, "mono"), None


def _require_output_dir(output_dir: str | None) -> Path:
    if not output_dir:
        raise click.UsageError(
            f"missing output directory: pass --output-dir or set {OUTPUT_DIR_ENV}"
        )
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump_pickle(obj, path: str) -> None:
    with open(path, "wb") as fh:
        pickle.dump(obj, fh, protocol=4)


_config_option = click.option(
    "--config", type=_EXISTING_FILE, default=None,
    help="Flat JSON config mirroring the flag names; flags win on conflict.")


@click.group()
def cli():
    """Transductive corpus selection: pick the training sentences that
    best cover a test text's n-grams, directly or through back-translation
    pipelines."""


# ---------------------------------------------------------------------------
# index


@cli.command()
@click.option("--seed", required=True, type=_EXISTING_FILE,
              help="Seed text (the test set, or its approximated translation).")
@click.option("--corpus", required=True, type=_EXISTING_FILE,
              help="Candidate corpus to index.")
@click.option("--format", type=click.Choice(["mono", "parallel-tsv"]),
              default=None,
              help="Corpus layout (default: parallel-tsv for .tsv files, "
                   "mono otherwise); parallel corpora are indexed on the "
                   "source side.")
@click.option("--max-order", default=3, show_default=True,
              help="Highest n-gram order extracted from the seed.")
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False),
              help="Where to write the pickled index.")
@click.option("--advisory-size-mb", default=512, show_default=True)
@_config_option
@click.pass_context
def index(ctx, **kwargs):
    """Build the seed-filtered n-gram index of a candidate corpus."""
    v = _merge_config(ctx, kwargs)
    _advise_memory([v["seed"], v["corpus"]], v["advisory_size_mb"])
    seed = load_corpus(v["seed"], "mono")
    candidates, _ = _load_candidates(v["corpus"], v["format"])
    _progress(f"extracting features up to order {v['max_order']}")
    features = extract_features(seed, v["max_order"])
    _progress(f"indexing {len(candidates)} candidates against {len(features)} features")
    idx = build_index(candidates, features)
    atomic_write(Path(v["output"]), lambda p: _dump_pickle(idx, p))
    _progress(
        f"wrote {v['output']}: {len(idx.features)} features, "
        f"{len(idx.per_sentence)} matched candidates of {idx.num_candidates}"
    )


# ---------------------------------------------------------------------------
# select


def _common_select_options(f):
    decorators = [
        click.option("--seed", type=_EXISTING_FILE, default=None,
                     help="Seed text whose n-grams drive selection "
                          "(required unless --index is given)."),
        click.option("--corpus", required=True, type=_EXISTING_FILE,
                     help="Candidate corpus to select from."),
        click.option("--format", type=click.Choice(["mono", "parallel-tsv"]),
                     default=None,
                     help="Corpus layout (default: parallel-tsv for .tsv "
                          "files, mono otherwise)."),
        click.option("--n", required=True, type=int,
                     help="Selection budget; typical adaptation runs select "
                          "100000 to 500000 sentence pairs."),
        click.option("--max-order", default=3, show_default=True,
                     help="Highest n-gram order extracted from the seed."),
        click.option("--index", type=_EXISTING_FILE, default=None,
                     help="Reuse a pickled index built by the index subcommand."),
        click.option("--output-dir", "-o", envvar=OUTPUT_DIR_ENV, default=None,
                     help=f"Artifact directory (env: {OUTPUT_DIR_ENV})."),
        click.option("--advisory-size-mb", default=512, show_default=True),
        _config_option,
    ]
    for dec in reversed(decorators):
        f = dec(f)
    return f


def _run_select(v: dict, algorithm: str, scorer, init_counts_fn) -> None:
    out = _require_output_dir(v["output_dir"])
    _advise_memory([v["seed"], v["corpus"]], v["advisory_size_mb"])

    candidates, pairs = _load_candidates(v["corpus"], v["format"])
    if v["index"]:
        _progress(f"loading prebuilt index {v['index']}")
        with open(v["index"], "rb") as fh:
            idx = pickle.load(fh)
        features = idx.seed_features
    else:
        if not v["seed"]:
            raise click.UsageError("--seed is required unless --index is given")
        seed = load_corpus(v["seed"], "mono")
        _progress(f"extracting features up to order {v['max_order']}")
        features = extract_features(seed, v["max_order"])
        _progress(f"indexing {len(candidates)} candidates")
        idx = build_index(candidates, features)

    init_counts = init_counts_fn(features)
    _progress(f"selecting up to {v['n']} sentences with {algorithm}")
    ranking = run_selection(idx, scorer, v["n"], init_counts=init_counts)
    _progress(f"selected {len(ranking)} sentences")

    by_id = {s.id: s for s in candidates}
    atomic_write(out / "ranking.tsv", lambda p: write_ranking(ranking, p))
    atomic_write(out / "selected.txt",
                 lambda p: write_selected_sentences(ranking, by_id, p))
    if pairs is not None:
        target_by_id = {t.id: t for _, t in pairs}
        selected_pairs = [
            (by_id[e.sentence_id], target_by_id[e.sentence_id])
            for e in ranking.entries
        ]
        atomic_write(out / "selected_pairs.tsv",
                     lambda p: write_parallel(selected_pairs, p))
    _progress(f"artifacts written to {out}")


@cli.command("select-fda")
@_common_select_options
@click.option("--decay-base", default=0.5, show_default=True,
              help="Per-acquisition decay of an n-gram's contribution.")
@click.option("--no-length-norm", is_flag=True,
              help="Do not divide sentence scores by sentence length.")
@click.pass_context
def select_fda(ctx, **kwargs):
    """Select with feature decay: an n-gram's contribution halves (by
    default) each time the growing selection acquires it."""
    v = _merge_config(ctx, kwargs)
    scorer = FdaScorer(FdaConfig(
        decay_base=v["decay_base"],
        length_normalize=not v["no_length_norm"],
    ))
    _run_select(v, "fda", scorer, lambda features: None)


@cli.command("select-inr")
@_common_select_options
@click.option("--threshold", required=True, type=int,
              help="Count at which a seed n-gram stops contributing "
                   "(reference settings: 80 for news-style test sets, 640 "
                   "for specialized domains such as biomedical text; lower "
                   "is stricter and retrieves fewer sentences).")
@click.option("--init-set", type=_EXISTING_FILE, default=None,
              help="In-domain corpus whose n-gram counts pre-saturate scoring.")
@click.pass_context
def select_inr(ctx, **kwargs):
    """Select by infrequent n-gram recovery: each sentence scores the
    remaining headroom of its seed n-grams under the threshold."""
    v = _merge_config(ctx, kwargs)
    scorer = InrScorer(InrConfig(threshold=v["threshold"]))

    def init_counts_fn(features):
        if not v["init_set"]:
            return None
        s_i = load_corpus(v["init_set"], "mono")
        return init_counts_from_corpus(s_i, features)

    _run_select(v, "inr", scorer, init_counts_fn)


# ---------------------------------------------------------------------------
# combine


@cli.command()
@click.option("--alpha", required=True, type=float,
              help="Share of the output drawn from --src: the top "
                   "floor(N * alpha) entries of --src followed by the top "
                   "N - floor(N * alpha) of --trg. Evaluation grids "
                   "commonly sweep 0, 0.25, 0.5, 0.75, 1.")
@click.option("--n", required=True, type=int, help="Total output size N.")
@click.option("--src", required=True, type=_EXISTING_FILE,
              help="Ranking TSV produced with the test-set seed.")
@click.option("--trg", required=True, type=_EXISTING_FILE,
              help="Ranking TSV produced with the approximated-target seed.")
@click.option("--keep-duplicates", is_flag=True,
              help="Keep sentences surfacing through both seeds "
                   "(default removes them and backfills).")
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False),
              help="Combined ranking TSV.")
@_config_option
@click.pass_context
def combine(ctx, **kwargs):
    """Concatenate the tops of two rankings in an alpha proportion."""
    v = _merge_config(ctx, kwargs)
    ta_src = read_ranking(v["src"], seed_kind="source_seed")
    ta_trg = read_ranking(v["trg"], seed_kind="approx_target_seed")
    spec = CombineSpec(alpha=v["alpha"], total_n=v["n"],
                       dedup=not v["keep_duplicates"])
    combined = combine_rankings(ta_src, ta_trg, spec)
    atomic_write(Path(v["output"]), lambda p: write_ranking(combined, p))
    _progress(f"wrote {len(combined)} entries to {v['output']}")


# ---------------------------------------------------------------------------
# pipeline


@cli.command("pipeline")
@click.option("--mode", required=True, type=click.Choice(["batch", "online"]),
              help="batch: back-translate everything, then select; "
                   "online: select, then back-translate only the selection.")
@click.option("--algorithm", required=True, type=click.Choice(["fda", "inr"]))
@click.option("--seed", required=True, type=_EXISTING_FILE,
              help="Test text (source language).")
@click.option("--corpus", required=True, type=_EXISTING_FILE,
              help="Batch: synthetic parallel TSV, or a monolingual corpus to "
                   "back-translate first. Online: monolingual target corpus.")
@click.option("--corpus-format", type=click.Choice(["mono", "parallel-tsv"]),
              default=None,
              help="Corpus layout (default: parallel-tsv for .tsv files, mono "
                   "otherwise). Online mode requires mono; batch mode "
                   "back-translates mono corpora before selecting.")
@click.option("--n", required=True, type=int, help="Selection budget.")
@click.option("--max-order", default=3, show_default=True)
@click.option("--decay-base", default=0.5, show_default=True)
@click.option("--no-length-norm", is_flag=True)
@click.option("--threshold", type=int, default=None,
              help="Required for --algorithm inr (reference settings: 80 "
                   "news-style, 640 specialized domains).")
@click.option("--init-set", type=_EXISTING_FILE, default=None)
@click.option("--translator", default="identity", show_default=True,
              type=click.Choice(["identity", "dictionary", "noisy-dictionary",
                                 "external-process"]))
@click.option("--dictionary", type=_EXISTING_FILE, default=None,
              help="Token dictionary (source<TAB>target per line) for the "
                   "dictionary translator kinds.")
@click.option("--translator-cmd", default=None,
              help="External command for back-translation (target -> source); "
                   "line protocol on stdin/stdout.")
@click.option("--seed-translator-cmd", default=None,
              help="External command for seed translation (source -> target); "
                   "defaults to --translator-cmd.")
@click.option("--copy-through-prob", default=0.0, show_default=True,
              help="Noisy translator: chance a token is copied untranslated.")
@click.option("--drop-prob", default=0.0, show_default=True,
              help="Noisy translator: chance a token is dropped.")
@click.option("--swap-prob", default=0.0, show_default=True,
              help="Noisy translator: chance adjacent output tokens swap.")
@click.option("--rng-seed", default=0, show_default=True,
              help="Seed for translator noise; fixed seeds make runs "
                   "byte-reproducible.")
@click.option("--translator-timeout-secs", envvar=TIMEOUT_ENV, type=float,
              default=None,
              help=f"External translator timeout (env: {TIMEOUT_ENV}).")
@click.option("--output-dir", "-o", envvar=OUTPUT_DIR_ENV, default=None,
              help=f"Artifact directory (env: {OUTPUT_DIR_ENV}).")
@click.option("--advisory-size-mb", default=512, show_default=True)
@_config_option
@click.pass_context
def pipeline(ctx, **kwargs):
    """Run a full batch or online selection pipeline."""
    v = _merge_config(ctx, kwargs)
    out = _require_output_dir(v["output_dir"])
    _advise_memory([v["seed"], v["corpus"]], v["advisory_size_mb"])

    if v["algorithm"] == "inr" and v["threshold"] is None:
        raise click.UsageError("--algorithm inr requires --threshold")

    try:
        translator_spec = TranslatorSpec(
            kind=v["translator"].replace("-", "_"),
            command=v["translator_cmd"],
            seed_command=v["seed_translator_cmd"],
            dictionary_path=v["dictionary"],
            copy_through_prob=v["copy_through_prob"],
            drop_prob=v["drop_prob"],
            swap_prob=v["swap_prob"],
            rng_seed=v["rng_seed"],
            timeout_secs=v["translator_timeout_secs"],
        )
        cfg = PipelineConfig(
            mode=v["mode"],
            algorithm=v["algorithm"],
            seed_path=v["seed"],
            budget=v["n"],
            output_dir=str(out),
            translator=translator_spec,
            max_order=v["max_order"],
            fda=FdaConfig(decay_base=v["decay_base"],
                          length_normalize=not v["no_length_norm"]),
            inr=(InrConfig(threshold=v["threshold"], init_set_path=v["init_set"])
                 if v["algorithm"] == "inr" else None),
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))

    fmt = _resolve_format(v["corpus"], v["corpus_format"])

    if v["mode"] == "batch":
        if fmt == "parallel-tsv":
            pairs = load_corpus(v["corpus"], "parallel-tsv")
            _progress(f"batch selection over {len(pairs)} synthetic pairs")
            result = run_batch(cfg, synthetic_parallel=pairs)
        else:
            mono = load_corpus(v["corpus"], "mono")
            _progress(f"back-translating all {len(mono)} sentences, then selecting")
            result = run_batch(cfg, mono_target=mono)
    else:
        if fmt != "mono":
            raise click.UsageError("online mode requires a monolingual corpus")
        mono = load_corpus(v["corpus"], "mono")
        _progress(f"online selection over {len(mono)} monolingual sentences")
        result = run_online(cfg, mono_target=mono)

    _progress(
        f"selected {len(result.ranking)} sentences; artifacts in {result.output_dir}"
    )


# ---------------------------------------------------------------------------
# stats


@cli.command()
@click.option("--seed", required=True, type=_EXISTING_FILE,
              help="Seed text whose n-gram inventory is being covered.")
@click.option("--selection", required=True, type=_EXISTING_FILE,
              help="Selected sentences, one per line.")
@click.option("--max-order", default=3, show_default=True)
@click.option("--saturation-threshold", type=int, default=None,
              help="Also count seed n-grams occurring at least this often.")
@click.option("--json", type=click.Path(dir_okay=False), default=None,
              help="Also write the report as JSON (stable key order).")
@_config_option
@click.pass_context
def stats(ctx, **kwargs):
    """Report n-gram coverage of the seed by a selected subset."""
    v = _merge_config(ctx, kwargs)
    seed = load_corpus(v["seed"], "mono")
    selection = load_corpus(v["selection"], "mono")
    features = extract_features(seed, v["max_order"])
    report = coverage(features, selection,
                      saturation_threshold=v["saturation_threshold"])
    click.echo(render_table(report))
    if v["json"]:
        def write_json(p):
            with open(p, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(report.to_json())
                fh.write("\n")
        atomic_write(Path(v["json"]), write_json)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except TranslatorError as exc:
        click.echo(f"translator error: {exc}", err=True)
        if exc.diagnostics:
            click.echo(exc.diagnostics.rstrip(), err=True)
        return 3
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
