"""Shared fixtures and independent oracles.

The oracle helpers deliberately avoid the library's own n-gram machinery:
they enumerate windows and scan tokens directly, so index and scorer bugs
cannot hide behind shared code.
"""

import random

import pytest

from tdselect import TokenizedSentence


# ---------------------------------------------------------------------------
# oracles


def brute_ngrams(tokens, max_order):
    """All distinct contiguous subsequences of length 1..max_order."""
    out = set()
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + max_order, len(tokens)) + 1):
            out.add(tuple(tokens[i:j]))
    return out


def count_occurrences(tokens, gram):
    """Number of positions where ``gram`` occurs in ``tokens``."""
    k = len(gram)
    g = tuple(gram)
    return sum(1 for i in range(len(tokens) - k + 1) if tuple(tokens[i:i + k]) == g)


def contains(tokens, gram):
    return count_occurrences(tokens, gram) > 0


def oracle_fda_score(tokens, seed_features, counts, max_order,
                     decay_base=0.5, length_normalize=True):
    """Direct evaluation: per-occurrence decayed contributions."""
    if not tokens:
        return 0.0
    total = 0.0
    for g in brute_ngrams(tokens, max_order):
        if g in seed_features:
            total += count_occurrences(tokens, g) * decay_base ** counts.get(g, 0)
    return total / len(tokens) if length_normalize else total


def oracle_inr_score(tokens, seed_features, counts, max_order, threshold):
    """Direct evaluation: per-type threshold headroom."""
    total = 0
    for g in brute_ngrams(tokens, max_order):
        if g in seed_features:
            total += max(0, threshold - counts.get(g, 0))
    return float(total)


def oracle_recount(selected_sentences, seed_features, init_counts=None):
    """From-scratch recount of every seed feature over a selection."""
    counts = dict.fromkeys(seed_features, 0)
    if init_counts:
        for g, c in init_counts.items():
            if g in counts:
                counts[g] = c
    max_order = max((len(g) for g in seed_features), default=0)
    for sent in selected_sentences:
        for g in brute_ngrams(sent.tokens, max_order):
            if g in counts:
                counts[g] += count_occurrences(sent.tokens, g)
    return counts


# ---------------------------------------------------------------------------
# corpus generation


def random_sentences(rng: random.Random, n, vocab, min_len=1, max_len=12):
    return [
        TokenizedSentence(
            i, tuple(rng.choice(vocab) for _ in range(rng.randint(min_len, max_len)))
        )
        for i in range(n)
    ]


def make_vocab(size, prefix="w"):
    return [f"{prefix}{i}" for i in range(size)]


@pytest.fixture
def rng():
    return random.Random(12345)


# ---------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if outcome == "passed" and rep.when != "call":
                continue
            name = nodeid.split("::")[-1]
            results[name] = results.get(name, True) and outcome == "passed"
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok in results.items():
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
