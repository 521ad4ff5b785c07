"""Coverage reporting: how much of the seed's n-gram inventory a selected
subset recovers, per order, plus occurrence diagnostics."""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .corpus import Ngram, TokenizedSentence, seed_matches


@dataclass(frozen=True)
class OrderCoverage:
    seed_types: int
    covered_types: int
    coverage_ratio: float


@dataclass
class CoverageReport:
    """Type coverage of the seed inventory by a selection.

    ``per_order`` maps n-gram order to its coverage; ``saturated_types``
    counts seed features whose occurrence count in the selection reached
    the requested threshold (None when no threshold was given);
    ``occurrence_histogram`` maps occurrence count -> number of seed
    features seen that many times (0 included).
    """

    per_order: dict[int, OrderCoverage]
    saturated_types: int | None
    selection_size: int
    token_count: int
    occurrence_histogram: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "per_order": {
                str(order): {
                    "seed_types": oc.seed_types,
                    "covered_types": oc.covered_types,
                    "coverage_ratio": oc.coverage_ratio,
                }
                for order, oc in sorted(self.per_order.items())
            },
            "saturated_types": self.saturated_types,
            "selection_size": self.selection_size,
            "token_count": self.token_count,
            "occurrence_histogram": [
                [occ, n] for occ, n in sorted(self.occurrence_histogram.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def coverage(
    seed_features: Iterable[Ngram],
    selection: Sequence[TokenizedSentence],
    saturation_threshold: int | None = None,
) -> CoverageReport:
    """Coverage of the seed features by a selected subset.

    Coverage is over n-gram types: a seed feature counts as covered once
    it occurs at least once anywhere in the selection.
    """
    if saturation_threshold is not None and saturation_threshold < 1:
        raise ValueError(
            f"saturation_threshold must be >= 1, got {saturation_threshold}"
        )
    features = set(seed_features)
    max_order = max(map(len, features), default=0)

    occurrences: Counter[Ngram] = Counter()
    token_count = 0
    for sent in selection:
        token_count += sent.length
        occurrences.update(seed_matches(sent.tokens, features, max_order))

    per_order: dict[int, OrderCoverage] = {}
    for order in sorted({len(g) for g in features}):
        of_order = [g for g in features if len(g) == order]
        covered = sum(1 for g in of_order if occurrences[g] > 0)
        per_order[order] = OrderCoverage(
            seed_types=len(of_order),
            covered_types=covered,
            coverage_ratio=covered / len(of_order) if of_order else 0.0,
        )

    saturated = None
    if saturation_threshold is not None:
        saturated = sum(
            1 for g in features if occurrences[g] >= saturation_threshold
        )

    histogram = Counter(occurrences[g] for g in features)
    return CoverageReport(
        per_order=per_order,
        saturated_types=saturated,
        selection_size=len(selection),
        token_count=token_count,
        occurrence_histogram=dict(histogram),
    )


def render_table(report: CoverageReport) -> str:
    """Plain-text rendering of a coverage report."""
    lines = ["order  seed_types  covered_types  coverage"]
    for order, oc in sorted(report.per_order.items()):
        lines.append(
            f"{order:<5d}  {oc.seed_types:<10d}  {oc.covered_types:<13d}  "
            f"{oc.coverage_ratio:.4f}"
        )
    lines.append(f"selection_size: {report.selection_size}")
    lines.append(f"token_count:    {report.token_count}")
    if report.saturated_types is not None:
        lines.append(f"saturated_types: {report.saturated_types}")
    return "\n".join(lines)
