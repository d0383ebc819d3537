"""Affinity and diversity measurement over (original, augmented) corpus pairs.

Affinity of a pair is the scorer-loss delta nll(original) - nll(augmented);
negative values mean the augmented text is less likely under the scorer.
Diversity is distinct-n: distinct n-grams over total n-gram occurrences,
pooled corpus-wide, n-grams never crossing text boundaries.
"""

from dataclasses import dataclass

from .corpus import Corpus, encode_record
from .infill.base import score


class EmptyInput(Exception):
    """No n-grams (or no pairs) to aggregate over."""


class OrphanedSample(Exception):
    """An augmented sample whose source id is absent from the original corpus."""


def affinity(scorer, x: list[str], x_plus: list[str]) -> float:
    """Loss delta between the original and the augmented token sequence."""
    return score(scorer, x) - score(scorer, x_plus)


def _ngram_stats(texts: list[list[str]], n: int) -> tuple[int, int]:
    """(distinct n-grams, total n-gram occurrences) pooled over all texts."""
    total = 0
    grams: set[tuple[str, ...]] = set()
    for text in texts:
        m = len(text) - n + 1
        if m > 0:
            total += m
            for i in range(m):
                grams.add(tuple(text[i : i + n]))
    return len(grams), total


def dist_n(texts: list[list[str]], n: int) -> float:
    """Distinct n-grams / total n-gram occurrences across all texts."""
    distinct, total = _ngram_stats(texts, n)
    if total == 0:
        raise EmptyInput(f"no {n}-grams in input")
    return distinct / total


@dataclass
class MetricsReport:
    affinity_mean: float
    affinity_per_pair: list[tuple[str, str, float]]  # (source_id, aug_id, tau)
    dist1: float
    dist2: float
    counts: dict[str, int]

    def to_record(self) -> dict:
        return {
            "affinity_mean": self.affinity_mean,
            "affinity_per_pair": [
                {"source_id": src, "aug_id": aug, "tau": tau}
                for src, aug, tau in self.affinity_per_pair
            ],
            "dist1": self.dist1,
            "dist2": self.dist2,
            "counts": dict(self.counts),
        }

    def encode(self) -> bytes:
        return encode_record(self.to_record())

    def table(self) -> str:
        rows = [
            ("affinity_mean", f"{self.affinity_mean:+.4f}"),
            ("dist-1", f"{self.dist1:.4f}"),
            ("dist-2", f"{self.dist2:.4f}"),
        ] + [(k, str(v)) for k, v in sorted(self.counts.items())]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def evaluate_pair_corpus(orig: Corpus, aug: Corpus, scorer) -> MetricsReport:
    """Affinity per (source, augmented) pair plus Dist-1/2 over augmented texts.

    The source of an augmented sample is its provenance source_id; samples
    without provenance are paired with the original sample of the same id.
    """
    sources = orig.by_id()
    source_nll: dict[str, float] = {}
    pairs = []
    for a in aug:
        source_id = a.provenance.source_id if a.provenance else a.id
        if source_id not in sources:
            raise OrphanedSample(f"augmented sample {a.id!r}: no source {source_id!r}")
        if source_id not in source_nll:
            source_nll[source_id] = score(scorer, sources[source_id].tokens)
        tau = source_nll[source_id] - score(scorer, a.tokens)
        pairs.append((source_id, a.id, tau))
    if not pairs:
        raise EmptyInput("augmented corpus is empty")
    texts = [a.tokens for a in aug]
    distinct1, total1 = _ngram_stats(texts, 1)
    distinct2, total2 = _ngram_stats(texts, 2)
    if total1 == 0 or total2 == 0:
        raise EmptyInput("augmented texts contain no bigrams")
    return MetricsReport(
        affinity_mean=sum(tau for _, _, tau in pairs) / len(pairs),
        affinity_per_pair=pairs,
        dist1=distinct1 / total1,
        dist2=distinct2 / total2,
        counts={
            "pairs": len(pairs),
            "tokens": total1,
            "distinct_unigrams": distinct1,
            "bigrams": total2,
            "distinct_bigrams": distinct2,
        },
    )
