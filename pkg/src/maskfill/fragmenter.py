"""Adjunct-fragment computation, fragment masking, and infilling training data.

An adjunct fragment is a maximal run of tokens not covered by any trigger or
argument span. Masking replaces one eligible fragment with a single
placeholder token and keeps the removed tokens as the infilling target.
"""

import random
from dataclasses import dataclass, field

from .corpus import AnnotatedSample, EventMention, Span

MASK_TOKEN = "[MASK]"


class NoEligibleFragment(Exception):
    """The sample has no adjunct fragment within the requested length bounds."""


@dataclass(frozen=True)
class Fragment:
    span: Span


@dataclass
class MaskedSample:
    source_id: str
    tokens_with_mask: list[str]
    masked_range: Span
    target: list[str]
    events: list[EventMention] = field(default_factory=list)
    mask_token: str = MASK_TOKEN

    def reconstruct(self) -> list[str]:
        return splice(self.tokens_with_mask, self.target, self.mask_token)


@dataclass
class InfillTrainingExample:
    masked_text: list[str]
    target: list[str]
    mask_token: str = MASK_TOKEN

    def reconstruct(self) -> list[str]:
        return splice(self.masked_text, self.target, self.mask_token)


def splice(tokens_with_mask: list[str], fill: list[str], mask_token: str = MASK_TOKEN) -> list[str]:
    """Replace the single placeholder token with the fill tokens."""
    positions = [i for i, t in enumerate(tokens_with_mask) if t == mask_token]
    if len(positions) != 1:
        raise ValueError(
            f"expected exactly one {mask_token!r} placeholder, found {len(positions)}"
        )
    i = positions[0]
    return tokens_with_mask[:i] + list(fill) + tokens_with_mask[i + 1 :]


def compute_adjunct_fragments(s: AnnotatedSample) -> list[Fragment]:
    """Maximal token runs outside every trigger/argument span, sorted by start.

    Implemented by merging the event intervals and walking the gaps, so the
    per-token coverage oracle used in tests stays an independent check.
    """
    n = len(s.tokens)
    merged: list[list[int]] = []
    for span in sorted(s.event_spans(), key=lambda sp: (sp.start, sp.end)):
        if merged and span.start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], span.end)
        else:
            merged.append([span.start, span.end])
    fragments = []
    cursor = 0
    for start, end in merged:
        if cursor < start:
            fragments.append(Fragment(Span(cursor, start)))
        cursor = max(cursor, end)
    if cursor < n:
        fragments.append(Fragment(Span(cursor, n)))
    return fragments


def select_and_mask(
    s: AnnotatedSample,
    rng: random.Random,
    min_len: int = 1,
    max_len: int = 10,
    mask_token: str = MASK_TOKEN,
) -> MaskedSample:
    """Mask one adjunct fragment with length in [min_len, max_len], chosen uniformly."""
    if mask_token in s.tokens:
        raise ValueError(f"sample {s.id!r} already contains the mask token {mask_token!r}")
    eligible = [
        f for f in compute_adjunct_fragments(s) if min_len <= f.span.length <= max_len
    ]
    if not eligible:
        raise NoEligibleFragment(
            f"sample {s.id!r}: no adjunct fragment with length in [{min_len},{max_len}]"
        )
    chosen = eligible[rng.randrange(len(eligible))].span
    return MaskedSample(
        source_id=s.id,
        tokens_with_mask=s.tokens[: chosen.start] + [mask_token] + s.tokens[chosen.end :],
        masked_range=chosen,
        target=s.tokens[chosen.start : chosen.end],
        events=s.events,
        mask_token=mask_token,
    )


def partition_sizes(length: int, parts: int) -> list[int]:
    """Near-equal contiguous partition sizes, longer spans first."""
    base, rem = divmod(length, parts)
    return [base + 1] * rem + [base] * (parts - rem)


def generate_infill_training_examples(
    plain_sentences: list[list[str]],
    rng: random.Random,
    mask_token: str = MASK_TOKEN,
    max_parts: int = 10,
) -> list[InfillTrainingExample]:
    """One masked-span training example per sentence.

    For a sentence of L tokens: draw the number of spans n uniformly from
    [1, min(max_parts, L)], split the sentence into n contiguous near-equal
    spans, and hold one span out, chosen uniformly, as the target.
    """
    out = []
    for tokens in plain_sentences:
        if not tokens:
            raise ValueError("plain sentences must have at least one token")
        n = rng.randint(1, min(max_parts, len(tokens)))
        sizes = partition_sizes(len(tokens), n)
        idx = rng.randrange(n)
        start = sum(sizes[:idx])
        end = start + sizes[idx]
        out.append(
            InfillTrainingExample(
                masked_text=tokens[:start] + [mask_token] + tokens[end:],
                target=tokens[start:end],
                mask_token=mask_token,
            )
        )
    return out
