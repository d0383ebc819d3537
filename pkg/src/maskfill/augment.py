"""Mask-then-fill augmentation end to end, plus the rule-based baselines.

Every augmented sample keeps each trigger/argument surface token sequence
verbatim; only adjunct material changes. Offsets to the right of an edit are
shifted by the length difference, offsets to the left are untouched.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .corpus import (
    AnnotatedSample,
    Argument,
    Corpus,
    EventMention,
    Provenance,
    Span,
    validate_sample,
)
from .fragmenter import MASK_TOKEN, MaskedSample, NoEligibleFragment, select_and_mask
from .infill import (
    DEFAULT_BEAM_SIZE,
    DEFAULT_TOP_K,
    DEFAULT_TOP_P,
    BackendUnavailable,
    InfillRequest,
    NoCandidate,
    infill,
)
from .seeding import derive_rng

log = logging.getLogger(__name__)

# Attempts per requested augmentation before giving up on it.
RETRY_BUDGET = 5


class SpanIntersectsMask(Exception):
    """An event span intersects the masked range; the input is corrupted."""


@dataclass
class FillFilterConfig:
    banned_lexemes: set[str] = field(default_factory=set)
    max_fill_len: int = 10
    min_fill_len: int = 1
    mask_token: str = MASK_TOKEN

    def __post_init__(self):
        if not (self.max_fill_len >= self.min_fill_len >= 1):
            raise ValueError("need max_fill_len >= min_fill_len >= 1")


@dataclass
class AugmentedSample:
    sample: AnnotatedSample
    provenance: Provenance


def harvest_trigger_lexemes(corpus: Corpus) -> set[str]:
    """Lowercased trigger surface tokens observed anywhere in the corpus."""
    out: set[str] = set()
    for s in corpus:
        for ev in s.events:
            for tok in s.tokens[ev.trigger.start : ev.trigger.end]:
                out.add(tok.lower())
    return out


def filter_fill(fill: list[str], cfg: FillFilterConfig) -> str | None:
    """Rejection reason, or None when the fill is acceptable."""
    if not (cfg.min_fill_len <= len(fill) <= cfg.max_fill_len):
        return f"length {len(fill)} outside [{cfg.min_fill_len},{cfg.max_fill_len}]"
    if cfg.mask_token in fill:
        return "fill contains the mask placeholder"
    banned = [t for t in fill if t.lower() in cfg.banned_lexemes]
    if banned:
        return f"banned lexeme {banned[0]!r}"
    return None


def _remap_span(span: Span, masked: Span, delta: int, what: str) -> Span:
    if span.end <= masked.start:
        return span
    if span.start >= masked.end:
        return span.shifted(delta)
    raise SpanIntersectsMask(f"{what} [{span.start},{span.end}) intersects masked range")


def fill_and_remap(
    m: MaskedSample,
    fill: list[str],
    method: str = "mask-fill",
    seed: int | None = None,
    backend: str | None = None,
    aug_index: int = 0,
) -> AugmentedSample:
    """Splice the fill over the masked range and shift trailing event offsets."""
    if not fill:
        raise ValueError("fill must contain at least one token")
    if m.mask_token in fill:
        raise ValueError("fill contains the mask placeholder")
    source = m.reconstruct()
    new_tokens = source[: m.masked_range.start] + list(fill) + source[m.masked_range.end :]
    delta = len(fill) - m.masked_range.length
    events = []
    for k, ev in enumerate(m.events):
        events.append(
            EventMention(
                event_type=ev.event_type,
                trigger=_remap_span(ev.trigger, m.masked_range, delta, f"events[{k}].trigger"),
                arguments=[
                    Argument(a.role, _remap_span(a.span, m.masked_range, delta, f"events[{k}].arg"))
                    for a in ev.arguments
                ],
            )
        )
    provenance = Provenance(
        source_id=m.source_id,
        method=method,
        seed=seed,
        masked_range=m.masked_range,
        fill_len=len(fill),
        backend=backend,
    )
    sample = AnnotatedSample(
        id=f"{m.source_id}#aug{aug_index}", tokens=new_tokens, events=events, provenance=provenance
    )
    _check_result(sample, source, m.events)
    return AugmentedSample(sample=sample, provenance=provenance)


def _check_result(sample: AnnotatedSample, source_tokens, source_events) -> None:
    violations = validate_sample(sample)
    if violations:
        raise SpanIntersectsMask(f"augmented sample invalid: {'; '.join(violations)}")
    for ev, src in zip(sample.events, source_events):
        for span, src_span in zip(ev.spans(), src.spans()):
            if sample.tokens[span.start : span.end] != source_tokens[src_span.start : src_span.end]:
                raise SpanIntersectsMask(
                    f"surface changed for span [{src_span.start},{src_span.end})"
                )


def augment_sample(
    s: AnnotatedSample,
    backend,
    n_aug: int,
    cfg: FillFilterConfig,
    rng: random.Random,
    seed: int | None = None,
    top_k: int = DEFAULT_TOP_K,
    top_p: float = DEFAULT_TOP_P,
    beam_size: int = DEFAULT_BEAM_SIZE,
) -> list[AugmentedSample]:
    """Up to n_aug mask-then-fill variants of one sample.

    Each requested variant gets RETRY_BUDGET attempts; fills rejected by the
    filter are discarded and both the fragment and the fill are redrawn. A
    sample with no eligible fragment yields an empty list.
    """
    if n_aug < 1:
        raise ValueError("n_aug must be >= 1")
    master = rng.getrandbits(64)
    out = []
    for j in range(n_aug):
        for attempt in range(RETRY_BUDGET):
            attempt_rng = derive_rng(master, j, attempt)
            try:
                masked = select_and_mask(
                    s, attempt_rng, cfg.min_fill_len, cfg.max_fill_len, cfg.mask_token
                )
            except NoEligibleFragment:
                log.info("sample %s skipped: no eligible adjunct fragment", s.id)
                return out
            req = InfillRequest(
                tokens_with_mask=masked.tokens_with_mask,
                num_candidates=1,
                max_fill_len=cfg.max_fill_len,
                top_k=top_k,
                top_p=top_p,
                beam_size=beam_size,
                mask_token=cfg.mask_token,
            )
            try:
                candidates = infill(backend, req, attempt_rng)
            except NoCandidate:
                continue
            fill = candidates[0].tokens
            reason = filter_fill(fill, cfg)
            if reason is not None:
                log.debug("sample %s aug %d attempt %d rejected: %s", s.id, j, attempt, reason)
                continue
            out.append(
                fill_and_remap(
                    masked,
                    fill,
                    method="mask-fill",
                    seed=seed,
                    backend=getattr(backend, "backend_id", None),
                    aug_index=j,
                )
            )
            break
    return out


def synonym_replacement(
    s: AnnotatedSample,
    lexicon: dict[str, list[str]],
    p_replace: float,
    rng: random.Random,
    seed: int | None = None,
    aug_index: int = 0,
) -> AugmentedSample:
    """Replace adjunct tokens 1-for-1 with a random synonym; spans unchanged.

    One replacement draw per adjunct token regardless of lexicon coverage, so
    the random stream depends only on the sentence shape.
    """
    covered = [False] * len(s.tokens)
    for span in s.event_spans():
        for i in range(span.start, span.end):
            covered[i] = True
    new_tokens = list(s.tokens)
    n_replaced = 0
    for i, tok in enumerate(s.tokens):
        if covered[i]:
            continue
        if rng.random() < p_replace:
            synonyms = lexicon.get(tok.lower())
            if synonyms:
                new_tokens[i] = synonyms[rng.randrange(len(synonyms))]
                n_replaced += 1
    provenance = Provenance(
        source_id=s.id, method="synonym", seed=seed, fill_len=n_replaced, backend="lexicon"
    )
    sample = AnnotatedSample(
        id=f"{s.id}#aug{aug_index}",
        tokens=new_tokens,
        events=[
            EventMention(ev.event_type, ev.trigger, [Argument(a.role, a.span) for a in ev.arguments])
            for ev in s.events
        ],
        provenance=provenance,
    )
    return AugmentedSample(sample=sample, provenance=provenance)


class IdentityTranslator:
    """Round-trip translator stub that returns its input unchanged."""

    translator_id = "identity"

    def translate(self, tokens: list[str]) -> list[str]:
        return list(tokens)


def span_backtranslation(
    s: AnnotatedSample,
    translator,
    rng: random.Random,
    min_len: int = 1,
    max_len: int = 10,
    seed: int | None = None,
    aug_index: int = 0,
    mask_token: str = MASK_TOKEN,
) -> AugmentedSample:
    """Round-trip translate one adjunct fragment and splice the result back."""
    masked = select_and_mask(s, rng, min_len, max_len, mask_token)
    result = translator.translate(list(masked.target))
    if not result:
        raise BackendUnavailable("translator returned an empty fragment")
    return fill_and_remap(
        masked,
        result,
        method="backtranslation",
        seed=seed,
        backend=getattr(translator, "translator_id", type(translator).__name__),
        aug_index=aug_index,
    )


def load_lexicon(path) -> dict[str, list[str]]:
    """Synonym lexicon: one "headword<TAB>syn1,syn2,..." entry per line."""
    out: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise ValueError(f"{path}: line {lineno}: expected 'headword<TAB>synonyms'")
            head, _, rest = line.partition("\t")
            synonyms = [w for w in rest.split(",") if w]
            if not head or not synonyms:
                raise ValueError(f"{path}: line {lineno}: empty headword or synonym list")
            out[head.lower()] = synonyms
    return out


def augment_corpus(
    corpus: Corpus,
    backend,
    n_aug: int,
    cfg: FillFilterConfig,
    seed: int,
    workers: int = 1,
    top_k: int = DEFAULT_TOP_K,
    top_p: float = DEFAULT_TOP_P,
    beam_size: int = DEFAULT_BEAM_SIZE,
) -> list[AugmentedSample]:
    """Augment every sample; output order follows input order regardless of
    scheduling because each sample's random stream is keyed by (seed, id)."""

    def one(sample: AnnotatedSample) -> list[AugmentedSample]:
        return augment_sample(
            sample,
            backend,
            n_aug,
            cfg,
            derive_rng(seed, sample.id),
            seed=seed,
            top_k=top_k,
            top_p=top_p,
            beam_size=beam_size,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            nested = list(pool.map(one, corpus.samples))
    else:
        nested = [one(s) for s in corpus.samples]
    return [aug for group in nested for aug in group]
