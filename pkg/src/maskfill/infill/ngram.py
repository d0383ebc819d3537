"""Native n-gram infilling model: an offline stand-in for a fine-tuned
sequence-to-sequence infiller.

The model conditions on left context and scores right-context compatibility
with a single lookahead term. Generation samples left-to-right from the
smoothed next-token distribution truncated by top-k then top-p; the heavy
per-step work lives in maskfill.kernels.
"""

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..corpus import write_atomic
from .base import InfillCandidate, InfillRequest, NoCandidate

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


@dataclass
class NgramModel:
    order: int
    add_k: float
    support: list[str]  # next-token support: sorted vocabulary + [EOS, UNK]
    counts: dict[tuple[int, ...], dict[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        self._token_to_id = {t: i for i, t in enumerate(self.support)}
        self.eos_id = self._token_to_id[EOS]
        self.unk_id = self._token_to_id[UNK]
        self.bos_id = len(self.support)  # context-only, never a next token

    @property
    def vocabulary(self) -> set[str]:
        return set(self.support) - {EOS, UNK}

    def token_id(self, token: str) -> int:
        return self._token_to_id.get(token, self.unk_id)

    def context_of(self, ids: list[int]) -> tuple[int, ...]:
        padded = [self.bos_id] * (self.order - 1) + ids
        return tuple(padded[-(self.order - 1) :])

    def next_token_counts(self, ctx: tuple[int, ...]):
        """Dense int64 count vector over the support for one context."""
        dense = np.zeros(len(self.support), dtype=np.int64)
        row = self.counts.get(ctx)
        if row:
            for tok_id, c in row.items():
                dense[tok_id] = c
        return dense

    def next_token_probs(self, ctx: tuple[int, ...]):
        """Full smoothed next-token distribution (sums to 1 when add_k > 0)."""
        dense = self.next_token_counts(ctx)
        denom = float(dense.sum()) + self.add_k * len(self.support)
        if denom <= 0.0:
            return np.zeros(len(self.support), dtype=np.float64)
        return (dense + self.add_k) / denom

    def log_prob(self, ctx: tuple[int, ...], token_id: int) -> float:
        row = self.counts.get(ctx)
        count = row.get(token_id, 0) if row else 0
        total = sum(row.values()) if row else 0
        denom = total + self.add_k * len(self.support)
        if denom <= 0.0:
            return float("-inf")
        p = (count + self.add_k) / denom
        return math.log(p) if p > 0.0 else float("-inf")

    def serialize(self) -> bytes:
        contexts = [
            [list(ctx), sorted(row.items())] for ctx, row in sorted(self.counts.items())
        ]
        return json.dumps(
            {
                "order": self.order,
                "add_k": self.add_k,
                "support": self.support,
                "contexts": contexts,
            },
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
        ).encode("utf-8")

    @classmethod
    def deserialize(cls, data: bytes) -> "NgramModel":
        obj = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
        model = cls(order=obj["order"], add_k=obj["add_k"], support=list(obj["support"]))
        model.counts = {
            tuple(ctx): {int(t): int(c) for t, c in row} for ctx, row in obj["contexts"]
        }
        return model

    def save(self, path) -> None:
        write_atomic(path, self.serialize())

    @classmethod
    def load(cls, path) -> "NgramModel":
        with open(path, "rb") as f:
            return cls.deserialize(f.read())


def train_ngram(
    plain_sentences: list[list[str]], order: int = 2, add_k: float = 0.01
) -> NgramModel:
    """Exact co-occurrence counts with boundary padding."""
    if order < 2:
        raise ValueError("order must be >= 2")
    if not plain_sentences:
        raise ValueError("empty corpus")
    vocab = sorted({tok for sent in plain_sentences for tok in sent})
    model = NgramModel(order=order, add_k=add_k, support=vocab + [EOS, UNK])
    for sent in plain_sentences:
        if not sent:
            raise ValueError("empty sentence in training corpus")
        ids = [model.token_id(t) for t in sent]
        seq = [model.bos_id] * (order - 1) + ids + [model.eos_id]
        for i in range(order - 1, len(seq)):
            ctx = tuple(seq[i - order + 1 : i])
            row = model.counts.setdefault(ctx, {})
            row[seq[i]] = row.get(seq[i], 0) + 1
    return model


def ngram_score(model: NgramModel, tokens: list[str]) -> float:
    """Negative log-likelihood of the sentence chain, including the end-of-
    sentence transition; 0 for the empty sequence by convention."""
    if not tokens:
        return 0.0
    ids = [model.token_id(t) for t in tokens]
    nll = 0.0
    for i, tok_id in enumerate(ids + [model.eos_id]):
        ctx = model.context_of(ids[:i])
        nll -= model.log_prob(ctx, tok_id)
    return nll


def ngram_generate_fill(
    model: NgramModel,
    left_context: list[str],
    right_context: list[str],
    max_len: int,
    top_k: int,
    top_p: float,
    rng: random.Random,
    banned_tokens: tuple[str, ...] = (),
) -> InfillCandidate:
    """Sample one fill left-to-right; score it under the untruncated model plus
    a right-context compatibility term (log-prob of the first right token, or
    of end-of-sentence when the mask is final)."""
    left_ids = [model.token_id(t) for t in left_context]
    banned_ids = {model.token_id(t) for t in banned_tokens if t in model._token_to_id}
    out_ids: list[int] = []
    logp = 0.0
    for step in range(max_len):
        ctx = model.context_of(left_ids + out_ids)
        counts = model.next_token_counts(ctx)
        counts[model.unk_id] = -1  # never emit the unknown marker
        for banned in banned_ids:
            counts[banned] = -1
        if step == 0:
            counts[model.eos_id] = -1  # fills are at least one token long
        probs = kernels.truncated_probs(counts, model.add_k, top_k, top_p)
        idx = kernels.sample_index(probs, rng.random())
        if idx < 0:
            if step == 0:
                raise NoCandidate("every continuation has zero smoothed mass")
            break
        if idx == model.eos_id:
            break
        logp += model.log_prob(ctx, idx)
        out_ids.append(idx)
    ctx = model.context_of(left_ids + out_ids)
    right_id = model.token_id(right_context[0]) if right_context else model.eos_id
    logp += model.log_prob(ctx, right_id)
    return InfillCandidate(tokens=[model.support[i] for i in out_ids], score=logp)


class NgramBackend:
    """Infilling and scoring backed by a trained n-gram model."""

    def __init__(self, model: NgramModel):
        self.model = model

    @property
    def backend_id(self) -> str:
        return f"ngram-{self.model.order}"

    def infill_candidates(self, req: InfillRequest, rng: random.Random):
        left, right = req.left_right()
        budget = max(4 * req.num_candidates, req.num_candidates + 8)
        seen: set[tuple[str, ...]] = set()
        out: list[InfillCandidate] = []
        for _ in range(budget):
            if len(out) == req.num_candidates:
                break
            try:
                cand = ngram_generate_fill(
                    self.model, left, right, req.max_fill_len, req.top_k, req.top_p, rng,
                    banned_tokens=(req.mask_token,),
                )
            except NoCandidate:
                break  # deterministic dead end at the first step; retrying cannot help
            key = tuple(cand.tokens)
            if key not in seen:
                seen.add(key)
                out.append(cand)
        return out

    def score_tokens(self, tokens: list[str]) -> float:
        return ngram_score(self.model, tokens)
