"""Infiller/scorer abstraction shared by the native and remote backends.

A backend provides:
    infill_candidates(req, rng) -> list[InfillCandidate]
    score_tokens(tokens) -> float        # total negative log-likelihood, nats
    backend_id -> str

Use the module-level infill() / score() wrappers, which enforce the operation
contracts (candidate bounds, descending scores, score conventions) uniformly.
"""

import random
from dataclasses import dataclass, field

from ..fragmenter import MASK_TOKEN

# Defaults mirroring the infilling setup this pipeline targets.
DEFAULT_TOP_K = 100
DEFAULT_TOP_P = 0.7
DEFAULT_BEAM_SIZE = 5


class BackendUnavailable(Exception):
    """The remote infilling/scoring service failed or answered garbage."""


class NoCandidate(Exception):
    """The backend cannot produce any legal fill for this request."""


@dataclass
class InfillRequest:
    tokens_with_mask: list[str]
    num_candidates: int = 1
    max_fill_len: int = 10
    top_k: int = DEFAULT_TOP_K
    top_p: float = DEFAULT_TOP_P
    beam_size: int = DEFAULT_BEAM_SIZE  # passed through to remote backends
    mask_token: str = MASK_TOKEN

    def __post_init__(self):
        n_masks = sum(1 for t in self.tokens_with_mask if t == self.mask_token)
        if n_masks != 1:
            raise ValueError(f"request must contain exactly one {self.mask_token!r}, got {n_masks}")
        if self.num_candidates < 1:
            raise ValueError("num_candidates must be >= 1")
        if self.max_fill_len < 1:
            raise ValueError("max_fill_len must be >= 1")
        if not (0.0 < self.top_p <= 1.0):
            raise ValueError("top_p must be in (0, 1]")

    def left_right(self) -> tuple[list[str], list[str]]:
        i = self.tokens_with_mask.index(self.mask_token)
        return self.tokens_with_mask[:i], self.tokens_with_mask[i + 1 :]


@dataclass
class InfillCandidate:
    tokens: list[str]
    score: float  # log-probability, <= 0, higher is better


def validate_candidate(cand: InfillCandidate, req: InfillRequest) -> None:
    if not (1 <= len(cand.tokens) <= req.max_fill_len):
        raise ValueError(f"candidate length {len(cand.tokens)} outside [1,{req.max_fill_len}]")
    if req.mask_token in cand.tokens:
        raise ValueError("candidate contains the mask placeholder")
    if cand.score > 0:
        raise ValueError(f"candidate score {cand.score} must be <= 0")


def infill(backend, req: InfillRequest, rng: random.Random) -> list[InfillCandidate]:
    """Between 1 and num_candidates legal candidates, sorted by score descending."""
    candidates = backend.infill_candidates(req, rng)
    if not candidates:
        raise NoCandidate(f"backend {backend.backend_id!r} produced no candidate")
    if len(candidates) > req.num_candidates:
        raise ValueError(
            f"backend {backend.backend_id!r} returned {len(candidates)} > "
            f"{req.num_candidates} candidates"
        )
    for cand in candidates:
        validate_candidate(cand, req)
    return sorted(candidates, key=lambda c: (-c.score, c.tokens))


def score(backend, tokens: list[str]) -> float:
    """Total negative log-likelihood of the token sequence, in nats; 0 for []."""
    if not tokens:
        return 0.0
    nll = float(backend.score_tokens(tokens))
    if nll < 0:
        raise ValueError(f"backend {backend.backend_id!r} returned negative nll {nll}")
    return nll


@dataclass
class FixedBackend:
    """Test/stub backend returning a fixed candidate list for every request."""

    fills: list[InfillCandidate] = field(
        default_factory=lambda: [InfillCandidate(tokens=[","], score=0.0)]
    )
    nll_per_token: float = 1.0
    backend_id: str = "fixed"

    def infill_candidates(self, req, rng):
        return [
            InfillCandidate(tokens=list(c.tokens), score=c.score)
            for c in self.fills[: req.num_candidates]
        ]

    def score_tokens(self, tokens):
        return self.nll_per_token * len(tokens)
