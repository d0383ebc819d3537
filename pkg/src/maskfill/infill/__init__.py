from .base import (
    DEFAULT_BEAM_SIZE,
    DEFAULT_TOP_K,
    DEFAULT_TOP_P,
    BackendUnavailable,
    FixedBackend,
    InfillCandidate,
    InfillRequest,
    NoCandidate,
    infill,
    score,
)
from .ngram import (
    BOS,
    EOS,
    UNK,
    NgramBackend,
    NgramModel,
    ngram_generate_fill,
    ngram_score,
    train_ngram,
)
from .remote import RemoteBackend

__all__ = [
    "BOS",
    "EOS",
    "UNK",
    "DEFAULT_BEAM_SIZE",
    "DEFAULT_TOP_K",
    "DEFAULT_TOP_P",
    "BackendUnavailable",
    "FixedBackend",
    "InfillCandidate",
    "InfillRequest",
    "NgramBackend",
    "NgramModel",
    "NoCandidate",
    "RemoteBackend",
    "infill",
    "ngram_generate_fill",
    "ngram_score",
    "score",
    "train_ngram",
]
