"""Mask-then-fill data augmentation for span-annotated event corpora.

Masks one adjunct sentence fragment (a maximal token run outside every
trigger/argument span), fills it with a variable-length span from a pluggable
infilling backend, and remaps the event annotations exactly. Also ships the
rule-based baselines, affinity/distinct-n metrics, and a deterministic
low-resource split harness.
"""

from .augment import (
    AugmentedSample,
    FillFilterConfig,
    augment_corpus,
    augment_sample,
    fill_and_remap,
    filter_fill,
    harvest_trigger_lexemes,
    span_backtranslation,
    synonym_replacement,
)
from .corpus import (
    AnnotatedSample,
    Argument,
    Corpus,
    CorpusError,
    EventMention,
    Provenance,
    Span,
    load_corpus,
    parse_corpus,
    save_corpus,
    serialize_corpus,
    validate_sample,
)
from .fragmenter import (
    MASK_TOKEN,
    Fragment,
    InfillTrainingExample,
    MaskedSample,
    NoEligibleFragment,
    compute_adjunct_fragments,
    generate_infill_training_examples,
    select_and_mask,
)
from .harness import SplitSpec, export_experiment, subsample
from .infill import (
    BackendUnavailable,
    FixedBackend,
    InfillCandidate,
    InfillRequest,
    NgramBackend,
    NgramModel,
    NoCandidate,
    RemoteBackend,
    infill,
    score,
    train_ngram,
)
from .metrics import MetricsReport, affinity, dist_n, evaluate_pair_corpus

__version__ = "0.1.0"
