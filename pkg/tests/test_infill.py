import math
import random

import numpy as np
import pytest

from maskfill.infill import (
    EOS,
    FixedBackend,
    InfillCandidate,
    InfillRequest,
    NgramBackend,
    NoCandidate,
    infill,
    ngram_generate_fill,
    ngram_score,
    score,
    train_ngram,
)
from maskfill.infill.ngram import NgramModel
from maskfill.seeding import derive_rng


def ctx_ids(model, *tokens):
    return tuple(model.bos_id if t == "<s>" else model.token_id(t) for t in tokens)


def test_train_hand_counts():
    model = train_ngram([["a", "b"]], order=2, add_k=0.0)
    assert model.counts == {
        ctx_ids(model, "<s>"): {model.token_id("a"): 1},
        ctx_ids(model, "a"): {model.token_id("b"): 1},
        ctx_ids(model, "b"): {model.eos_id: 1},
    }
    assert model.vocabulary == {"a", "b"}


def test_duplicate_sentence_doubles_counts():
    one = train_ngram([["a", "b"]], order=2)
    two = train_ngram([["a", "b"], ["a", "b"]], order=2)
    for ctx, row in one.counts.items():
        assert two.counts[ctx] == {t: 2 * c for t, c in row.items()}


def test_train_rejects_bad_input():
    with pytest.raises(ValueError, match="order"):
        train_ngram([["a"]], order=1)
    with pytest.raises(ValueError, match="empty"):
        train_ngram([], order=2)


def test_model_round_trip_identical_outputs(tmp_path):
    model = train_ngram([["the", "cat", "sat"], ["the", "dog", "sat"]], order=2)
    path = tmp_path / "model.json"
    model.save(path)
    reloaded = NgramModel.load(path)
    assert reloaded.serialize() == model.serialize()
    req = InfillRequest(["the", "[MASK]", "sat"], num_candidates=2, max_fill_len=2)
    a = infill(NgramBackend(model), req, derive_rng(5))
    b = infill(NgramBackend(reloaded), req, derive_rng(5))
    assert [(c.tokens, c.score) for c in a] == [(c.tokens, c.score) for c in b]


def test_cat_dog_infill():
    model = train_ngram([["the", "cat", "sat"], ["the", "dog", "sat"]], order=2, add_k=0.01)
    req = InfillRequest(["the", "[MASK]", "sat"], num_candidates=2, max_fill_len=1)
    candidates = infill(NgramBackend(model), req, derive_rng(7))
    assert {tuple(c.tokens) for c in candidates} == {("cat",), ("dog",)}
    # both fills see identical contexts, so their scores tie
    assert candidates[0].score == pytest.approx(candidates[1].score)
    assert candidates[0].score <= 0


def test_single_continuation_greedy():
    model = train_ngram([["a", "b", "c"]], order=2, add_k=0.01)
    cand = ngram_generate_fill(model, ["a"], ["c"], max_len=1, top_k=1, top_p=1.0,
                               rng=derive_rng(0))
    assert cand.tokens == ["b"]
    # hand-checked score: log p(b|a) + log p(c|b), smoothed over 5 support tokens
    p_b = (1 + 0.01) / (1 + 0.01 * 5)
    p_c = (1 + 0.01) / (1 + 0.01 * 5)
    assert cand.score == pytest.approx(math.log(p_b) + math.log(p_c))


def test_top_k_1_always_greedy():
    sentences = [["x", "y", "z"]] * 5 + [["x", "q", "z"]]
    model = train_ngram(sentences, order=2, add_k=0.01)
    backend = NgramBackend(model)
    req = InfillRequest(["x", "[MASK]"], num_candidates=4, max_fill_len=3, top_k=1, top_p=1.0)
    for seed in range(10):
        candidates = infill(backend, req, derive_rng(seed))
        # the greedy chain is unique, so dedup collapses everything to one fill
        assert len(candidates) == 1
        assert candidates[0].tokens == ["y", "z"]


def test_max_len_bounds_fill_length(ngram_backend):
    req = InfillRequest(["the", "[MASK]", "."], num_candidates=5, max_fill_len=1)
    for seed in range(5):
        for cand in infill(ngram_backend, req, derive_rng(seed)):
            assert len(cand.tokens) == 1


def test_same_seed_same_candidates(ngram_backend):
    req = InfillRequest(["officials", "[MASK]", "."], num_candidates=3, max_fill_len=4)
    a = infill(ngram_backend, req, derive_rng(42))
    b = infill(ngram_backend, req, derive_rng(42))
    assert [(c.tokens, c.score) for c in a] == [(c.tokens, c.score) for c in b]


def test_candidates_sorted_and_bounded(ngram_backend):
    req = InfillRequest(["the", "[MASK]", "said", "."], num_candidates=6, max_fill_len=5)
    candidates = infill(ngram_backend, req, derive_rng(3))
    assert 1 <= len(candidates) <= 6
    scores = [c.score for c in candidates]
    assert scores == sorted(scores, reverse=True)
    for c in candidates:
        assert c.score <= 0
        assert 1 <= len(c.tokens) <= 5
        assert "[MASK]" not in c.tokens
        assert EOS not in c.tokens


def test_no_candidate_on_zero_mass():
    model = train_ngram([["a", "b"]], order=2, add_k=0.0)
    with pytest.raises(NoCandidate):
        ngram_generate_fill(model, ["zzz"], [], max_len=2, top_k=10, top_p=1.0,
                            rng=derive_rng(0))


def test_mask_token_in_vocabulary_is_never_emitted():
    # a literal placeholder in the training text must not leak into fills
    model = train_ngram([["a", "[MASK]"], ["a", "[MASK]"], ["a", "b"]], order=2)
    backend = NgramBackend(model)
    req = InfillRequest(["a", "[MASK]"], num_candidates=4, max_fill_len=2)
    for seed in range(20):
        for cand in infill(backend, req, derive_rng(seed)):
            assert "[MASK]" not in cand.tokens


def test_score_conventions():
    model = train_ngram([["a", "b"]], order=2, add_k=0.0)
    backend = NgramBackend(model)
    assert score(backend, []) == 0.0
    # every chain transition has probability 1 under add-0 smoothing
    assert score(backend, ["a", "b"]) == 0.0
    assert ngram_score(model, ["a", "b"]) == 0.0


def test_score_hand_value():
    model = train_ngram([["a", "b"], ["a", "b"], ["a", "c"]], order=2, add_k=0.0)
    # p(a|BOS)=1, p(b|a)=2/3, p(EOS|b)=1
    assert ngram_score(model, ["a", "b"]) == pytest.approx(-math.log(2 / 3))
    # p(c|a)=1/3
    assert ngram_score(model, ["a", "c"]) == pytest.approx(-math.log(1 / 3))


def test_score_deterministic_and_nonnegative(ngram_backend):
    rng = random.Random(8)
    vocab = sorted(ngram_backend.model.vocabulary)
    for _ in range(50):
        tokens = [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
        nll = score(ngram_backend, tokens)
        assert nll >= 0
        assert nll == score(ngram_backend, tokens)


def test_distributions_sum_to_one(ngram_backend):
    model = ngram_backend.model
    rng = random.Random(4)
    contexts = list(model.counts)
    for _ in range(200):
        ctx = contexts[rng.randrange(len(contexts))]
        probs = model.next_token_probs(ctx)
        assert abs(probs.sum() - 1.0) < 1e-9
    # unseen context: smoothing spreads mass uniformly
    unseen = (model.bos_id,) * (model.order - 1)
    probs = model.next_token_probs((model.token_id("nearby"), model.unk_id)[: model.order - 1])
    assert abs(probs.sum() - 1.0) < 1e-9
    assert abs(model.next_token_probs(unseen).sum() - 1.0) < 1e-9


def test_request_validation():
    with pytest.raises(ValueError, match="exactly one"):
        InfillRequest(["a", "b"])
    with pytest.raises(ValueError, match="exactly one"):
        InfillRequest(["[MASK]", "[MASK]"])
    with pytest.raises(ValueError, match="num_candidates"):
        InfillRequest(["[MASK]"], num_candidates=0)
    with pytest.raises(ValueError, match="max_fill_len"):
        InfillRequest(["[MASK]"], max_fill_len=0)
    with pytest.raises(ValueError, match="top_p"):
        InfillRequest(["[MASK]"], top_p=0.0)


def test_fixed_backend_contract():
    backend = FixedBackend()
    req = InfillRequest(["a", "[MASK]", "b"], num_candidates=1)
    [cand] = infill(backend, req, derive_rng(0))
    assert cand.tokens == [","]
    assert cand.score == 0.0


def test_infill_wrapper_rejects_bad_backends():
    class Empty:
        backend_id = "empty"

        def infill_candidates(self, req, rng):
            return []

    class TooMany:
        backend_id = "toomany"

        def infill_candidates(self, req, rng):
            return [InfillCandidate(["x"], 0.0)] * (req.num_candidates + 1)

    req = InfillRequest(["a", "[MASK]"], num_candidates=1)
    with pytest.raises(NoCandidate):
        infill(Empty(), req, derive_rng(0))
    with pytest.raises(ValueError, match="candidates"):
        infill(TooMany(), req, derive_rng(0))


def test_next_token_counts_dense_shape(ngram_backend):
    model = ngram_backend.model
    ctx = next(iter(model.counts))
    dense = model.next_token_counts(ctx)
    assert dense.shape == (len(model.support),)
    assert dense.dtype == np.int64
    assert dense.sum() == sum(model.counts[ctx].values())
