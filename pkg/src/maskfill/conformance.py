"""Shared contract checks that every infilling/scoring backend must pass.

Run check_backend_contract against any backend object (native n-gram, remote
client, stub); run check_remote_protocol against a live endpoint to verify
the wire-level conventions on top. Checks raise AssertionError on violation.
"""

from .infill.base import InfillRequest, infill, score
from .seeding import derive_rng

_REQUEST_SENTENCES = [
    ["the", "[MASK]", "sat", "down"],
    ["officials", "met", "reporters", "[MASK]"],
    ["[MASK]", "again", "."],
]


def _candidate_lists_equal(a, b) -> bool:
    return [(c.tokens, c.score) for c in a] == [(c.tokens, c.score) for c in b]


def check_backend_contract(backend, seed: int = 1234) -> None:
    """Candidate bounds, ordering, determinism, and score conventions."""
    for sent in _REQUEST_SENTENCES:
        for k, max_len in ((1, 1), (3, 4), (5, 10)):
            req = InfillRequest(tokens_with_mask=list(sent), num_candidates=k, max_fill_len=max_len)
            candidates = infill(backend, req, derive_rng(seed, tuple(sent), k))
            assert 1 <= len(candidates) <= k, f"got {len(candidates)} candidates for k={k}"
            for cand in candidates:
                assert 1 <= len(cand.tokens) <= max_len, f"fill length {len(cand.tokens)}"
                assert req.mask_token not in cand.tokens, "fill contains the placeholder"
                assert cand.score <= 0, f"positive score {cand.score}"
            scores = [c.score for c in candidates]
            assert scores == sorted(scores, reverse=True), "scores not descending"
            again = infill(backend, req, derive_rng(seed, tuple(sent), k))
            assert _candidate_lists_equal(candidates, again), "same seed, different candidates"

    assert score(backend, []) == 0.0, "score of empty sequence must be 0"
    texts = [["the", "cat", "sat"], ["officials", "met", "again", "."], ["nearby"]]
    for tokens in texts:
        nll = score(backend, tokens)
        assert nll >= 0, f"negative nll {nll}"
        assert nll == score(backend, tokens), "score not deterministic"
    a, b = texts[0], texts[1]
    tau_ab = score(backend, a) - score(backend, b)
    tau_ba = score(backend, b) - score(backend, a)
    assert abs(tau_ab + tau_ba) < 1e-9, "loss delta not antisymmetric"


def check_remote_protocol(endpoint: str) -> None:
    """Wire-level conventions: health body, canonical shapes, 400 on bad input."""
    import requests

    endpoint = endpoint.rstrip("/")
    health = requests.get(endpoint + "/health", timeout=10)
    assert health.status_code == 200, f"/health -> {health.status_code}"
    body = health.json()
    assert body.get("status") == "ok" and "model_id" in body, f"/health body {body!r}"

    resp = requests.post(
        endpoint + "/infill",
        data=b"{not json",
        headers={"Content-Type": "application/json"},
        timeout=10,
    )
    assert resp.status_code == 400, f"malformed /infill body -> {resp.status_code}, want 400"
    resp = requests.post(endpoint + "/infill", json={"wrong": "fields"}, timeout=10)
    assert resp.status_code == 400, f"invalid /infill fields -> {resp.status_code}, want 400"

    resp = requests.post(
        endpoint + "/infill",
        json={
            "tokens_with_mask": ["the", "[MASK]", "sat"],
            "mask_token": "[MASK]",
            "num_candidates": 3,
            "max_fill_len": 4,
            "top_k": 100,
            "top_p": 0.7,
            "beam_size": 5,
            "seed": 7,
        },
        timeout=10,
    )
    assert resp.status_code == 200, f"/infill -> {resp.status_code}"
    candidates = resp.json()["candidates"]
    assert 1 <= len(candidates) <= 3
    scores = [c["score"] for c in candidates]
    assert scores == sorted(scores, reverse=True), "candidate scores not descending"
    for cand in candidates:
        assert 1 <= len(cand["tokens"]) <= 4

    resp = requests.post(endpoint + "/score", json={"tokens": []}, timeout=10)
    assert resp.status_code == 200 and resp.json()["neg_log_likelihood"] == 0.0
    resp = requests.post(endpoint + "/score", json={"tokens": ["a", "b"]}, timeout=10)
    assert resp.status_code == 200 and resp.json()["neg_log_likelihood"] >= 0.0
