"""Model implementations behind the serving shim.

A model provides:
    model_id -> str
    infill(left, right, k, max_fill_len, top_k, top_p, beam_size, seed)
        -> list of (tokens, score), scores <= 0 descending
    score(tokens) -> total negative log-likelihood in nats (0 for [])
"""

import hashlib
import random


def _stable_seed(*parts) -> int:
    material = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


class StubModel:
    """Deterministic rule-based model for integration tests without weights.

    Fills come from a fixed adjunct word list; everything is a pure function
    of the request fields and the seed.
    """

    model_id = "stub"

    FILLERS = [
        "quietly", "reportedly", "meanwhile", "nearby", "afterwards",
        "together", "apparently", "slowly", "again", "eventually",
    ]

    def infill(self, left, right, k, max_fill_len, top_k, top_p, beam_size, seed):
        rng = random.Random(_stable_seed("infill", seed, tuple(left), tuple(right)))
        seen = set()
        fills = []
        for _ in range(4 * k + 8):
            if len(fills) == k:
                break
            length = rng.randint(1, min(max_fill_len, 3))
            fill = tuple(rng.choice(self.FILLERS) for _ in range(length))
            if fill not in seen:
                seen.add(fill)
                fills.append(list(fill))
        return [
            (fill, -0.25 * (i + 1) - 0.01 * len(fill)) for i, fill in enumerate(fills)
        ]

    def score(self, tokens):
        # one stable pseudo-loss unit per token, in [0.5, 1.5) nats
        return sum(0.5 + (_stable_seed("score", t) % 1000) / 1000.0 for t in tokens)


class T5Model:
    """Wrapper around an already-fine-tuned seq2seq infilling model.

    The model is expected to have been fine-tuned on masked examples in the
    format produced by `maskfill gen-infill-data` (one placeholder per input,
    target = the held-out span). Heavy imports are deferred so the stub path
    never touches them.
    """

    def __init__(self, model_path: str, device: str = "cpu"):
        import torch
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self._torch = torch
        self.model_id = model_path
        self.tokenizer = AutoTokenizer.from_pretrained(model_path)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(model_path).to(device)
        self.model.eval()
        self.device = device

    def _sentinel(self) -> str:
        return "<extra_id_0>"

    def infill(self, left, right, k, max_fill_len, top_k, top_p, beam_size, seed):
        torch = self._torch
        text = " ".join(left + [self._sentinel()] + right)
        inputs = self.tokenizer(text, return_tensors="pt").to(self.device)
        torch.manual_seed(seed)
        with torch.no_grad():
            out = self.model.generate(
                **inputs,
                do_sample=top_k > 1 or top_p < 1.0,
                top_k=top_k,
                top_p=top_p,
                num_beams=1 if top_k > 1 else beam_size,
                num_return_sequences=k,
                max_new_tokens=max_fill_len + 8,
                output_scores=True,
                return_dict_in_generate=True,
            )
        scores = self.model.compute_transition_scores(
            out.sequences, out.scores, normalize_logits=True
        )
        results = []
        for seq, transition in zip(out.sequences, scores):
            decoded = self.tokenizer.decode(seq, skip_special_tokens=False)
            span = decoded.split("<extra_id_0>")[-1].split("<extra_id_1>")[0]
            tokens = span.replace("</s>", "").replace("<pad>", "").split()[:max_fill_len]
            if tokens:
                total = float(transition[transition.isfinite()].sum())
                results.append((tokens, min(total, 0.0)))
        deduped = {}
        for tokens, logp in results:
            key = tuple(tokens)
            if key not in deduped or logp > deduped[key]:
                deduped[key] = logp
        ranked = sorted(deduped.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(list(tokens), logp) for tokens, logp in ranked[:k]]

    def score(self, tokens):
        torch = self._torch
        if not tokens:
            return 0.0
        text = " ".join(tokens)
        inputs = self.tokenizer(text, return_tensors="pt").to(self.device)
        labels = inputs["input_ids"]
        with torch.no_grad():
            loss = self.model(**inputs, labels=labels).loss
        return max(float(loss) * labels.shape[1], 0.0)


def load_model(model_spec: str, stub: bool):
    if stub:
        return StubModel()
    return T5Model(model_spec)
