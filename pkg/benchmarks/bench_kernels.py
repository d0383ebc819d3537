"""Benchmark the compiled sampling kernel against the pure-Python fallback.

Micro-benchmarks the truncate+sample step over realistic vocabulary sizes,
then times an end-to-end corpus augmentation with each kernel.

    python benchmarks/bench_kernels.py [--iters 20000] [--vocab 2000]
"""

import argparse
import random
import time

import numpy as np

from maskfill.augment import FillFilterConfig, augment_corpus, harvest_trigger_lexemes
from maskfill.infill import NgramBackend, train_ngram
from maskfill.kernels import _pysampling

try:
    from maskfill.kernels import _csampling
except ImportError:
    _csampling = None


def micro(impl, counts_pool, us, top_k, top_p):
    started = time.perf_counter()
    for counts, u in zip(counts_pool, us):
        probs = impl.truncated_probs(counts, 0.01, top_k, top_p)
        impl.sample_index(probs, u)
    return time.perf_counter() - started


def end_to_end(workload):
    corpus, backend, cfg = workload
    started = time.perf_counter()
    outputs = augment_corpus(corpus, backend, n_aug=5, cfg=cfg, seed=99)
    return time.perf_counter() - started, len(outputs)


def build_workload():
    import sys
    from pathlib import Path

    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
    from fixtures import make_fixture_corpus, make_plain_sentences

    corpus = make_fixture_corpus(300, seed=1)
    backend = NgramBackend(train_ngram(make_plain_sentences(500, seed=2), order=2))
    cfg = FillFilterConfig(banned_lexemes=harvest_trigger_lexemes(corpus))
    return corpus, backend, cfg


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=20000)
    parser.add_argument("--vocab", type=int, default=2000)
    args = parser.parse_args()

    rng = random.Random(0)
    counts_pool = [
        np.array([rng.choice([0, 0, 0, 1, 2, 8, 50]) for _ in range(args.vocab)], dtype=np.int64)
        for _ in range(64)
    ] * (args.iters // 64 + 1)
    counts_pool = counts_pool[: args.iters]
    us = [rng.random() for _ in range(args.iters)]

    print(f"micro: {args.iters} truncate+sample calls over vocab={args.vocab} (top_k=100 top_p=0.7)")
    t_py = micro(_pysampling, counts_pool, us, 100, 0.7)
    print(f"  pure python : {t_py:8.3f}s  ({args.iters / t_py:9.0f} calls/s)")
    if _csampling is not None:
        t_cy = micro(_csampling, counts_pool, us, 100, 0.7)
        print(f"  cython      : {t_cy:8.3f}s  ({args.iters / t_cy:9.0f} calls/s)")
        print(f"  speedup     : {t_py / t_cy:8.1f}x")
    else:
        print("  cython      : extension not built")

    workload = build_workload()
    print("end-to-end: 300-sample corpus, n_aug=5")
    import maskfill.kernels as kernels

    for name, impl in (("pure python", _pysampling), ("cython", _csampling)):
        if impl is None:
            continue
        kernels.truncated_probs = impl.truncated_probs
        kernels.sample_index = impl.sample_index
        elapsed, n_out = end_to_end(workload)
        print(f"  {name:<12}: {elapsed:8.3f}s  ({n_out} augmented samples)")


if __name__ == "__main__":
    main()
