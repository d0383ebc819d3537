"""Pure-Python sampling kernels.

Reference semantics for the compiled extension: the two implementations must
perform the same floating-point operations in the same order so that seeded
runs are byte-identical whichever one is loaded.
"""

import numpy as np


def truncated_probs(counts, add_k: float, top_k: int, top_p: float):
    """Smoothed next-token distribution after top-k then top-p truncation.

    counts: dense int64 vector over the support; negative entries mark
    excluded tokens. top_k <= 0 disables the top-k cut. Returns a float64
    vector renormalized over the kept set (zeros elsewhere); all zeros when
    no token has positive smoothed mass.
    """
    cl = [int(c) for c in counts]
    n = len(cl)
    out = np.zeros(n, dtype=np.float64)
    denom = 0.0
    for c in cl:
        if c >= 0:
            denom += c + add_k
    if denom <= 0.0:
        return out
    order = sorted((i for i in range(n) if cl[i] >= 0), key=lambda i: (-cl[i], i))
    if top_k > 0:
        order = order[:top_k]
    kept = []
    mass = 0.0
    for i in order:
        p = (cl[i] + add_k) / denom
        if p <= 0.0:
            break  # sorted by count: everything after is zero mass too
        kept.append(i)
        mass += p
        if mass >= top_p:
            break
    if mass <= 0.0:
        return out
    for i in kept:
        out[i] = ((cl[i] + add_k) / denom) / mass
    return out


def sample_index(probs, u: float) -> int:
    """Draw an index by cumulative walk in ascending index order.

    u is a uniform draw in [0, 1). Returns -1 when the vector has no mass;
    rounding that leaves u past the accumulated total falls back to the last
    positive index.
    """
    acc = 0.0
    last = -1
    for i, p in enumerate(probs):
        p = float(p)
        if p > 0.0:
            acc += p
            last = i
            if u < acc:
                return i
    return last
