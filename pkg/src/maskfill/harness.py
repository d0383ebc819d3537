"""Low-resource experiment scaffolding: deterministic subsampling and split
export with a digest manifest.

Splits tagged role "dev" or "test" are never subsampled: augmentation and
subsetting apply to training data only.
"""

import hashlib
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, encode_record, serialize_corpus, write_atomic

DIGEST_ALGORITHM = "sha256"


class SizeExceedsCorpus(Exception):
    """Requested split size is larger than the corpus."""


class ProtectedSplit(Exception):
    """Refusing to subsample a dev/test split."""


@dataclass
class SplitSpec:
    name: str
    size: int | str  # sample count, or "all"
    seed: int = 0
    role: str = "train"


def subsample(c: Corpus, spec: SplitSpec) -> Corpus:
    """Uniform sample without replacement, original order preserved.

    Implemented as a seeded shuffle of the index range followed by taking the
    first `size` indices in ascending order.
    """
    if spec.size == "all":
        return Corpus(list(c.samples))
    if not isinstance(spec.size, int) or spec.size < 0:
        raise ValueError(f"split {spec.name!r}: size must be a count or 'all'")
    if spec.role in ("dev", "test"):
        raise ProtectedSplit(f"split {spec.name!r} has role {spec.role!r}; only size 'all' allowed")
    if spec.size > len(c):
        raise SizeExceedsCorpus(
            f"split {spec.name!r}: size {spec.size} exceeds corpus of {len(c)}"
        )
    indices = list(range(len(c)))
    random.Random(spec.seed).shuffle(indices)
    chosen = sorted(indices[: spec.size])
    return Corpus([c.samples[i] for i in chosen])


def export_experiment(c: Corpus, specs: list[SplitSpec], out_dir) -> dict:
    """Write one corpus file per split plus a manifest with content digests."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for spec in specs:
        split = subsample(c, spec)
        data = serialize_corpus(split)
        filename = f"{spec.name}.jsonl"
        try:
            write_atomic(out_dir / filename, data)
        except OSError as exc:
            raise OSError(f"failed writing {out_dir / filename}: {exc}") from exc
        entries.append(
            {
                "name": spec.name,
                "size": len(split),
                "seed": spec.seed,
                "role": spec.role,
                "file": filename,
                "digest": hashlib.sha256(data).hexdigest(),
            }
        )
    manifest = {"digest_algorithm": DIGEST_ALGORITHM, "splits": entries}
    write_atomic(out_dir / "manifest.json", encode_record(manifest))
    return manifest
