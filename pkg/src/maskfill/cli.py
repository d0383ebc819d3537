"""Command-line entry point exposing the pipeline as subcommands.

Diagnostics go to standard error; data goes to files or standard output.
Configuration precedence: flags > --config file (canonical JSON record) >
built-in defaults. All randomness flows from --seed. The remote endpoint may
also be supplied via the MASKFILL_ENDPOINT environment variable.
"""

import argparse
import json
import logging
import os
import sys

from . import augment as aug_mod
from .corpus import (
    Corpus,
    CorpusError,
    encode_record,
    load_corpus,
    sample_to_record,
    serialize_corpus,
    validate_sample,
    write_atomic,
)
from .fragmenter import (
    MASK_TOKEN,
    NoEligibleFragment,
    compute_adjunct_fragments,
    generate_infill_training_examples,
    select_and_mask,
)
from .harness import ProtectedSplit, SizeExceedsCorpus, SplitSpec, export_experiment
from .infill import (
    DEFAULT_TOP_K,
    DEFAULT_TOP_P,
    BackendUnavailable,
    NgramBackend,
    NgramModel,
    RemoteBackend,
    train_ngram,
)
from .metrics import EmptyInput, OrphanedSample, evaluate_pair_corpus
from .seeding import derive_rng, derive_seed

log = logging.getLogger("maskfill")

USAGE_ERROR = 2
DATA_ERROR = 1


def _write_output(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        write_atomic(path, data)


def _read_plain_sentences(path) -> list[list[str]]:
    sentences = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            tokens = line.split()
            if tokens:
                sentences.append(tokens)
    return sentences


def _make_backend(args):
    if args.backend == "native-ngram":
        if not args.model:
            raise CliDataError("--model is required for the native-ngram backend")
        return NgramBackend(NgramModel.load(args.model))
    endpoint = args.endpoint or os.environ.get("MASKFILL_ENDPOINT")
    if not endpoint:
        raise CliDataError("remote backend needs --endpoint or MASKFILL_ENDPOINT")
    return RemoteBackend(endpoint)


class CliDataError(Exception):
    pass


def cmd_validate(args) -> int:
    corpus = load_corpus(args.infile)
    bad = 0
    for s in corpus:
        for violation in validate_sample(s):
            bad += 1
            log.error("sample %s: %s", s.id, violation)
    if bad:
        raise CliDataError(f"{bad} violation(s) in {args.infile}")
    log.info("%s: %d samples, all valid", args.infile, len(corpus))
    return 0


def cmd_fragments(args) -> int:
    corpus = load_corpus(args.infile)
    lines = []
    for s in corpus:
        spans = [[f.span.start, f.span.end] for f in compute_adjunct_fragments(s)]
        lines.append(encode_record({"id": s.id, "fragments": spans}))
    _write_output(args.out, b"".join(lines))
    return 0


def cmd_mask(args) -> int:
    corpus = load_corpus(args.infile)
    lines = []
    skipped = 0
    for s in corpus:
        try:
            m = select_and_mask(
                s, derive_rng(args.seed, s.id), args.min_len, args.max_len, args.mask_token
            )
        except NoEligibleFragment:
            skipped += 1
            continue
        lines.append(
            encode_record(
                {
                    "source_id": m.source_id,
                    "tokens_with_mask": m.tokens_with_mask,
                    "masked_range": [m.masked_range.start, m.masked_range.end],
                    "target": m.target,
                }
            )
        )
    if skipped:
        log.info("skipped %d sample(s) with no eligible fragment", skipped)
    _write_output(args.out, b"".join(lines))
    return 0


def cmd_gen_infill_data(args) -> int:
    sentences = _read_plain_sentences(args.text)
    examples = generate_infill_training_examples(
        sentences, derive_rng(args.seed, "gen-infill-data"), mask_token=args.mask_token
    )
    lines = [
        encode_record({"masked_text": e.masked_text, "target": e.target}) for e in examples
    ]
    _write_output(args.out, b"".join(lines))
    return 0


def cmd_train_ngram(args) -> int:
    sentences = _read_plain_sentences(args.text)
    if not sentences:
        raise CliDataError(f"{args.text}: no sentences")
    model = train_ngram(sentences, order=args.order, add_k=args.smoothing)
    model.save(args.out)
    log.info(
        "trained order-%d model: %d vocabulary tokens, %d contexts",
        model.order,
        len(model.vocabulary),
        len(model.counts),
    )
    return 0


def cmd_augment(args) -> int:
    corpus = load_corpus(args.infile)
    backend = _make_backend(args)
    cfg = aug_mod.FillFilterConfig(
        banned_lexemes=aug_mod.harvest_trigger_lexemes(corpus),
        max_fill_len=args.max_fill_len,
        min_fill_len=args.min_fill_len,
        mask_token=args.mask_token,
    )
    results = aug_mod.augment_corpus(
        corpus,
        backend,
        args.n_aug,
        cfg,
        seed=args.seed,
        workers=args.workers,
        top_k=args.top_k,
        top_p=args.top_p,
    )
    out = Corpus([r.sample for r in results])
    _write_output(args.out, serialize_corpus(out))
    log.info("augmented %d samples into %d outputs", len(corpus), len(out))
    return 0


def cmd_baseline(args) -> int:
    corpus = load_corpus(args.infile)
    results = []
    if args.method == "synonym":
        lexicon = aug_mod.load_lexicon(args.lexicon)
        for s in corpus:
            for j in range(args.n_aug):
                results.append(
                    aug_mod.synonym_replacement(
                        s, lexicon, args.p_replace, derive_rng(args.seed, s.id, j),
                        seed=args.seed, aug_index=j,
                    )
                )
    else:  # backtranslate
        if args.translator != "identity":
            raise CliDataError(f"unknown translator {args.translator!r}")
        translator = aug_mod.IdentityTranslator()
        for s in corpus:
            for j in range(args.n_aug):
                try:
                    results.append(
                        aug_mod.span_backtranslation(
                            s, translator, derive_rng(args.seed, s.id, j),
                            min_len=args.min_len, max_len=args.max_len,
                            seed=args.seed, aug_index=j,
                        )
                    )
                except NoEligibleFragment:
                    log.info("sample %s skipped: no eligible adjunct fragment", s.id)
                    break
                except BackendUnavailable as exc:
                    log.warning("sample %s skipped: translator unavailable (%s)", s.id, exc)
                    break
    out = Corpus([r.sample for r in results])
    _write_output(args.out, serialize_corpus(out))
    return 0


def cmd_metrics(args) -> int:
    orig = load_corpus(args.orig)
    augmented = load_corpus(args.aug)
    if args.scorer == "native-ngram":
        if not args.model:
            raise CliDataError("--model is required for the native-ngram scorer")
        scorer = NgramBackend(NgramModel.load(args.model))
    else:
        endpoint = args.endpoint or os.environ.get("MASKFILL_ENDPOINT")
        if not endpoint:
            raise CliDataError("remote scorer needs --endpoint or MASKFILL_ENDPOINT")
        scorer = RemoteBackend(endpoint)
    report = evaluate_pair_corpus(orig, augmented, scorer)
    _write_output(args.out, report.encode())
    if args.table:
        print(report.table())
    return 0


def cmd_subsample(args) -> int:
    corpus = load_corpus(args.infile)
    specs = []
    for raw in args.split:
        name, _, size_part = raw.partition("=")
        if not name or not size_part:
            raise CliDataError(f"--split {raw!r}: expected NAME=SIZE or NAME=SIZE@SEED")
        size_str, _, seed_str = size_part.partition("@")
        size = "all" if size_str == "all" else int(size_str)
        seed = int(seed_str) if seed_str else derive_seed(args.seed, name)
        specs.append(SplitSpec(name=name, size=size, seed=seed))
    manifest = export_experiment(corpus, specs, args.out_dir)
    for entry in manifest["splits"]:
        log.info("split %s: %d samples -> %s", entry["name"], entry["size"], entry["file"])
    sys.stdout.buffer.write(encode_record(manifest))
    return 0


def _load_config(path) -> dict:
    with open(path, encoding="utf-8") as f:
        cfg = json.load(f)
    if not isinstance(cfg, dict):
        raise CliDataError(f"{path}: config must be a JSON object")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maskfill",
        description="Mask-then-fill data augmentation for event-extraction corpora.",
    )
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--log-level", default="INFO", help="logging level (stderr)")
    sub = parser.add_subparsers(dest="command", required=True)
    parser._maskfill_subparsers = {}

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        p.set_defaults(func=func)
        parser._maskfill_subparsers[name] = p
        return p

    p = add("validate", cmd_validate, "validate a corpus file")
    p.add_argument("--in", dest="infile", required=True, help="corpus file")

    p = add("fragments", cmd_fragments, "emit adjunct fragments per sample")
    p.add_argument("--in", dest="infile", required=True, help="corpus file")
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")

    p = add("mask", cmd_mask, "mask one adjunct fragment per sample")
    p.add_argument("--in", dest="infile", required=True, help="corpus file")
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--seed", type=int, default=0, help="global random seed")
    p.add_argument("--min-len", type=int, default=1, help="minimum maskable fragment length")
    p.add_argument("--max-len", type=int, default=10, help="maximum maskable fragment length")
    p.add_argument("--mask-token", default=MASK_TOKEN, help="mask placeholder token")

    p = add("gen-infill-data", cmd_gen_infill_data, "build infilling training examples")
    p.add_argument("--text", required=True, help="plain text, one whitespace-tokenized sentence per line")
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--seed", type=int, default=0, help="global random seed")
    p.add_argument("--mask-token", default=MASK_TOKEN, help="mask placeholder token")

    p = add("train-ngram", cmd_train_ngram, "train the native n-gram infilling model")
    p.add_argument("--text", required=True, help="plain text, one whitespace-tokenized sentence per line")
    p.add_argument("--out", required=True, help="model output path")
    p.add_argument("--order", type=int, default=2, help="n-gram order")
    p.add_argument("--smoothing", type=float, default=0.01, help="add-k smoothing constant")

    p = add("augment", cmd_augment, "mask-then-fill augmentation of a corpus")
    p.add_argument("--in", dest="infile", required=True, help="corpus file")
    p.add_argument("--out", default="-", help="augmented corpus output ('-' for stdout)")
    p.add_argument("--backend", choices=["native-ngram", "remote"], default="native-ngram")
    p.add_argument("--model", help="n-gram model path (native backend)")
    p.add_argument("--endpoint", help="remote service URL (or MASKFILL_ENDPOINT)")
    p.add_argument("--n-aug", type=int, default=1, help="augmentations per sample (grid {1,3,6,10})")
    p.add_argument("--seed", type=int, default=0, help="global random seed")
    p.add_argument("--top-k", type=int, default=DEFAULT_TOP_K, help="top-k sampling cutoff")
    p.add_argument("--top-p", type=float, default=DEFAULT_TOP_P, help="nucleus sampling mass")
    p.add_argument("--max-fill-len", type=int, default=10, help="maximum fill length")
    p.add_argument("--min-fill-len", type=int, default=1, help="minimum fill length")
    p.add_argument("--mask-token", default=MASK_TOKEN, help="mask placeholder token")
    p.add_argument("--workers", type=int, default=1, help="concurrent samples")

    p = add("baseline", cmd_baseline, "rule-based augmentation baselines")
    p.add_argument("method", choices=["synonym", "backtranslate"])
    p.add_argument("--in", dest="infile", required=True, help="corpus file")
    p.add_argument("--out", default="-", help="augmented corpus output ('-' for stdout)")
    p.add_argument("--n-aug", type=int, default=1, help="augmentations per sample")
    p.add_argument("--seed", type=int, default=0, help="global random seed")
    p.add_argument("--lexicon", help="synonym lexicon (headword<TAB>syn1,syn2)")
    p.add_argument("--p-replace", type=float, default=0.1, help="per-token replacement probability")
    p.add_argument("--translator", default="identity", help="round-trip translator")
    p.add_argument("--min-len", type=int, default=1, help="minimum fragment length")
    p.add_argument("--max-len", type=int, default=10, help="maximum fragment length")

    p = add("metrics", cmd_metrics, "affinity and distinct-n over a corpus pair")
    p.add_argument("--orig", required=True, help="original corpus file")
    p.add_argument("--aug", required=True, help="augmented corpus file")
    p.add_argument("--scorer", choices=["native-ngram", "remote"], default="native-ngram")
    p.add_argument("--model", help="n-gram model path (native scorer)")
    p.add_argument("--endpoint", help="remote service URL (or MASKFILL_ENDPOINT)")
    p.add_argument("--out", default="-", help="report output ('-' for stdout)")
    p.add_argument("--table", action="store_true", help="also print an aligned table")

    p = add("subsample", cmd_subsample, "export low-resource splits with a manifest")
    p.add_argument("--in", dest="infile", required=True, help="corpus file")
    p.add_argument("--out-dir", required=True, help="output directory")
    p.add_argument(
        "--split",
        action="append",
        required=True,
        metavar="NAME=SIZE[@SEED]",
        help="split spec; SIZE is a count or 'all' (repeatable)",
    )
    p.add_argument("--seed", type=int, default=0, help="base seed for splits without @SEED")

    return parser


def _apply_config(parser, config: dict) -> None:
    """Install config values as parser defaults so explicit flags still win.

    Subparser defaults shadow set_defaults on the parent, so the values are
    pushed into every subparser that owns the key. Config keys use argparse
    dest names (--n-aug -> n_aug; --in -> infile).
    """
    consumed = set()
    for sp in parser._maskfill_subparsers.values():
        applicable = {}
        for action in sp._actions:
            if action.dest in config:
                applicable[action.dest] = config[action.dest]
                action.required = False  # satisfied by the config value
        if applicable:
            sp.set_defaults(**applicable)
            consumed.update(applicable)
    unknown = set(config) - consumed
    if unknown:
        raise CliDataError(f"config keys not recognized: {sorted(unknown)}")


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("--log-level", default="INFO")
    known, _ = pre.parse_known_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, str(known.log_level).upper(), logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    parser = build_parser()
    try:
        if known.config:
            _apply_config(parser, _load_config(known.config))
        args = parser.parse_args(argv)
        return args.func(args)
    except (
        CliDataError,
        CorpusError,
        BackendUnavailable,
        EmptyInput,
        OrphanedSample,
        SizeExceedsCorpus,
        ProtectedSplit,
        FileNotFoundError,
        ValueError,
        OSError,
    ) as exc:
        log.error("%s", exc)
        return DATA_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
