"""Data model and newline-delimited I/O for span-annotated event corpora.

A corpus file is UTF-8, one JSON record per line:

    {"id": "...", "tokens": [...], "events": [{"type": "...",
     "trigger": [start, end], "arguments": [{"role": "...", "span": [s, e]}]}]}

Spans are token ranges, start inclusive / end exclusive, over the pre-tokenized
sentence. Canonical serialization sorts object keys and uses no insignificant
whitespace, so serialize(parse(data)) is byte-identical for canonical input.
Augmented samples carry an extra "provenance" object.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path


class CorpusError(ValueError):
    """Malformed record, duplicate id, or a sample violating an invariant."""


@dataclass(frozen=True)
class Span:
    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    def shifted(self, delta: int) -> "Span":
        return Span(self.start + delta, self.end + delta)

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass
class Argument:
    role: str
    span: Span


@dataclass
class EventMention:
    event_type: str
    trigger: Span
    arguments: list[Argument] = field(default_factory=list)

    def spans(self) -> list[Span]:
        return [self.trigger] + [a.span for a in self.arguments]


@dataclass
class Provenance:
    source_id: str
    method: str
    seed: int | None = None
    masked_range: Span | None = None
    fill_len: int | None = None
    backend: str | None = None


@dataclass
class AnnotatedSample:
    id: str
    tokens: list[str]
    events: list[EventMention] = field(default_factory=list)
    provenance: Provenance | None = None

    def event_spans(self) -> list[Span]:
        return [s for e in self.events for s in e.spans()]


@dataclass
class Corpus:
    samples: list[AnnotatedSample] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def ids(self) -> list[str]:
        return [s.id for s in self.samples]

    def by_id(self) -> dict[str, AnnotatedSample]:
        return {s.id: s for s in self.samples}


def _span_violations(span: Span, where: str, n_tokens: int) -> list[str]:
    out = []
    if not (isinstance(span.start, int) and isinstance(span.end, int)):
        return [f"{where}: span indices must be integers, got [{span.start},{span.end})"]
    if span.start < 0 or span.start >= span.end:
        out.append(f"{where}: empty or inverted span [{span.start},{span.end})")
    if span.end > n_tokens:
        out.append(f"{where}: span [{span.start},{span.end}) out of bounds for {n_tokens} tokens")
    return out


def validate_sample(s: AnnotatedSample) -> list[str]:
    """All invariant violations for one sample; empty list means the sample is valid."""
    out: list[str] = []
    if not s.tokens:
        out.append("tokens: empty token list")
    for i, tok in enumerate(s.tokens):
        if not isinstance(tok, str) or tok == "":
            out.append(f"tokens[{i}]: empty or non-string token")
        elif any(ch.isspace() for ch in tok):
            out.append(f"tokens[{i}]: token contains whitespace: {tok!r}")
    n = len(s.tokens)
    for k, ev in enumerate(s.events):
        if not ev.event_type:
            out.append(f"events[{k}].type: empty event type")
        out.extend(_span_violations(ev.trigger, f"events[{k}].trigger", n))
        for j, arg in enumerate(ev.arguments):
            if not arg.role:
                out.append(f"events[{k}].arguments[{j}].role: empty role")
            out.extend(_span_violations(arg.span, f"events[{k}].arguments[{j}].span", n))
            if ev.trigger.overlaps(arg.span):
                out.append(
                    f"events[{k}]: trigger [{ev.trigger.start},{ev.trigger.end}) overlaps "
                    f"arguments[{j}] [{arg.span.start},{arg.span.end})"
                )
    return out


def _span_from_record(value, where: str) -> Span:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise CorpusError(f"{where}: expected [start, end], got {value!r}")
    return Span(value[0], value[1])


def record_to_sample(rec: dict) -> AnnotatedSample:
    """Build a sample from one decoded record; raises CorpusError on bad shape."""
    if not isinstance(rec, dict):
        raise CorpusError(f"record is not an object: {rec!r}")
    sid = rec.get("id")
    if not isinstance(sid, str) or not sid:
        raise CorpusError("missing or non-string 'id'")
    tokens = rec.get("tokens")
    if not isinstance(tokens, list):
        raise CorpusError(f"sample {sid!r}: 'tokens' must be an array")
    events = []
    for k, ev in enumerate(rec.get("events", [])):
        if not isinstance(ev, dict):
            raise CorpusError(f"sample {sid!r}: events[{k}] is not an object")
        etype = ev.get("type")
        if not isinstance(etype, str):
            raise CorpusError(f"sample {sid!r}: events[{k}].type missing")
        trigger = _span_from_record(ev.get("trigger"), f"sample {sid!r}: events[{k}].trigger")
        args = []
        for j, arg in enumerate(ev.get("arguments", [])):
            if not isinstance(arg, dict) or not isinstance(arg.get("role"), str):
                raise CorpusError(f"sample {sid!r}: events[{k}].arguments[{j}] malformed")
            span = _span_from_record(
                arg.get("span"), f"sample {sid!r}: events[{k}].arguments[{j}].span"
            )
            args.append(Argument(role=arg["role"], span=span))
        events.append(EventMention(event_type=etype, trigger=trigger, arguments=args))
    provenance = None
    if "provenance" in rec:
        p = rec["provenance"]
        if not isinstance(p, dict) or not isinstance(p.get("source_id"), str):
            raise CorpusError(f"sample {sid!r}: malformed provenance")
        masked = p.get("masked_range")
        provenance = Provenance(
            source_id=p["source_id"],
            method=p.get("method", ""),
            seed=p.get("seed"),
            masked_range=(
                _span_from_record(masked, f"sample {sid!r}: provenance.masked_range")
                if masked is not None
                else None
            ),
            fill_len=p.get("fill_len"),
            backend=p.get("backend"),
        )
    return AnnotatedSample(id=sid, tokens=list(tokens), events=events, provenance=provenance)


def sample_to_record(s: AnnotatedSample) -> dict:
    rec = {
        "id": s.id,
        "tokens": list(s.tokens),
        "events": [
            {
                "type": ev.event_type,
                "trigger": [ev.trigger.start, ev.trigger.end],
                "arguments": [
                    {"role": a.role, "span": [a.span.start, a.span.end]} for a in ev.arguments
                ],
            }
            for ev in s.events
        ],
    }
    if s.provenance is not None:
        p = s.provenance
        prov = {"source_id": p.source_id, "method": p.method}
        if p.seed is not None:
            prov["seed"] = p.seed
        if p.masked_range is not None:
            prov["masked_range"] = [p.masked_range.start, p.masked_range.end]
        if p.fill_len is not None:
            prov["fill_len"] = p.fill_len
        if p.backend is not None:
            prov["backend"] = p.backend
        rec["provenance"] = prov
    return rec


def encode_record(obj) -> bytes:
    """Canonical one-line encoding used for corpora, manifests and reports."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    ) + b"\n"


def parse_corpus(data) -> Corpus:
    """Parse a corpus from bytes, text, or a binary/text file object.

    Every record is validated; any violation aborts the parse with a
    CorpusError naming the line and sample.
    """
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    samples = []
    seen: set[str] = set()
    for lineno, line in enumerate(data.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: invalid JSON: {exc}") from exc
        try:
            sample = record_to_sample(rec)
        except CorpusError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from exc
        if sample.id in seen:
            raise CorpusError(f"line {lineno}: duplicate id {sample.id!r}")
        seen.add(sample.id)
        violations = validate_sample(sample)
        if violations:
            raise CorpusError(
                f"line {lineno}: sample {sample.id!r} invalid: " + "; ".join(violations)
            )
        samples.append(sample)
    return Corpus(samples)


def serialize_corpus(c: Corpus) -> bytes:
    return b"".join(encode_record(sample_to_record(s)) for s in c.samples)


def load_corpus(path) -> Corpus:
    with open(path, "rb") as f:
        return parse_corpus(f)


def write_atomic(path, data: bytes) -> None:
    """Write-then-rename so readers never observe a partial file."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def save_corpus(c: Corpus, path) -> None:
    write_atomic(path, serialize_corpus(c))
