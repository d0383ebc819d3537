"""Deterministic synthetic event corpus in the shape of the real data:
person/place arguments, verb triggers, adjunct padding around them."""

import random

from maskfill.corpus import AnnotatedSample, Argument, Corpus, EventMention, Span, validate_sample

PEOPLE = ["Mike", "Anna", "Omar", "Lucia", "Chen", "Priya", "Ravi", "Sara"]
PLACES = ["Boston", "Cairo", "Lagos", "Madrid", "Oslo", "Quito"]
TRIGGERS = {
    "Transport": ["left", "departed", "arrived"],
    "Attack": ["attacked", "raided"],
    "Meet": ["met", "visited"],
}
ADJUNCTS = [
    "the", "police", "said", "reporters", "sources", "confirmed", "on",
    "monday", "quietly", "again", "later", "officials", "nearby",
    "according", "to", "witnesses", "yesterday",
]


def fig1_sample() -> AnnotatedSample:
    """The canonical transport-event sentence used across the unit tests."""
    return AnnotatedSample(
        id="fig1",
        tokens=["Mike", "left", "this", "town", "yesterday", "."],
        events=[
            EventMention(
                event_type="Transport",
                trigger=Span(1, 2),
                arguments=[
                    Argument("Artifact", Span(0, 1)),
                    Argument("Destination", Span(2, 4)),
                    Argument("Time", Span(4, 5)),
                ],
            )
        ],
    )


def make_fixture_sample(sample_id: str, rng: random.Random) -> AnnotatedSample:
    lead = rng.sample(ADJUNCTS, rng.randint(0, 3))
    tail = rng.sample(ADJUNCTS, rng.randint(1, 4))
    event_type = rng.choice(sorted(TRIGGERS))
    verb = rng.choice(TRIGGERS[event_type])
    person = rng.choice(PEOPLE)
    place = rng.choice(PLACES)
    tokens = lead + [person, verb, place] + tail + ["."]
    base = len(lead)
    events = [
        EventMention(
            event_type=event_type,
            trigger=Span(base + 1, base + 2),
            arguments=[
                Argument("Agent", Span(base, base + 1)),
                Argument("Place", Span(base + 2, base + 3)),
            ],
        )
    ]
    sample = AnnotatedSample(id=sample_id, tokens=tokens, events=events)
    assert validate_sample(sample) == []
    return sample


def make_fixture_corpus(n: int, seed: int = 0) -> Corpus:
    rng = random.Random(seed)
    return Corpus([make_fixture_sample(f"s{i:05d}", rng) for i in range(n)])


def make_plain_sentences(n: int, seed: int = 0) -> list[list[str]]:
    """Plain text over the fixture vocabulary, for n-gram training."""
    rng = random.Random(seed)
    vocab = ADJUNCTS + PEOPLE + PLACES
    out = []
    for _ in range(n):
        length = rng.randint(3, 12)
        out.append([rng.choice(vocab) for _ in range(length)] + ["."])
    return out


def random_event_sample(sample_id: str, rng: random.Random, max_tokens: int = 12) -> AnnotatedSample:
    """Random small sample: up to 3 events, spans may overlap across events."""
    n = rng.randint(1, max_tokens)
    tokens = [f"t{i}" for i in range(n)]
    events = []
    for k in range(rng.randint(0, 3)):
        start = rng.randrange(n)
        end = min(n, start + rng.randint(1, 2))
        trigger = Span(start, end)
        arguments = []
        for _ in range(rng.randint(0, 2)):
            for _attempt in range(10):
                a_start = rng.randrange(n)
                a_end = min(n, a_start + rng.randint(1, 3))
                cand = Span(a_start, a_end)
                if not trigger.overlaps(cand):
                    arguments.append(Argument("Role", cand))
                    break
        events.append(EventMention(f"Type{k}", trigger, arguments))
    sample = AnnotatedSample(id=sample_id, tokens=tokens, events=events)
    assert validate_sample(sample) == []
    return sample
