import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import fig1_sample, make_fixture_corpus, make_plain_sentences  # noqa: E402

from maskfill.infill import NgramBackend, train_ngram  # noqa: E402


@pytest.fixture
def fig1():
    return fig1_sample()


@pytest.fixture(scope="session")
def fixture_corpus():
    return make_fixture_corpus(120, seed=11)


@pytest.fixture(scope="session")
def plain_sentences():
    return make_plain_sentences(300, seed=5)


@pytest.fixture(scope="session")
def ngram_backend(plain_sentences):
    return NgramBackend(train_ngram(plain_sentences, order=2, add_k=0.01))
