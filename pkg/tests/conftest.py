import pytest

from titsalt.fields import QQ
from titsalt.io import load_corpus
from titsalt.matrix import Matrix


def Q(rows):
    return Matrix.parse(QQ, [[str(e) for e in r] for r in rows])


@pytest.fixture(scope="session")
def corpus():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_corpus(name)
        return cache[name]

    return get
