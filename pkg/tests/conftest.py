import pytest

from nanowords import Alphabet, Nanophrase, builtin_data


def ph(alphabet, spec, proj):
    """Build a phrase from a compact spec like 'AB|BA' (one char per letter)."""
    comps = [tuple(part.strip()) for part in spec.split("|")]
    return Nanophrase(alphabet, comps, proj)


@pytest.fixture
def curves():
    return builtin_data("curves")


@pytest.fixture
def links():
    return builtin_data("links")


@pytest.fixture
def diagonal():
    return builtin_data("diagonal")


@pytest.fixture
def ab_alphabet():
    return Alphabet(("a", "b"), {"a": "b"})


@pytest.fixture
def one_symbol():
    return Alphabet(("a",))
