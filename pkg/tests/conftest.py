import pytest
from hypothesis import strategies as st

from bjknot import braid_closure_to_diagram, dt_to_diagram, parse_braid, parse_dt


def closure(word: str, strands: int):
    return braid_closure_to_diagram(parse_braid(word, strands))


def _closes_to_knot(word, strands):
    perm = list(range(strands))
    for letter in word:
        i = abs(letter) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, j = 1, perm[0]
    while j != 0:
        seen, j = seen + 1, perm[j]
    return seen == strands


def knot_words(max_letters=7, strands=3):
    """Braid words on `strands` strands whose closure is a single knot."""
    letters = [i * s for i in range(1, strands) for s in (1, -1)]
    return st.lists(
        st.sampled_from(letters), min_size=1, max_size=max_letters
    ).filter(lambda w: _closes_to_knot(w, strands))


def from_dt(text: str):
    return dt_to_diagram(parse_dt(text))


@pytest.fixture
def trefoil():
    return closure("{1,1,1}", 2)


@pytest.fixture
def figure_eight():
    return closure("{1,-2,1,-2}", 3)


@pytest.fixture
def cinquefoil():
    return closure("{1,1,1,1,1}", 2)
