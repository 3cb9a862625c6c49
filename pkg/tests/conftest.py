from fractions import Fraction

from hypothesis import settings, strategies as st

from fliess.series import Series
from fliess.words import Letter

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

X0, X1, X2 = Letter(0), Letter(1), Letter(2)


def letters_of(m: int, brackets: bool = False):
    base = [Letter(i) for i in range(m + 1)]
    if brackets:
        base += [Letter((i, j)) for i in range(1, m + 1) for j in range(i, m + 1)]
    return st.sampled_from(base)


def words(m: int = 2, max_len: int = 4, brackets: bool = False):
    return st.lists(letters_of(m, brackets), max_size=max_len).map(tuple)


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, m: int = 2, max_len: int = 3, max_terms: int = 6, ell: int = 1,
                proper: bool = False, brackets: bool = False):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        w = draw(words(m, max_len, brackets))
        if proper and not w:
            continue
        terms[w] = tuple(draw(small_fractions) for _ in range(ell))
    return Series(terms, ell)


def frac(s) -> Fraction:
    return Fraction(s)
