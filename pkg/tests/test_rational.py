from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fliess import rational as rat
from fliess.eval import DTSignal, dt_state_affine_simulate
from fliess.quasishuffle import qsh_series
from fliess.series import cat_product, parse_series, star
from fliess.shuffle import shuffle_series
from fliess.words import Letter, letter_count, words_upto

X0, X1 = Letter(0), Letter(1)
X11 = Letter((1, 1))
S = parse_series


def reps(n_max=2, proper=False):
    @st.composite
    def build(draw):
        rng = np.random.default_rng(draw(st.integers(0, 2 ** 31)))
        n = draw(st.integers(1, n_max))
        return rat.random_rep(rng, [X0, X1], n, -2, 2, proper)
    return build()


def brackets_in(w):
    return sum(not a.is_base for a in w)


def test_letter_star_coefficients():
    r = rat.rep_letter_star(1, 1)
    assert rat.rep_coefficient(r, (X1,) * 3) == (1,)
    assert rat.rep_coefficient(r, "x0") == (0,)
    assert rat.rep_coefficient(r, ()) == (1,)


def test_foreign_letter():
    with pytest.raises(rat.AlphabetError):
        rat.rep_coefficient(rat.rep_letter_star(1, 1), "x2")


def test_cat_example():
    r = rat.rep_cat(rat.rep_letter_star(1, 1), rat.rep_from_polynomial(S("x0")))
    assert rat.rep_coefficient(r, "x1 x1 x0") == (1,)
    assert rat.rep_coefficient(r, "x1 x0 x1") == (0,)


def test_qshuffle_star_example():
    r = rat.rep_qshuffle(rat.rep_letter_star(1, 1), rat.rep_letter_star(1, 1), 1)
    assert r.mu[X1][0, 0] == 2 and r.mu[X11][0, 0] == 1
    for w in words_upto([X1, X11], 5):
        assert rat.rep_coefficient(r, w) == (2 ** letter_count(w, X1),)


def test_growth_bound_examples():
    r = rat.rep_letter_star(1, 1)
    assert rat.growth_bound(r) == (1, 1)
    assert rat.growth_bound(rat.rep_scale(3, r))[0] == 3


def test_star_needs_proper():
    with pytest.raises(ValueError):
        rat.rep_star(rat.rep_letter_star(1, 1))


def test_from_polynomial():
    p = S("x1 x0 - 2 x1 + 1/2 e")
    r = rat.rep_from_polynomial(p)
    assert rat.rep_to_series(r, 4) == p


@settings(max_examples=25)
@given(reps(), reps())
def test_constructions_match_series_operations(rc, rd):
    D = 5
    c, d = rat.rep_to_series(rc, D), rat.rep_to_series(rd, D)
    assert rat.rep_to_series(rat.rep_sum(rc, rd), D) == c + d
    assert rat.rep_to_series(rat.rep_cat(rc, rd), D) == cat_product(c, d, D)
    assert rat.rep_to_series(rat.rep_shuffle(rc, rd), D) == shuffle_series(c, d, D)
    for th in (1, -1):
        r = rat.rep_qshuffle(rc, rd, th)
        assert rat.rep_to_series(r, D) == qsh_series(c, d, th, D)


@settings(max_examples=25)
@given(reps(proper=True))
def test_star_matches_series(r):
    assert rat.rep_to_series(rat.rep_star(r), 5) == star(rat.rep_to_series(r, 5), 5)


@settings(max_examples=25)
@given(reps(), reps())
def test_qshuffle_sign_flip(rc, rd):
    plus = rat.rep_to_series(rat.rep_qshuffle(rc, rd, 1), 4)
    minus = rat.rep_to_series(rat.rep_qshuffle(rc, rd, -1), 4)
    for w in set(plus.terms) | set(minus.terms):
        assert minus.scalar(w) == (-1) ** brackets_in(w) * plus.scalar(w)


@settings(max_examples=25)
@given(reps(3), reps(2))
def test_row_space_is_stable(rc, rd):
    for r in (rc, rat.rep_shuffle(rc, rd)):
        basis, stable = rat.row_space(r)
        assert stable and len(basis) <= r.n


def test_json_roundtrip():
    r = rat.rep_qshuffle(rat.rep_letter_star(1, 1), rat.rep_from_polynomial(S("1/3 x1 x0")), -1)
    assert rat.reps_equal(rat.rep_from_json(rat.rep_to_json(r)), r)


def test_state_affine_zero_rep_and_zero_input():
    zero = rat.LinearRepresentation((X0, X1), {}, [[Fraction(2)]], [[Fraction(3)]])
    sys_ = rat.state_affine_realize(zero)
    u = DTSignal([[Fraction(1, 2), Fraction(1, 3)]] * 4)
    assert dt_state_affine_simulate(sys_, u, 4) == [(6,)] * 5
    r = rat.random_rep(np.random.default_rng(0), [X0, X1], 2)
    sys_ = rat.state_affine_realize(r)
    still = DTSignal([[0, 0]] * 3)
    z = sys_.gamma
    for k in range(1, 4):
        z = sys_.step(z, still(k))
        assert all(a == b for a, b in zip(z.flat, sys_.gamma.flat))


def test_state_affine_guard():
    sys_ = rat.state_affine_realize(rat.rep_letter_star(1, 1))
    with pytest.raises(rat.SingularTransitionError):
        sys_.guard(1)
    sys_.guard(Fraction(1, 2))


def test_symbolic_transition():
    sys_ = rat.state_affine_realize(rat.rep_letter_star(1, 1))
    assert str(sys_.symbolic_transition()) == "Matrix([[-1/(u1 - 1)]])"


def test_dimension_cap():
    big = rat.random_rep(np.random.default_rng(1), [X0, X1], 4)
    with pytest.raises(rat.DimensionCapError):
        rat.rep_shuffle(big, big, cap=10)
