import numpy as np
import pytest
from hypothesis import given, strategies as st

from fliess.composition import (GroupElement, comp_inverse, compose, feedback, group_inverse,
                                group_product, mixed_compose, mod_compose, phi_apply, psi_apply)
from fliess.feedback_hopf import a, antipode, character_eval, group_inverse_via_antipode
from fliess.series import Series, order, parse_series, random_polynomial
from fliess.shuffle import shuffle_series
from fliess.words import Letter, words_by_feedback_degree

from conftest import polynomials

X0, X1, X2 = Letter(0), Letter(1), Letter(2)
S = parse_series


def ref_psi(d, eta, e):
    """Oracle: unfold psi_d letter by letter from the right, exact arithmetic."""
    out = e
    for letter in reversed(eta):
        di = Series.one() if letter[0] == 0 else Series.stack([d.component(letter[0] - 1)])
        out = Series.monomial((X0,)) * shuffle_series(di, out)
    return out


def ref_phi(d, eta, e):
    out = e
    for letter in reversed(eta):
        nxt = Series.monomial((letter,)) * out
        if letter[0] != 0:
            di = Series.stack([d.component(letter[0] - 1)])
            nxt = nxt + Series.monomial((X0,)) * shuffle_series(di, out)
        out = nxt
    return out


def ref_product(c, d, ref):
    out = Series.zero()
    for w, v in c.terms.items():
        out = out + ref(d, w, Series.one()).scale(v[0])
    return out


def test_psi_examples():
    d = S("x1 - 2 x0")
    assert psi_apply(d, (), Series.one()) == Series.one()
    assert psi_apply(d, "x1", Series.one()) == S("x0") * d
    assert psi_apply(d, "x0 x1", Series.one()) == S("x0 x0") * d
    assert compose(S("x1"), d) == S("x0") * d


def test_phi_examples():
    d = S("x1 - 2 x0")
    assert phi_apply(d, "x1", Series.one()) == S("x1") + S("x0") * d
    assert phi_apply(d, "x0", Series.one()) == S("x0")
    inner = S("x1") + S("x0") * d
    expect = S("x1") * inner + S("x0") * shuffle_series(d, inner)
    assert phi_apply(d, "x1 x1", Series.one()) == expect
    assert mod_compose(S("x1"), d) == S("x1") + S("x0") * d


def test_units():
    c = S("x1 x0 - 3 x1 + 2 e")
    assert mod_compose(c, Series.zero()) == c
    d = S("x1 x1 - x0")
    assert group_product(GroupElement.delta(1), GroupElement(d)).body == d
    assert group_product(GroupElement(c), GroupElement.delta(1)).body == c
    assert mixed_compose(c, GroupElement.delta(1)) == c
    assert mixed_compose(S("x0 x1"), GroupElement(d)) == S("x0") * mod_compose(S("x1"), d)


def test_comp_inverse_examples():
    assert comp_inverse(Series.zero(), 4) == Series.zero()
    inv = comp_inverse(S("x1"), 4)
    assert inv == S("-x1 + x0 x1 - x0 x0 x1 + x0 x0 x0 x1")
    assert group_product(GroupElement(S("x1")), GroupElement(inv), 4).is_identity()


def test_feedback_examples():
    c = S("x1 + 2 x0 x1")
    assert feedback(c, Series.zero(), 5) == c
    assert feedback(S("x1"), S("x1"), 5) == S("x1 + x0 x0 x1 + x0 x0 x0 x0 x1")


def test_exact_polynomial_product_is_untruncated():
    d = S("x1 x1 x1")
    assert mod_compose(S("x1 x1"), d) == mod_compose(S("x1 x1"), d, 9)
    assert compose(S("x1"), S("x1 x1 + e")) == S("x0 + x0 x1 x1")


@given(polynomials(m=1, max_len=3), polynomials(m=1, max_len=2))
def test_matches_unfolding_oracle(c, d):
    assert compose(c, d) == ref_product(c, d, ref_psi)
    assert mod_compose(c, d) == ref_product(c, d, ref_phi)


@given(polynomials(), polynomials(), polynomials(m=2, max_len=2, ell=2),
       st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))
def test_left_linearity(c, c2, d, a, b):
    for op in (compose, mod_compose):
        assert op(c.scale(a) + c2.scale(b), d, 4) == op(c, d, 4).scale(a) + op(c2, d, 4).scale(b)


@given(polynomials(max_len=2), polynomials(max_len=2), polynomials(m=2, max_len=2, ell=2))
def test_left_shuffle_distributivity(a, b, d):
    for op in (compose, mod_compose):
        assert op(shuffle_series(a, b), d, 4) == shuffle_series(op(a, d, 4), op(b, d, 4), 4)


@given(polynomials(m=2, max_len=3), polynomials(m=2, max_len=3, ell=2),
       polynomials(m=2, max_len=3, ell=2, proper=True))
def test_contraction(c, d, delta):
    if not delta.terms:
        return
    d2 = d + delta
    diff = mod_compose(c, d, 6) - mod_compose(c, d2, 6)
    assert order(diff) > order(d - d2)


@given(polynomials(m=2, max_len=2, ell=2), polynomials(m=2, max_len=2, ell=2),
       polynomials(m=2, max_len=2, ell=2))
def test_group_axioms(c, d, e):
    D = 4
    cg, dg, eg = GroupElement(c), GroupElement(d), GroupElement(e)
    lhs = group_product(group_product(cg, dg, D), eg, D).body
    rhs = group_product(cg, group_product(dg, eg, D), D).body
    assert lhs == rhs
    inv = group_inverse(cg, D)
    assert group_product(cg, inv, D).is_identity()
    assert group_product(inv, cg, D).is_identity()


def test_inverse_agrees_with_antipode():
    rng = np.random.default_rng(11)
    for m in (1, 2):
        letters = [Letter(i) for i in range(m + 1)]
        for _ in range(5):
            c = random_polynomial(rng, letters, 3, 5, ell=m)
            inv = comp_inverse(c, 5)
            for w in words_by_feedback_degree(m, 5):
                for k in range(1, m + 1):
                    got = character_eval(c, antipode(a(k, w), m))
                    assert got == inv.scalar(w, k - 1)
        assert comp_inverse(c, 4) == group_inverse_via_antipode(c, 4)


def test_rejects_foreign_letters():
    with pytest.raises(ValueError):
        compose(S("x3"), S("x1"))
    with pytest.raises(ValueError):
        group_product(GroupElement(Series.zero(1)), GroupElement(Series.zero(2)))
