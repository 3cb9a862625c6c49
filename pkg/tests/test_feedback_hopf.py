import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fliess import composition as comp
from fliess.feedback_hopf import (ANTIPODES, HopfPolynomial, a, antipode, antipode_cancellation_free,
                                  antipode_left, antipode_poly, antipode_right, cancellation_metric,
                                  character_eval, convolve_characters, coproduct, coproduct_poly,
                                  counit, group_inverse_via_antipode, poly_from_dict, poly_to_dict,
                                  reduced_coproduct, theta_right)
from fliess.series import Series, parse_series, random_polynomial
from fliess.words import DegreeError, Letter, words_by_feedback_degree


X0, X1, X2 = Letter(0), Letter(1), Letter(2)
P = HopfPolynomial
ONE = ()


def gens(m, max_degree):
    return [a(k, w) for w in words_by_feedback_degree(m, max_degree) for k in range(1, m + 1)]


def T(*pairs):
    """Tensor from (coeff, left generators, right generators) triples."""
    out = {}
    for c, l, r in pairs:
        key = (P({tuple(l): 1}).monomials()[0], P({tuple(r): 1}).monomials()[0])
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def test_generator_degree_and_str():
    assert a(1, "x0").degree == 3
    assert str(a(1, "x0 x1")) == "a^1_{x0x1}"
    assert str(a(2)) == "a^2_e"


def test_theta_examples():
    assert theta_right(1, P.gen(2)) == P.gen(2, "x1")
    assert theta_right(0, P.one()) == 0
    prod = P({(a(1), a(2)): 1})
    assert theta_right(1, prod) == P({(a(1, "x1"), a(2)): 1, (a(1), a(2, "x1")): 1})


def test_coproduct_examples():
    m = 2
    assert coproduct(a(1), m) == T((1, [a(1)], []), (1, [], [a(1)]))
    expect = T((1, [a(1, "x0")], []), (1, [], [a(1, "x0")]),
               (1, [a(1, "x1")], [a(1)]), (1, [a(1, "x2")], [a(2)]))
    assert coproduct(a(1, "x0"), m) == expect
    pairs = [(1, [a(1, "x0 x0")], []), (1, [], [a(1, "x0 x0")])]
    for j in (1, 2):
        xj = Letter(j)
        pairs += [(1, [a(1, (xj, X0))], [a(j)]), (1, [a(1, (X0, xj))], [a(j)]),
                  (1, [a(1, (xj,))], [a(j, "x0")])]
        for n in (1, 2):
            pairs.append((1, [a(1, (xj, Letter(n)))], [a(j), a(n)]))
    assert coproduct(a(1, "x0 x0"), m) == T(*pairs)


def test_coproduct_of_unit_and_products():
    assert coproduct_poly(P.one(), 2) == {(ONE, ONE): 1}
    for j in (1, 2):
        assert reduced_coproduct(P.gen(1, (Letter(j),)), 2) == {}
    got = coproduct_poly(P({(a(1), a(2)): 1}), 2)
    assert len(got) == 4
    with pytest.raises(ValueError):
        reduced_coproduct(P.one(), 2)


def test_antipode_examples():
    m = 2
    for k in (1, 2):
        for j in (1, 2):
            xj = Letter(j)
            assert antipode(a(k, (xj,)), m) == -P.gen(k, (xj,))
            expect = -P.gen(k, (xj, X0)) + P({(a(k, (xj, X1)), a(1)): 1, (a(k, (xj, X2)), a(2)): 1})
            assert antipode_right(a(k, (xj, X0)), m) == expect
        expect = -P.gen(k, "x0") + P({(a(k, "x1"), a(1)): 1, (a(k, "x2"), a(2)): 1})
        assert antipode_left(a(k, "x0"), m) == expect


def test_antipode_x0x0_formula():
    m = 2
    for k in (1, 2):
        p = -P.gen(k, "x0 x0")
        for n in (1, 2):
            xn = Letter(n)
            p = p + P({(a(k, (xn,)), a(n, "x0")): 1, (a(k, (xn, X0)), a(n)): 1,
                       (a(k, (X0, xn)), a(n)): 1})
            for j in (1, 2):
                xj = Letter(j)
                p = p - P({(a(k, (xn,)), a(n, (xj,)), a(j)): 1})
                p = p - P({(a(k, (xn, xj)), a(j), a(n)): 1})
        for algo in ANTIPODES:
            assert antipode(a(k, "x0 x0"), m, algo) == p


def test_cli_example_text():
    assert str(antipode(a(1, "x0"), 2, "cfree")) == "-a^1_{x0} + a^1_{x1} a^1_e + a^1_{x2} a^2_e"


def test_axioms_to_degree_five():
    m = 2
    for f in gens(m, 5):
        t = coproduct(f, m)
        assert all(len(l) <= 1 for (l, r) in t)
        assert all(sum(g.degree for g in l) + sum(g.degree for g in r) == f.degree for (l, r) in t)
        assert {r: c for (l, r), c in t.items() if not l} == {(f,): 1}
        assert {l: c for (l, r), c in t.items() if not r} == {(f,): 1}
        # coassociativity
        left, right = {}, {}
        for (l, r), c in t.items():
            for (ll, lr), k in coproduct_poly(P._raw({l: 1}), m).items():
                left[(ll, lr, r)] = left.get((ll, lr, r), 0) + c * k
            for (rl, rr), k in coproduct_poly(P._raw({r: 1}), m).items():
                right[(l, rl, rr)] = right.get((l, rl, rr), 0) + c * k
        assert {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}
        # m (S (x) id) Delta = 0
        conv = P()
        for (l, r), c in t.items():
            conv = conv + antipode_poly(P._raw({l: 1}), m) * P._raw({r: c})
        assert conv == 0


def test_counit():
    assert counit(P.one()) == 1
    assert counit(P.gen(1, "x0")) == 0


def test_three_antipodes_and_cancellation_to_six():
    m = 2
    for f in gens(m, 6):
        L, R, C = antipode_left(f, m), antipode_right(f, m), antipode_cancellation_free(f, m)
        assert L == R == C
        raw, collected = cancellation_metric(f, m)
        assert raw == collected


def test_character_group_law():
    rng = np.random.default_rng(5)
    m = 2
    letters = [Letter(i) for i in range(m + 1)]
    for _ in range(4):
        c = random_polynomial(rng, letters, 2, 5, ell=m)
        d = random_polynomial(rng, letters, 2, 5, ell=m)
        body = comp.group_product(comp.GroupElement(c), comp.GroupElement(d), 4).body
        for f in gens(m, 4):
            assert convolve_characters(c, d, f, m) == body.scalar(f.word, f.k - 1)


def test_character_eval():
    c = parse_series("3 x1")
    assert character_eval(c, P.one()) == 1
    assert character_eval(c, P.gen(1, "x1")) == 3


def test_group_inverse_examples():
    assert group_inverse_via_antipode(Series.zero(1), 3) == Series.zero(1)
    inv = group_inverse_via_antipode(parse_series("x1"), 4)
    assert all(inv.scalar((X0,) * k + (X1,)) == (-1) ** (k + 1) for k in range(4))


@given(st.sampled_from(gens(2, 5)))
def test_json_roundtrip(f):
    p = antipode(f, 2)
    assert poly_from_dict(json.loads(json.dumps(poly_to_dict(p)))) == p


def test_degree_cap(monkeypatch):
    monkeypatch.setenv("FLIESS_DEGREE_CAP", "12,4")
    with pytest.raises(DegreeError):
        coproduct(a(1, "x0 x0 x0"), 2)


def test_bad_generators():
    with pytest.raises(ValueError):
        coproduct(a(3, "x0"), 2)
    with pytest.raises(ValueError):
        antipode(a(1, "x0"), 2, "nope")
