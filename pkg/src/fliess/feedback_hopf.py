"""Hopf algebra of coordinate functions a^k_eta for the output-feedback group.

Polynomials are dicts ``{monomial: coeff}`` where a monomial is a sorted
tuple of :class:`CoordinateFunction`; the empty monomial is the unit.
Tensors are dicts ``{(left_monomial, right_monomial): coeff}``.

The coproduct is built from the right-shift maps theta_j (append x_j, act as
derivations) through

    Theta_i = theta_i (x) id + id (x) theta_i + [i == 0] sum_j theta_j (x) A_j,

where ``A_j p = p a^j_e``.  Three antipodes are provided: the two
convolution recursions and the derivation-based cancellation-free formula.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Optional

from .series import Series, fmt_scalar, to_scalar
from .words import (EMPTY, Letter, Word, as_word, check_hopf_degree, feedback_degree,
                    format_word, parse_word, words_upto)


class CoordinateFunction(NamedTuple):
    """a^k_eta : c -> (c_k, eta), with 1 <= k <= m."""

    k: int
    word: Word

    @property
    def degree(self) -> int:
        return 1 + feedback_degree(self.word)

    def __str__(self):
        w = "e" if not self.word else "{" + format_word(self.word, sep="") + "}"
        return f"a^{self.k}_{w}"


def a(k: int, word=EMPTY) -> CoordinateFunction:
    return CoordinateFunction(k, as_word(word))


def _key(f: CoordinateFunction) -> tuple:
    return (-len(f.word), tuple(x[0] for x in f.word), f.k)


def _mono(factors: Iterable[CoordinateFunction]) -> tuple:
    return tuple(sorted(factors, key=_key))


def _mono_key(mono: tuple) -> tuple:
    return (len(mono), tuple(_key(f) for f in mono))


UNIT: tuple = ()


def _add_into(acc: dict, key, v):
    s = acc.get(key, 0) + v
    if s == 0:
        acc.pop(key, None)
    else:
        acc[key] = s


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            _add_into(out, _mono(m1 + m2) if m1 and m2 else (m1 or m2), c1 * c2)
    return out


def _theta(j: int, p: dict) -> dict:
    """Right shift theta_j as a derivation on a polynomial dict."""
    xj = Letter(j)
    out: dict = {}
    for mono, c in p.items():
        for pos, f in enumerate(mono):
            g = CoordinateFunction(f.k, f.word + (xj,))
            _add_into(out, _mono(mono[:pos] + (g,) + mono[pos + 1:]), c)
    return out


def _theta_mono(j: int, mono: tuple) -> list:
    """Raw (unmerged) derivation terms of one monomial."""
    xj = Letter(j)
    return [_mono(mono[:pos] + (CoordinateFunction(f.k, f.word + (xj,)),) + mono[pos + 1:])
            for pos, f in enumerate(mono)]


class HopfPolynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        clean: dict = {}
        for mono, c in (terms or {}).items():
            if isinstance(mono, CoordinateFunction):
                mono = (mono,)
            _add_into(clean, _mono(mono), to_scalar(c) if not isinstance(c, int) else c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "HopfPolynomial":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def one(cls) -> "HopfPolynomial":
        return cls._raw({UNIT: 1})

    @classmethod
    def gen(cls, k: int, word=EMPTY) -> "HopfPolynomial":
        return cls._raw({(a(k, word),): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for mono, c in other.terms.items():
            _add_into(out, mono, c)
        return HopfPolynomial._raw(out)

    def __neg__(self):
        return HopfPolynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HopfPolynomial):
            return HopfPolynomial._raw(_poly_mul(self.terms, other.terms))
        if other == 0:
            return HopfPolynomial._raw({})
        return HopfPolynomial._raw({m: other * c for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HopfPolynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def degrees(self) -> set:
        return {sum(f.degree for f in mono) for mono in self.terms}

    def max_word_length(self) -> int:
        return max((len(f.word) for mono in self.terms for f in mono), default=0)

    def monomials(self) -> list:
        return sorted(self.terms, key=_mono_key)

    def __str__(self):
        return format_poly(self.terms)

    def __repr__(self):
        return f"HopfPolynomial({self})"


def _fmt_mono(mono: tuple) -> str:
    return " ".join(str(f) for f in mono) if mono else "1"


def format_poly(terms: dict) -> str:
    if not terms:
        return "0"
    out = ""
    for i, mono in enumerate(sorted(terms, key=_mono_key)):
        c = terms[mono]
        neg = c < 0
        mag = -c if neg else c
        body = _fmt_mono(mono)
        if mag != 1:
            body = f"{fmt_scalar(to_scalar(mag))} {body}" if mono else fmt_scalar(to_scalar(mag))
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def format_tensor(terms: dict) -> str:
    if not terms:
        return "0"
    keys = sorted(terms, key=lambda lr: (_mono_key(lr[0]), _mono_key(lr[1])))
    out = ""
    for i, (l, r) in enumerate(keys):
        c = terms[(l, r)]
        neg = c < 0
        mag = -c if neg else c
        body = f"{_fmt_mono(l)} ⊗ {_fmt_mono(r)}"
        if mag != 1:
            body = f"{fmt_scalar(to_scalar(mag))} ({body})"
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def poly_to_dict(p: HopfPolynomial) -> dict:
    return {"terms": [
        {"coeff": fmt_scalar(to_scalar(p.terms[m])),
         "monomial": [{"k": f.k, "word": format_word(f.word)} for f in m]}
        for m in p.monomials()]}


def poly_from_dict(data: Mapping) -> HopfPolynomial:
    terms = {}
    for t in data["terms"]:
        mono = tuple(a(f["k"], parse_word(f["word"])) for f in t["monomial"])
        c = Fraction(t["coeff"])
        terms[mono] = int(c) if c.denominator == 1 else c
    return HopfPolynomial(terms)


def tensor_to_dict(t: dict) -> dict:
    keys = sorted(t, key=lambda lr: (_mono_key(lr[0]), _mono_key(lr[1])))
    enc = lambda mono: [{"k": f.k, "word": format_word(f.word)} for f in mono]
    return {"terms": [{"coeff": fmt_scalar(to_scalar(t[k])), "left": enc(k[0]), "right": enc(k[1])}
                      for k in keys]}


# -- shifts -------------------------------------------------------------------


def theta_right(j: int, p: HopfPolynomial) -> HopfPolynomial:
    """theta_j a^k_eta = a^k_{eta x_j}, extended as a derivation."""
    if j < 0:
        raise ValueError("letter index must be >= 0")
    return HopfPolynomial._raw(_theta(j, p.terms))


def _Theta(i: int, t: dict, m: int) -> dict:
    out: dict = {}
    for (l, r), c in t.items():
        for ll, cc in _theta(i, {l: c}).items():
            _add_into(out, (ll, r), cc)
        for rr, cc in _theta(i, {r: c}).items():
            _add_into(out, (l, rr), cc)
        if i == 0:
            for j in range(1, m + 1):
                ae = CoordinateFunction(j, EMPTY)
                rj = _mono(r + (ae,))
                for ll, cc in _theta(j, {l: c}).items():
                    _add_into(out, (ll, rj), cc)
    return out


@lru_cache(maxsize=None)
def _coproduct(k: int, word: Word, m: int) -> tuple:
    if not word:
        ae = (CoordinateFunction(k, EMPTY),)
        return (((ae, UNIT), 1), ((UNIT, ae), 1))
    prev = dict(_coproduct(k, word[:-1], m))
    return tuple(_Theta(word[-1][0], prev, m).items())


def _check_cf(f: CoordinateFunction, m: int):
    if not 1 <= f.k <= m:
        raise ValueError(f"output index {f.k} outside 1..{m}")
    for x in f.word:
        if not x.is_base or x[0] > m:
            raise ValueError(f"letter {x} outside x0..x{m}")


def coproduct(f: CoordinateFunction, m: int) -> dict:
    """Delta a^l_eta as a tensor dict (left slots are single generators)."""
    _check_cf(f, m)
    check_hopf_degree(feedback_degree(f.word))
    return dict(_coproduct(f.k, tuple(f.word), m))


def _tensor_mul(s: dict, t: dict) -> dict:
    out: dict = {}
    for (l1, r1), c1 in s.items():
        for (l2, r2), c2 in t.items():
            l = _mono(l1 + l2) if l1 and l2 else (l1 or l2)
            r = _mono(r1 + r2) if r1 and r2 else (r1 or r2)
            _add_into(out, (l, r), c1 * c2)
    return out


def coproduct_poly(p: HopfPolynomial, m: int) -> dict:
    """Multiplicative extension of the coproduct."""
    out: dict = {}
    for mono, c in p.terms.items():
        acc = {(UNIT, UNIT): c}
        for f in mono:
            acc = _tensor_mul(acc, coproduct(f, m))
        for key, v in acc.items():
            _add_into(out, key, v)
    return out


def reduced_coproduct(p: HopfPolynomial, m: int) -> dict:
    if UNIT in p.terms:
        raise ValueError("reduced coproduct is defined on the augmentation ideal only")
    out = coproduct_poly(p, m)
    for mono, c in p.terms.items():
        _add_into(out, (mono, UNIT), -c)
        _add_into(out, (UNIT, mono), -c)
    return out


def counit(p: HopfPolynomial):
    return p.terms.get(UNIT, 0)


# -- antipodes ----------------------------------------------------------------


def _antipode_poly(p: dict, single) -> dict:
    out: dict = {}
    for mono, c in p.items():
        acc = {UNIT: c}
        for f in mono:
            acc = _poly_mul(acc, single(f))
        for key, v in acc.items():
            _add_into(out, key, v)
    return out


def _reduced_terms(f: CoordinateFunction, m: int):
    me = (f,)
    for (l, r), c in _coproduct(f.k, tuple(f.word), m):
        if l and r:
            yield l, r, c
        elif not ((l == me and not r) or (r == me and not l)):
            raise AssertionError("coproduct not of the form x(x)1 + 1(x)x + reduced part")


def _make_recursive(m: int, left: bool):
    @lru_cache(maxsize=None)
    def S(f: CoordinateFunction) -> dict:
        out: dict = {(f,): -1}
        for l, r, c in _reduced_terms(f, m):
            if left:
                prod = _poly_mul(_antipode_poly({l: 1}, S), {r: 1})
            else:
                prod = _poly_mul({l: 1}, _antipode_poly({r: 1}, S))
            for mono, v in prod.items():
                _add_into(out, mono, -c * v)
        return out

    return S


_recursive_cache: dict = {}


def _recursive(m: int, left: bool):
    key = (m, left)
    if key not in _recursive_cache:
        _recursive_cache[key] = _make_recursive(m, left)
    return _recursive_cache[key]


def antipode_left(f: CoordinateFunction, m: int) -> HopfPolynomial:
    """S x = -x - sum' S(x') x''."""
    _check_cf(f, m)
    check_hopf_degree(feedback_degree(f.word))
    return HopfPolynomial._raw(dict(_recursive(m, True)(f)))


def antipode_right(f: CoordinateFunction, m: int) -> HopfPolynomial:
    """S x = -x - sum' x' S(x'')."""
    _check_cf(f, m)
    check_hopf_degree(feedback_degree(f.word))
    return HopfPolynomial._raw(dict(_recursive(m, False)(f)))


def _theta_prime(l: int, p: dict, m: int) -> dict:
    # theta'_l = -theta_l + [l == 0] sum_j a^j_e theta_j
    out = {mono: -c for mono, c in _theta(l, p).items()}
    if l == 0:
        for j in range(1, m + 1):
            ae = CoordinateFunction(j, EMPTY)
            for mono, c in _theta(j, p).items():
                _add_into(out, _mono(mono + (ae,)), c)
    return out


@lru_cache(maxsize=None)
def _cfree(k: int, word: Word, m: int) -> tuple:
    p: dict = {(CoordinateFunction(k, EMPTY),): 1}
    for x in word:
        p = _theta_prime(x[0], p, m)
    sign = -1 if len(word) % 2 == 0 else 1
    return tuple((mono, sign * c) for mono, c in p.items())


def antipode_cancellation_free(f: CoordinateFunction, m: int) -> HopfPolynomial:
    """S a^k_eta = (-1)^{|eta|+1} Theta'_eta(a^k_e), letters applied left to right."""
    _check_cf(f, m)
    check_hopf_degree(feedback_degree(f.word))
    return HopfPolynomial._raw(dict(_cfree(f.k, tuple(f.word), m)))


def cancellation_free_raw(f: CoordinateFunction, m: int) -> list:
    """Unmerged expansion of the cancellation-free formula as (coeff, monomial)."""
    _check_cf(f, m)
    terms = [(1, (CoordinateFunction(f.k, EMPTY),))]
    for x in f.word:
        l = x[0]
        nxt = []
        for c, mono in terms:
            for g in _theta_mono(l, mono):
                nxt.append((-c, g))
            if l == 0:
                for j in range(1, m + 1):
                    ae = CoordinateFunction(j, EMPTY)
                    for g in _theta_mono(j, mono):
                        nxt.append((c, _mono(g + (ae,))))
        terms = nxt
    sign = -1 if len(f.word) % 2 == 0 else 1
    return [(sign * c, mono) for c, mono in terms]


def cancellation_metric(f: CoordinateFunction, m: int) -> tuple:
    """(raw sum |coeff|, collected sum |coeff|); equal iff no cancellation."""
    raw = cancellation_free_raw(f, m)
    collected: dict = {}
    for c, mono in raw:
        _add_into(collected, mono, c)
    return sum(abs(c) for c, _ in raw), sum(abs(c) for c in collected.values())


ANTIPODES = {
    "left": antipode_left,
    "right": antipode_right,
    "cfree": antipode_cancellation_free,
}


def antipode(f: CoordinateFunction, m: int, algo: str = "cfree") -> HopfPolynomial:
    try:
        fn = ANTIPODES[algo]
    except KeyError:
        raise ValueError(f"unknown antipode algorithm {algo!r}") from None
    return fn(f, m)


def antipode_poly(p: HopfPolynomial, m: int, algo: str = "cfree") -> HopfPolynomial:
    single = lambda f: antipode(f, m, algo).terms
    return HopfPolynomial._raw(_antipode_poly(p.terms, single))


# -- characters ---------------------------------------------------------------


def _eval_terms(c: Series, terms: dict):
    total = 0
    cache: dict = {}
    for mono, k in terms.items():
        v = k
        for f in mono:
            val = cache.get(f)
            if val is None:
                if not 1 <= f.k <= c.ell:
                    raise ValueError(f"output index {f.k} outside 1..{c.ell}")
                val = c.coefficient(f.word)[f.k - 1]
                cache[f] = val
            v = v * val
            if v == 0:
                break
        total = total + v
    return total


def character_eval(c: Series, p: HopfPolynomial):
    """Phi_c(a^i_eta) = (c_i, eta), extended multiplicatively."""
    return _eval_terms(c, p.terms)


def convolve_characters(c: Series, d: Series, f: CoordinateFunction, m: int):
    """(Phi_c * Phi_d)(a) = sum Phi_c(a') Phi_d(a'') over Delta a."""
    total = 0
    for (l, r), k in coproduct(f, m).items():
        total = total + k * _eval_terms(c, {l: 1}) * _eval_terms(d, {r: 1})
    return total


def group_inverse_via_antipode(c: Series, degree: int, algo: str = "cfree") -> Series:
    """Body of (c_delta)^{-1}: coefficient at (i, eta) is Phi_c(S a^i_eta)."""
    m = c.ell
    terms = {}
    for w in words_upto([Letter(i) for i in range(m + 1)], degree):
        vec = tuple(character_eval(c, antipode(a(i, w), m, algo)) for i in range(1, m + 1))
        vec = tuple(to_scalar(v) if not isinstance(v, float) else v for v in vec)
        if any(v != 0 for v in vec):
            terms[w] = vec
    return Series._raw(terms, m, degree)
