"""Weighted quasi-shuffle product on bracket-extended words.

The weight ``theta`` multiplies the bracket term of the recursion

    (a u) * (b v) = a (u * b v) + b (a u * v) + theta [a b] (u * v).

``theta = +1`` is Hoffman's quasi-shuffle; ``theta = -1`` is the product
obeyed by the inclusive iterated sums S_eta evaluated in :mod:`fliess.eval`;
``theta = 0`` is the plain shuffle.  There is no default: callers must say
which convention they mean.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Optional

from .series import Series, min_trunc, to_scalar
from .shuffle import shuffle_words
from .words import EMPTY, Letter, Word, as_word, bracket, check_word_degree, word_key


def _theta(theta):
    if theta is None:
        raise TypeError("theta is mandatory (+1 Hoffman, -1 iterated sums)")
    return to_scalar(theta)


@lru_cache(maxsize=None)
def _qsh_canon(a: Word, b: Word, theta, limit: Optional[int]) -> tuple:
    if limit is not None and max(len(a), len(b)) > limit:
        return ()
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    sub = None if limit is None else limit - 1
    out: dict = {}

    def put(head, pairs, k):
        for w, v in pairs:
            w = (head,) + w
            out[w] = out.get(w, 0) + k * v

    put(a[0], _qsh_pair(a[1:], b, theta, sub), 1)
    put(b[0], _qsh_pair(a, b[1:], theta, sub), 1)
    if theta != 0:
        put(bracket(a[0], b[0]), _qsh_pair(a[1:], b[1:], theta, sub), theta)
    return tuple((w, v) for w, v in out.items() if v != 0)


def _qsh_pair(a: Word, b: Word, theta, limit: Optional[int]) -> tuple:
    if word_key(b) < word_key(a):
        a, b = b, a
    return _qsh_canon(a, b, theta, limit)


def qsh_dict(a, b, theta, limit: Optional[int] = None) -> dict:
    return dict(_qsh_pair(as_word(a), as_word(b), _theta(theta), limit))


def qsh_words(eta, xi, theta) -> Series:
    """Quasi-shuffle of two words with bracket weight ``theta``."""
    return Series(qsh_dict(eta, xi, theta))


def qsh_series(c: Series, d: Series, theta, degree: Optional[int] = None) -> Series:
    """Bilinear extension; exact through ``degree`` because every output
    word is at least as long as the longer input word."""
    c._check(d)
    th = _theta(theta)
    t = min_trunc(c.truncation, d.truncation, degree)
    if t is not None:
        check_word_degree(t)
    out: dict = {}
    for w1, v1 in c.terms.items():
        for w2, v2 in d.terms.items():
            if t is not None and max(len(w1), len(w2)) > t:
                continue
            p = tuple(a * b for a, b in zip(v1, v2))
            if not any(p):
                continue
            for w, k in _qsh_pair(w1, w2, th, t):
                inc = tuple(k * a for a in p)
                prev = out.get(w)
                out[w] = inc if prev is None else tuple(a + b for a, b in zip(prev, inc))
    out = {w: v for w, v in out.items() if any(a != 0 for a in v)}
    return Series._raw(out, c.ell, t)


def deconcat_coproduct(eta) -> list:
    """All |eta|+1 splittings eta = eta(1) eta(2)."""
    eta = as_word(eta)
    return [(eta[:k], eta[k:]) for k in range(len(eta) + 1)]


@lru_cache(maxsize=None)
def _antipode(w: Word, theta) -> tuple:
    if not w:
        return ((EMPTY, 1),)
    out: dict = {w: -1}
    for l in range(1, len(w)):
        for u, a in _antipode(w[:l], theta):
            for v, b in _qsh_pair(u, w[l:], theta, None):
                out[v] = out.get(v, 0) - a * b
    return tuple((v, k) for v, k in out.items() if k != 0)


def qsh_antipode(eta, theta, degree: Optional[int] = None) -> Series:
    """S(w) = -w - sum_{l=1}^{n-1} S(w_1..w_l) * w_{l+1}..w_n."""
    res = Series(dict(_antipode(as_word(eta), _theta(theta))))
    return res if degree is None else res.with_truncation(degree)


def convolution_identity(eta, theta) -> Series:
    """m o (S (x) id) o Delta applied to a word; equals eps(eta) * 1."""
    th = _theta(theta)
    out = Series.zero()
    for u, v in deconcat_coproduct(eta):
        out = out + qsh_series(qsh_antipode(u, th), Series.monomial(v), th)
    return out


def qsh_power_closed_form(i: int, j: int, theta) -> Series:
    """x1^i * x1^j = sum_k theta^k C(i+j-2k, min(i,j)-k) x11^k ⧢ x1^(i+j-2k)."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be non-negative")
    th = _theta(theta)
    x1, x11 = Letter(1), Letter((1, 1))
    lo = min(i, j)
    out = Series.zero()
    for k in range(lo + 1):
        coeff = th ** k * comb(i + j - 2 * k, lo - k)
        if coeff == 0:
            continue
        out = out + shuffle_words((x11,) * k, (x1,) * (i + j - 2 * k)).scale(coeff)
    return out
