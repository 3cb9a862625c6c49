"""Shuffle product on words and series."""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Optional

from .series import Series, min_trunc
from .words import Word, as_word, check_word_degree, word_key


@lru_cache(maxsize=None)
def _shuffle_canon(a: Word, b: Word) -> tuple:
    # callers pass (a, b) in canonical order so commutativity halves the table
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    out: dict = {}
    for w, k in _shuffle_pair(a[1:], b):
        w = (a[0],) + w
        out[w] = out.get(w, 0) + k
    for w, k in _shuffle_pair(a, b[1:]):
        w = (b[0],) + w
        out[w] = out.get(w, 0) + k
    return tuple(out.items())


def _shuffle_pair(a: Word, b: Word) -> tuple:
    if word_key(b) < word_key(a):
        a, b = b, a
    return _shuffle_canon(a, b)


def shuffle_dict(a: Word, b: Word) -> dict:
    """eta ⧢ xi as a plain {word: int} map."""
    return dict(_shuffle_pair(tuple(a), tuple(b)))


def shuffle_words(eta, xi) -> Series:
    eta, xi = as_word(eta), as_word(xi)
    return Series(dict(_shuffle_pair(eta, xi)))


def shuffle_scalar(a: dict, b: dict, degree: Optional[int]) -> dict:
    """Shuffle of two scalar {word: coeff} maps, dropping words beyond degree."""
    out: dict = {}
    for w1, v1 in a.items():
        for w2, v2 in b.items():
            if degree is not None and len(w1) + len(w2) > degree:
                continue
            p = v1 * v2
            if p == 0:
                continue
            for w, k in _shuffle_pair(w1, w2):
                out[w] = out.get(w, 0) + k * p
    return {w: v for w, v in out.items() if v != 0}


def shuffle_series(c: Series, d: Series, degree: Optional[int] = None) -> Series:
    """Bilinear extension of the word shuffle, componentwise on R^ell."""
    c._check(d)
    t = min_trunc(c.truncation, d.truncation, degree)
    if t is not None:
        check_word_degree(t)
    out: dict = {}
    for w1, v1 in c.terms.items():
        for w2, v2 in d.terms.items():
            if t is not None and len(w1) + len(w2) > t:
                continue
            p = tuple(a * b for a, b in zip(v1, v2))
            if not any(p):
                continue
            for w, k in _shuffle_pair(w1, w2):
                prev = out.get(w)
                inc = tuple(k * a for a in p)
                out[w] = inc if prev is None else tuple(a + b for a, b in zip(prev, inc))
    out = {w: v for w, v in out.items() if any(a != 0 for a in v)}
    return Series._raw(out, c.ell, t)


def shuffle_power(c: Series, k: int, degree: Optional[int] = None) -> Series:
    if k < 0:
        raise ValueError("k must be >= 0")
    acc = Series.one(c.ell)
    for _ in range(k):
        acc = shuffle_series(acc, c, degree)
    if k == 0 and degree is not None:
        acc = acc.with_truncation(degree)
    return acc


def shuffle_mass(n1: int, n2: int) -> int:
    """Total coefficient mass of a word shuffle."""
    return comb(n1 + n2, n1)
