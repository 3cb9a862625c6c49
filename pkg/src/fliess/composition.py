"""Composition products and the output-feedback group.

``compose`` realizes the cascade F_c o F_d, ``mod_compose`` the cascade with
direct feed F_c o (I + F_d).  Group elements c_delta = delta + c are stored by
their body ``c``; delta itself is the zero body.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .series import Series, min_trunc
from .shuffle import shuffle_scalar
from .words import EMPTY, Letter, as_word, check_word_degree


def _inner_trunc(c: Series, d: Series, degree: Optional[int]) -> Optional[int]:
    # a word of length n in the result only reads c up to n and d up to n-1
    td = None if d.truncation is None else d.truncation + 1
    return min_trunc(degree, c.truncation, td)


def _check_letters(c: Series, m: int):
    for w in c.terms:
        for a in w:
            if not a.is_base or a[0] > m:
                raise ValueError(f"letter {a} outside the base alphabet x0..x{m}")


def _scalar_terms(s: Series, i: int = 0) -> dict:
    return {w: v[i] for w, v in s.terms.items() if v[i] != 0}


def _compose_scalar(c: dict, ds: list, degree: Optional[int], modified: bool) -> dict:
    """Scalar core shared by both products.

    ``ds[i]`` is the scalar map of d_i for i = 1..m (``ds[0]`` unused).  The
    recursion runs over prefixes xi of support words of c:

        psi:  f(xi) = (c, xi) + x0 sum_i d_i ⧢ f(xi x_i),   d_0 := 1
        phi:  f(xi) = (c, xi) + sum_i x_i f(xi x_i) + x0 sum_{i>=1} d_i ⧢ f(xi x_i)
    """
    if degree is None:
        degree = max((len(w) for w in c), default=0)
    prefixes = set()
    for w in c:
        for k in range(min(len(w), degree) + 1):
            prefixes.add(w[:k])
    letters = sorted({a for w in c for a in w})
    x0 = Letter(0)
    memo: dict = {}

    def f(xi) -> dict:
        got = memo.get(xi)
        if got is not None:
            return got
        deg = degree - len(xi)
        res: dict = {}
        v = c.get(xi)
        if v:
            res[EMPTY] = v
        if deg > 0:
            for a in letters:
                nxt = xi + (a,)
                if nxt not in prefixes:
                    continue
                g = f(nxt)
                if not g:
                    continue
                i = a[0]
                if modified:
                    for w, k in g.items():
                        if len(w) < deg:
                            key = (a,) + w
                            res[key] = res.get(key, 0) + k
                    if i == 0:
                        continue
                    sh = shuffle_scalar(ds[i], g, deg - 1)
                elif i == 0:
                    sh = {w: k for w, k in g.items() if len(w) < deg}
                else:
                    sh = shuffle_scalar(ds[i], g, deg - 1)
                for w, k in sh.items():
                    key = (x0,) + w
                    res[key] = res.get(key, 0) + k
            res = {w: k for w, k in res.items() if k != 0}
        memo[xi] = res
        return res

    return f(EMPTY)


def _product(c: Series, d: Series, degree: Optional[int], modified: bool) -> Series:
    m = d.ell
    _check_letters(c, m)
    t = _inner_trunc(c, d, degree)
    if t is None:
        # both exact: each x_i (i >= 1) grows by at most max|d|, so the
        # product is a polynomial of bounded length
        reach = max((len(w) + sum(a[0] != 0 for a in w) * d.max_length() for w in c.terms),
                    default=0)
        check_word_degree(reach)
    else:
        check_word_degree(t)
        reach = t
    ds = [None] + [_scalar_terms(d, i) for i in range(m)]
    if t is not None:
        ds = [None] + [{w: v for w, v in di.items() if len(w) < t} for di in ds[1:]]
    comps = []
    for j in range(c.ell):
        cj = _scalar_terms(c, j)
        if t is not None:
            cj = {w: v for w, v in cj.items() if len(w) <= t}
        comps.append(_compose_scalar(cj, ds, reach, modified))
    words = set().union(*comps) if comps else set()
    zero = Fraction(0)
    terms = {}
    for w in words:
        vec = tuple(cm.get(w, zero) for cm in comps)
        if any(a != 0 for a in vec):
            terms[w] = vec
    return Series._raw(terms, c.ell, t)


def compose(c: Series, d: Series, degree: Optional[int] = None) -> Series:
    """c o d = sum_eta (c, eta) psi_d(eta)(1)."""
    return _product(c, d, degree, modified=False)


def mod_compose(c: Series, d: Series, degree: Optional[int] = None) -> Series:
    """c o~ d = sum_eta (c, eta) phi_d(eta)(1)."""
    return _product(c, d, degree, modified=True)


def _apply(d: Series, eta, e: Series, degree: Optional[int], modified: bool) -> Series:
    eta = as_word(eta)
    m = d.ell
    _check_letters(Series({eta: 1}), m)
    t = min_trunc(degree, e.truncation, None if d.truncation is None else d.truncation + 1)
    x0 = Letter(0)
    comps = []
    for j in range(e.ell):
        cur = _scalar_terms(e, j)
        if t is not None:
            cur = {w: v for w, v in cur.items() if len(w) <= t}
        for a in reversed(eta):
            i = a[0]
            nxt: dict = {}
            if modified:
                for w, k in cur.items():
                    if t is None or len(w) < t:
                        nxt[(a,) + w] = nxt.get((a,) + w, 0) + k
            if i == 0 and not modified:
                sh = {w: k for w, k in cur.items() if t is None or len(w) < t}
            elif i == 0:
                sh = {}
            else:
                sh = shuffle_scalar(_scalar_terms(d, i - 1), cur, None if t is None else t - 1)
            for w, k in sh.items():
                nxt[(x0,) + w] = nxt.get((x0,) + w, 0) + k
            cur = {w: k for w, k in nxt.items() if k != 0}
        comps.append(cur)
    return Series.stack([Series._raw({w: (v,) for w, v in cm.items()}, 1, t) for cm in comps])


def psi_apply(d: Series, eta, e: Series, degree: Optional[int] = None) -> Series:
    """psi_d(x_i eta')(e) = x0 (d_i ⧢ psi_d(eta')(e)), with d_0 the unit series."""
    return _apply(d, eta, e, degree, modified=False)


def phi_apply(d: Series, eta, e: Series, degree: Optional[int] = None) -> Series:
    """phi_d(x_i eta')(e) = x_i e' + x0 (d_i ⧢ e'), e' = phi_d(eta')(e), d_0 = 0."""
    return _apply(d, eta, e, degree, modified=True)


# -- the output-feedback group -----------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    """c_delta = delta + body; ``body`` has m components."""

    body: Series

    @property
    def m(self) -> int:
        return self.body.ell

    @classmethod
    def delta(cls, m: int) -> "GroupElement":
        return cls(Series.zero(m))

    def is_identity(self) -> bool:
        return not self.body.terms


def group_product(c: GroupElement, d: GroupElement, degree: Optional[int] = None) -> GroupElement:
    """c_delta o d_delta = delta + d + c o~ d."""
    if c.m != d.m:
        raise ValueError(f"group elements over different m ({c.m} vs {d.m})")
    return GroupElement((d.body + mod_compose(c.body, d.body, degree)).truncate(degree))


def mixed_compose(c: Series, d: GroupElement, degree: Optional[int] = None) -> Series:
    """c o d_delta := c o~ d."""
    return mod_compose(c, d.body, degree)


def comp_inverse(c: Series, degree: int) -> Series:
    """Body of (c_delta)^{-1}: the fixed point e = (-c) o~ e.

    Each pass fixes at least one more word length, so degree + 1 passes
    starting from -c reach the truncated fixed point.
    """
    neg = -c
    e = neg.truncate(degree)
    for _ in range(degree + 1):
        e = mod_compose(neg, e, degree)
    return e.with_truncation(min_trunc(degree, e.truncation))


def group_inverse(c: GroupElement, degree: int) -> GroupElement:
    return GroupElement(comp_inverse(c.body, degree))


def feedback(c: Series, d: Series, degree: int) -> Series:
    """c @ d = c o~ ((-d) o c)^{-1}."""
    if c.ell != d.ell:
        raise ValueError("feedback needs c and d with the same number of components")
    inner = compose(-d, c, degree)
    return mod_compose(c, comp_inverse(inner, degree), degree)
