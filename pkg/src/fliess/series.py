"""Sparse noncommutative formal power series with R^ell coefficients.

Coefficients are exact (``Fraction``) by default; floats are accepted and
propagate through the same code paths.  Truncation is explicit: a series
whose ``truncation`` is an int only knows its coefficients on words up to
that length, and reading past it raises :class:`TruncationError`.  A
truncation of ``None`` marks an exact polynomial.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping, Optional

from .words import EMPTY, as_word, format_word, parse_word, shift_word, word_key


class TruncationError(ValueError):
    pass


class NotInvertibleError(ValueError):
    pass


def to_scalar(v):
    """Coerce to an exact Fraction unless the value is already a float."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, Number):
        # numpy scalars and friends
        if float(v).is_integer() and not isinstance(v, complex):
            try:
                return Fraction(int(v))
            except (TypeError, ValueError):
                pass
        return float(v)
    raise TypeError(f"cannot use {v!r} as a coefficient")


def min_trunc(*ts: Optional[int]) -> Optional[int]:
    finite = [t for t in ts if t is not None]
    return min(finite) if finite else None


def fmt_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(v)


class Series:
    """Word -> coefficient vector map with truncation metadata.

    Equality compares ``ell`` and the stored terms only; truncation is
    bookkeeping, not part of the value.
    """

    __slots__ = ("ell", "terms", "truncation")

    def __init__(self, terms: Optional[Mapping] = None, ell: int = 1,
                 truncation: Optional[int] = None):
        if ell < 1:
            raise ValueError("ell must be >= 1")
        self.ell = ell
        self.truncation = truncation
        clean = {}
        for w, v in (terms or {}).items():
            w = as_word(w)
            if truncation is not None and len(w) > truncation:
                raise TruncationError(f"word {format_word(w)} longer than truncation {truncation}")
            vec = _as_vec(v, ell)
            if any(a != 0 for a in vec):
                if w in clean:
                    vec = tuple(a + b for a, b in zip(clean[w], vec))
                clean[w] = vec
        self.terms = {w: v for w, v in clean.items() if any(a != 0 for a in v)}

    @classmethod
    def _raw(cls, terms: dict, ell: int, truncation: Optional[int]) -> "Series":
        # trusted constructor: terms already normalized tuples without zeros
        obj = cls.__new__(cls)
        obj.ell = ell
        obj.terms = terms
        obj.truncation = truncation
        return obj

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, ell: int = 1, truncation: Optional[int] = None) -> "Series":
        return cls({}, ell, truncation)

    @classmethod
    def one(cls, ell: int = 1) -> "Series":
        return cls({EMPTY: (1,) * ell}, ell)

    @classmethod
    def monomial(cls, w, coeff=1, ell: int = 1) -> "Series":
        return cls({as_word(w): coeff}, ell)

    @classmethod
    def stack(cls, comps: Iterable["Series"]) -> "Series":
        """Build an ell-vector series from scalar component series."""
        comps = list(comps)
        if not comps:
            raise ValueError("need at least one component")
        ell = len(comps)
        words = set()
        for c in comps:
            if c.ell != 1:
                raise ValueError("components must be scalar series")
            words.update(c.terms)
        zero = Fraction(0)
        terms = {}
        for w in words:
            terms[w] = tuple(c.terms.get(w, (zero,))[0] for c in comps)
        return cls(terms, ell, min_trunc(*(c.truncation for c in comps)))

    # -- access ---------------------------------------------------------------
    def coefficient(self, w) -> tuple:
        w = as_word(w)
        if self.truncation is not None and len(w) > self.truncation:
            raise TruncationError(
                f"coefficient of {format_word(w)} requested beyond truncation {self.truncation}")
        return self.terms.get(w, (Fraction(0),) * self.ell)

    __getitem__ = coefficient

    def scalar(self, w, i: int = 0):
        return self.coefficient(w)[i]

    def component(self, i: int) -> "Series":
        terms = {w: (v[i],) for w, v in self.terms.items() if v[i] != 0}
        return Series._raw(terms, 1, self.truncation)

    def components(self) -> list:
        return [self.component(i) for i in range(self.ell)]

    def words(self) -> list:
        return sorted(self.terms, key=word_key)

    def items(self):
        for w in self.words():
            yield w, self.terms[w]

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_proper(self) -> bool:
        return EMPTY not in self.terms

    def order(self) -> float:
        if not self.terms:
            return math.inf
        return min(len(w) for w in self.terms)

    def is_exact(self) -> bool:
        return all(isinstance(a, Fraction) for v in self.terms.values() for a in v)

    def letters(self) -> set:
        return {a for w in self.terms for a in w}

    def truncate(self, degree: Optional[int]) -> "Series":
        t = min_trunc(self.truncation, degree)
        if t is None:
            return self
        terms = {w: v for w, v in self.terms.items() if len(w) <= t}
        return Series._raw(terms, self.ell, t)

    def with_truncation(self, degree: Optional[int]) -> "Series":
        """Mark the series as known up to ``degree`` (dropping longer words)."""
        if degree is None:
            return Series._raw(dict(self.terms), self.ell, None)
        terms = {w: v for w, v in self.terms.items() if len(w) <= degree}
        return Series._raw(terms, self.ell, degree)

    # -- vector space ---------------------------------------------------------
    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if self.ell != other.ell:
            raise ValueError(f"dimension mismatch: ell={self.ell} vs ell={other.ell}")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        t = min_trunc(self.truncation, other.truncation)
        terms = dict(self.terms)
        for w, v in other.terms.items():
            if w in terms:
                s = tuple(a + b for a, b in zip(terms[w], v))
                if any(a != 0 for a in s):
                    terms[w] = s
                else:
                    del terms[w]
            else:
                terms[w] = v
        if t is not None:
            terms = {w: v for w, v in terms.items() if len(w) <= t}
        return Series._raw(terms, self.ell, t)

    def __neg__(self) -> "Series":
        return Series._raw({w: tuple(-a for a in v) for w, v in self.terms.items()},
                           self.ell, self.truncation)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, alpha) -> "Series":
        alpha = to_scalar(alpha)
        if alpha == 0:
            return Series._raw({}, self.ell, self.truncation)
        return Series._raw({w: tuple(alpha * a for a in v) for w, v in self.terms.items()},
                           self.ell, self.truncation)

    def __mul__(self, other):
        if isinstance(other, Series):
            return cat_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.ell == other.ell and self.terms == other.terms

    __hash__ = None

    def allclose(self, other: "Series", tol: float = 1e-9) -> bool:
        self._check(other)
        for w in set(self.terms) | set(other.terms):
            a = self.terms.get(w, (0,) * self.ell)
            b = other.terms.get(w, (0,) * self.ell)
            if any(abs(p - q) > tol for p, q in zip(a, b)):
                return False
        return True

    # -- text -----------------------------------------------------------------
    def __str__(self):
        return format_series(self)

    def __repr__(self):
        t = "exact" if self.truncation is None else self.truncation
        return f"Series({format_series(self)}; ell={self.ell}, truncation={t})"


def _as_vec(v, ell: int) -> tuple:
    if isinstance(v, (tuple, list)):
        if len(v) != ell:
            raise ValueError(f"coefficient vector {v!r} has length != ell={ell}")
        return tuple(to_scalar(a) for a in v)
    if ell != 1:
        raise ValueError(f"scalar coefficient given for ell={ell} series")
    return (to_scalar(v),)


def series(terms=None, ell: int = 1, truncation: Optional[int] = None) -> Series:
    """Build a series; string keys are parsed as words."""
    return Series(terms, ell, truncation)


# -- catenation algebra -------------------------------------------------------


def add(c: Series, d: Series) -> Series:
    return c + d


def scale(alpha, c: Series) -> Series:
    return c.scale(alpha)


def coefficient(c: Series, w) -> tuple:
    return c.coefficient(w)


def is_proper(c: Series) -> bool:
    return c.is_proper()


def order(c: Series) -> float:
    return c.order()


def cat_product(c: Series, d: Series, degree: Optional[int] = None) -> Series:
    """(cd, eta) = sum over eta = xi nu of (c, xi)(d, nu), componentwise."""
    c._check(d)
    t = min_trunc(c.truncation, d.truncation, degree)
    out: dict = {}
    for w1, v1 in c.terms.items():
        for w2, v2 in d.terms.items():
            if t is not None and len(w1) + len(w2) > t:
                continue
            w = w1 + w2
            p = tuple(a * b for a, b in zip(v1, v2))
            if w in out:
                out[w] = tuple(a + b for a, b in zip(out[w], p))
            else:
                out[w] = p
    out = {w: v for w, v in out.items() if any(a != 0 for a in v)}
    return Series._raw(out, c.ell, t)


def star(cp: Series, degree: int) -> Series:
    """(c')* = sum_i (c')^i to word length ``degree``; c' must be proper."""
    if cp.ell != 1:
        raise ValueError("star is defined for ell = 1")
    if not cp.is_proper():
        raise NotInvertibleError("star needs a proper series")
    t = min_trunc(cp.truncation, degree)
    one = Series._raw({EMPTY: (Fraction(1),)}, 1, t)
    acc = one
    for _ in range(t):
        acc = one + cat_product(cp, acc, t)
    return acc.with_truncation(t)


def cat_inverse(c: Series, degree: int) -> Series:
    """c^{-1} = (1/(c,e)) (c')* where c = (c,e)(1 - c')."""
    if c.ell != 1:
        raise ValueError("catenation inverse is defined for ell = 1")
    c0 = c.terms.get(EMPTY, (0,))[0]
    if c0 == 0:
        raise NotInvertibleError("a proper series has no catenation inverse")
    inv0 = 1 / c0 if isinstance(c0, float) else Fraction(1) / c0
    cp = Series.one() - c.scale(inv0)
    cp = Series._raw({w: v for w, v in cp.terms.items() if w != EMPTY}, 1, c.truncation)
    return star(cp, degree).scale(inv0)


def shift_series(prefix, c: Series) -> Series:
    """(prefix^{-1} c, eta) = (c, prefix eta)."""
    prefix = as_word(prefix)
    if c.truncation is not None and len(prefix) > c.truncation:
        raise TruncationError("shift longer than truncation")
    out = {}
    for w, v in c.terms.items():
        rest = shift_word(prefix, w)
        if rest is not None:
            out[rest] = v
    t = None if c.truncation is None else c.truncation - len(prefix)
    return Series._raw(out, c.ell, t)


# -- text and JSON ------------------------------------------------------------


def format_series(c: Series) -> str:
    if not c.terms:
        return "0" if c.ell == 1 else "[" + ", ".join(["0"] * c.ell) + "]"
    parts = []
    for w, v in c.items():
        ws = format_word(w)
        if c.ell == 1:
            a = v[0]
            neg = a < 0
            mag = -a if neg else a
            if mag == 1:
                body = ws
            else:
                body = f"{fmt_scalar(mag)} {ws}"
            parts.append(("-" if neg else "+", body))
        else:
            body = "[" + ", ".join(fmt_scalar(a) for a in v) + "] " + ws
            parts.append(("+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_NUM = r"\d+(?:\.\d*)?(?:[eE][-+]?\d+)?(?:/\d+)?"
_TERM = re.compile(
    r"\s*([+-])?\s*(\[[^\]]*\]|" + _NUM + r")?\s*\*?\s*((?:x\d+|x\[[\d,\s]+\]|e)(?:\s*(?:x\d+|x\[[\d,\s]+\]))*)?\s*")


def _parse_num(s: str):
    s = s.strip()
    if "/" in s:
        return Fraction(s)
    if any(ch in s for ch in ".eE"):
        return Fraction(s)
    return Fraction(int(s))


def parse_series(text: str, ell: Optional[int] = None, truncation: Optional[int] = None) -> Series:
    """Parse ``"x1 x2 + 3/2 x0 - e"``; vector coefficients as ``[1, 2] x1``."""
    text = text.strip()
    if text == "0" or text == "":
        return Series.zero(ell or 1, truncation)
    terms: dict = {}
    pos = 0
    seen_ell = ell
    while pos < len(text):
        mt = _TERM.match(text, pos)
        if mt is None or mt.end() == pos:
            raise ValueError(f"cannot parse series near {text[pos:]!r}")
        sign, coeff, wtxt = mt.groups()
        if coeff is None and wtxt is None:
            raise ValueError(f"empty term near {text[pos:]!r}")
        pos = mt.end()
        s = -1 if sign == "-" else 1
        if coeff is not None and coeff.startswith("["):
            vec = tuple(s * _parse_num(a) for a in coeff[1:-1].split(","))
        else:
            vec = (s * (_parse_num(coeff) if coeff is not None else Fraction(1)),)
        if seen_ell is None:
            seen_ell = len(vec)
        if len(vec) == 1 and seen_ell > 1:
            vec = vec * seen_ell
        w = parse_word(wtxt) if wtxt is not None else EMPTY
        prev = terms.get(w, (Fraction(0),) * len(vec))
        terms[w] = tuple(a + b for a, b in zip(prev, vec))
    return Series(terms, seen_ell or 1, truncation)


def series_to_dict(c: Series) -> dict:
    def enc(a):
        return fmt_scalar(a) if isinstance(a, Fraction) else float(a)

    return {
        "ell": c.ell,
        "truncation": c.truncation,
        "terms": [{"word": format_word(w), "coeff": [enc(a) for a in v]} for w, v in c.items()],
    }


def series_from_dict(data: Mapping) -> Series:
    ell = int(data.get("ell", 1))
    trunc = data.get("truncation")
    if trunc in ("exact",):
        trunc = None
    terms = {}
    for t in data.get("terms", []):
        coeff = t["coeff"]
        if not isinstance(coeff, list):
            coeff = [coeff]
        vec = tuple(Fraction(a) if isinstance(a, (str, int)) else float(a) for a in coeff)
        terms[parse_word(t["word"])] = vec
    return Series(terms, ell, None if trunc is None else int(trunc))


def series_to_json(c: Series, **kw) -> str:
    return json.dumps(series_to_dict(c), **kw)


def series_from_json(text: str) -> Series:
    return series_from_dict(json.loads(text))


def load_series(text: str) -> Series:
    """Accept either the JSON format or the text syntax."""
    s = text.strip()
    if s.startswith("{"):
        return series_from_json(s)
    return parse_series(s)


def random_polynomial(rng, letters, max_len: int, n_terms: int, ell: int = 1,
                      lo: int = -3, hi: int = 3, proper: bool = False) -> Series:
    """Random exact polynomial with small integer coefficients (``rng`` is a
    ``numpy.random.Generator``)."""
    letters = sorted(letters)
    terms: dict = {}
    for _ in range(n_terms):
        n = int(rng.integers(1 if proper else 0, max_len + 1))
        w = tuple(letters[int(i)] for i in rng.integers(0, len(letters), size=n))
        vec = tuple(Fraction(int(v)) for v in rng.integers(lo, hi + 1, size=ell))
        prev = terms.get(w, (Fraction(0),) * ell)
        terms[w] = tuple(a + b for a, b in zip(prev, vec))
    return Series(terms, ell)
