"""Letters, words and alphabets.

A letter is either a base letter ``x_i`` or a bracket letter ``x_{i1,...,in}``
(a sorted multiset of base indices of size >= 2).  Words are plain tuples of
letters, so they hash cheaply and can key sparse series.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

Word = tuple  # tuple[Letter, ...]

EMPTY: Word = ()


class DegreeError(ValueError):
    """Raised when a degree is requested that is undefined or over the cap."""


class Letter(tuple):
    """Interned letter keyed by its sorted index multiset."""

    __slots__ = ()
    _pool: dict = {}

    def __new__(cls, indices):
        if isinstance(indices, int):
            indices = (indices,)
        key = tuple(sorted(int(i) for i in indices))
        if not key:
            raise ValueError("a letter needs at least one index")
        if any(i < 0 for i in key):
            raise ValueError(f"negative letter index in {key}")
        obj = cls._pool.get(key)
        if obj is None:
            obj = super().__new__(cls, key)
            cls._pool[key] = obj
        return obj

    def __getnewargs__(self):
        return (tuple(self),)

    @property
    def indices(self) -> tuple:
        return tuple(self)

    @property
    def is_base(self) -> bool:
        return len(self) == 1

    @property
    def index(self) -> int:
        if len(self) != 1:
            raise ValueError(f"{self} is a bracket letter")
        return self[0]

    @property
    def code(self) -> tuple:
        # base letters sort before brackets, brackets by size then indices
        return (len(self), tuple(self))

    def __lt__(self, other):
        return self.code < other.code

    def __le__(self, other):
        return self.code <= other.code

    def __gt__(self, other):
        return self.code > other.code

    def __ge__(self, other):
        return self.code >= other.code

    def __repr__(self):
        return str(self)

    def __str__(self):
        if len(self) == 1:
            return f"x{self[0]}"
        return "x[" + ",".join(str(i) for i in self) + "]"


def x(*indices: int) -> Letter:
    """``x(1)`` is x1, ``x(1, 2)`` is the bracket letter x_{1,2}."""
    return Letter(indices)


def bracket(a: Letter, b: Letter) -> Letter:
    """Commutative, associative bracket: multiset union of indices."""
    return Letter(tuple(a) + tuple(b))


def word_length(w: Word) -> int:
    return len(w)


def letter_count(w: Word, letter: Letter) -> int:
    return sum(1 for a in w if a == letter)


def feedback_degree(w: Word) -> int:
    """||w|| = 2|w|_0 + |w|_1, defined on base letters only."""
    deg = 0
    for a in w:
        if not a.is_base:
            raise DegreeError(f"feedback degree undefined for bracket letter {a}")
        deg += 2 if a[0] == 0 else 1
    return deg


def left_shift(letter: Letter, w: Word) -> Optional[Word]:
    if w and w[0] == letter:
        return w[1:]
    return None


def shift_word(prefix: Word, w: Word) -> Optional[Word]:
    """xi^{-1}(w): strip ``prefix`` from ``w`` or return None."""
    n = len(prefix)
    if w[:n] == tuple(prefix):
        return w[n:]
    return None


def word_key(w: Word) -> tuple:
    """Canonical order: length first, then lexicographic by letter code."""
    return (len(w), tuple(a.code for a in w))


def is_base_word(w: Word) -> bool:
    return all(a.is_base for a in w)


# -- alphabets ---------------------------------------------------------------


@dataclass(frozen=True)
class Alphabet:
    m: int
    extended: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be non-negative")

    @property
    def base(self) -> tuple:
        return tuple(Letter(i) for i in range(self.m + 1))

    @property
    def controls(self) -> tuple:
        """X~ = X - {x0}."""
        return tuple(Letter(i) for i in range(1, self.m + 1))

    def letters(self, max_bracket: int = 2) -> tuple:
        out = list(self.base)
        if self.extended:
            for size in range(2, max_bracket + 1):
                for combo in itertools.combinations_with_replacement(range(self.m + 1), size):
                    out.append(Letter(combo))
        return tuple(out)

    def __contains__(self, letter) -> bool:
        if not isinstance(letter, Letter):
            return False
        if not all(i <= self.m for i in letter):
            return False
        return self.extended or letter.is_base


def words_upto(letters: Iterable[Letter], n: int) -> Iterator[Word]:
    """All words over ``letters`` of length <= n in canonical order."""
    letters = sorted(letters)
    for k in range(n + 1):
        yield from itertools.product(letters, repeat=k)


def words_by_feedback_degree(m: int, max_degree: int) -> list:
    """Base words with ||w|| <= max_degree, canonically ordered."""
    out = []

    def grow(w, deg):
        out.append(w)
        for i in range(m + 1):
            d = deg + (2 if i == 0 else 1)
            if d <= max_degree:
                grow(w + (Letter(i),), d)

    grow((), 0)
    return sorted(out, key=word_key)


# -- text syntax -------------------------------------------------------------

_TOKEN = re.compile(r"x(\d+)|x\[(\d+(?:\s*,\s*\d+)*)\]")


def parse_letter(tok: str) -> Letter:
    mt = _TOKEN.fullmatch(tok.strip())
    if mt is None:
        raise ValueError(f"bad letter token {tok!r}")
    if mt.group(1) is not None:
        return Letter(int(mt.group(1)))
    return Letter(int(s) for s in mt.group(2).split(","))


def parse_word(text: str) -> Word:
    """``"x0 x[1,2]"`` -> word; ``"e"`` or ``""`` -> empty word."""
    text = text.strip()
    if text in ("", "e", "∅"):
        return EMPTY
    # tolerate tokens written without separating blanks, e.g. "x0x1"
    pos, out = 0, []
    scanner = re.compile(r"\s*(x\d+|x\[[\d,\s]+\])")
    while pos < len(text):
        mt = scanner.match(text, pos)
        if mt is None:
            raise ValueError(f"bad word {text!r}")
        out.append(parse_letter(mt.group(1)))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tuple(out)


def format_word(w: Word, sep: str = " ") -> str:
    if not w:
        return "e"
    return sep.join(str(a) for a in w)


def as_word(w) -> Word:
    """Coerce str / Letter / iterable of ints or letters to a word."""
    if isinstance(w, str):
        return parse_word(w)
    if isinstance(w, Letter):
        return (w,)
    return tuple(a if isinstance(a, Letter) else Letter(a) for a in w)


# -- degree caps -------------------------------------------------------------

DEFAULT_WORD_CAP = 12
DEFAULT_HOPF_CAP = 8


def degree_caps() -> tuple:
    """(word-length cap, Hopf degree cap) read from FLIESS_DEGREE_CAP="W[,H]"."""
    raw = os.environ.get("FLIESS_DEGREE_CAP", "").strip()
    if not raw:
        return DEFAULT_WORD_CAP, DEFAULT_HOPF_CAP
    parts = [p.strip() for p in raw.split(",")]
    try:
        word_cap = int(parts[0]) if parts[0] else DEFAULT_WORD_CAP
        hopf_cap = int(parts[1]) if len(parts) > 1 and parts[1] else DEFAULT_HOPF_CAP
    except ValueError as exc:
        raise DegreeError(f"bad FLIESS_DEGREE_CAP value {raw!r}") from exc
    return word_cap, hopf_cap


def check_word_degree(degree: int) -> None:
    cap = degree_caps()[0]
    if degree > cap:
        raise DegreeError(f"degree {degree} exceeds word-length cap {cap} (FLIESS_DEGREE_CAP)")


def check_hopf_degree(degree: int) -> None:
    cap = degree_caps()[1]
    if degree > cap:
        raise DegreeError(f"feedback degree {degree} exceeds Hopf cap {cap} (FLIESS_DEGREE_CAP)")
