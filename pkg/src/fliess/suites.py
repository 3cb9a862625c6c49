"""Invariant suites behind ``fliess verify <suite>``.

Every suite returns ``{check_name: (passed, total)}``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

import numpy as np

from . import acceptance as acc
from . import eval as ev
from . import feedback_hopf as fh
from . import quasishuffle as qs
from . import shuffle as sh
from .series import Series, random_polynomial
from .words import Letter, words_by_feedback_degree, words_upto


def _tally(counts: dict, name: str, good: bool):
    p, n = counts.get(name, (0, 0))
    counts[name] = (p + bool(good), n + 1)


def shuffle_suite(degree: int = 6, m: int = 2, seed: int = 0) -> dict:
    letters = [Letter(i) for i in range(m + 1)]
    counts: dict = {}
    words = list(words_upto(letters, degree))
    for a, b in itertools.product(words, repeat=2):
        if len(a) + len(b) > degree:
            continue
        ab = sh.shuffle_dict(a, b)
        _tally(counts, "commutativity", ab == sh.shuffle_dict(b, a))
        _tally(counts, "coefficient mass", sum(ab.values()) == comb(len(a) + len(b), len(a)))
    short = list(words_upto(letters, degree // 3))
    for a, b, c in itertools.product(short, repeat=3):
        if len(a) + len(b) + len(c) > degree:
            continue
        left = sh.shuffle_series(sh.shuffle_words(a, b), Series.monomial(c))
        right = sh.shuffle_series(Series.monomial(a), sh.shuffle_words(b, c))
        _tally(counts, "associativity", left == right)
    return counts


def qshuffle_suite(degree: int = 5, m: int = 2, seed: int = 0) -> dict:
    letters = [Letter(i) for i in range(m + 1)]
    counts: dict = {}
    words = list(words_upto(letters, min(degree, 4)))
    for a, b in itertools.product(words, repeat=2):
        if len(a) + len(b) > degree:
            continue
        for theta in (1, -1):
            _tally(counts, "commutativity", qs.qsh_dict(a, b, theta) == qs.qsh_dict(b, a, theta))
        _tally(counts, "theta = 0 is the shuffle", qs.qsh_dict(a, b, 0) == sh.shuffle_dict(a, b))
    short = list(words_upto(letters, 2))
    for a, b, c in itertools.product(short, repeat=3):
        if len(a) + len(b) + len(c) > degree:
            continue
        for theta in (1, -1):
            left = qs.qsh_series(qs.qsh_words(a, b, theta), Series.monomial(c), theta)
            right = qs.qsh_series(Series.monomial(a), qs.qsh_words(b, c, theta), theta)
            _tally(counts, "associativity", left == right)
    x1 = Letter(1)
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            for theta in (1, -1):
                _tally(counts, "closed form", qs.qsh_power_closed_form(i, j, theta)
                       == qs.qsh_words((x1,) * i, (x1,) * j, theta))
    for w in words_upto(letters, min(degree, 4)):
        for theta in (1, -1):
            ident = qs.convolution_identity(w, theta)
            _tally(counts, "antipode identity", ident == (Series.one() if not w else Series.zero()))
    return counts


def hopf_suite(degree: int = 5, m: int = 2, seed: int = 0) -> dict:
    counts = {k: tuple(v) for k, v in acc.hopf_axioms(m, degree, seed).items()}
    for w in words_by_feedback_degree(m, degree):
        for k in range(1, m + 1):
            f = fh.a(k, w)
            L, R, C = fh.antipode_left(f, m), fh.antipode_right(f, m), fh.antipode_cancellation_free(f, m)
            _tally(counts, "three antipodes agree", L == R == C)
            raw, col = fh.cancellation_metric(f, m)
            _tally(counts, "cancellation free", raw == col)
    return counts


def group_suite(degree: int = 4, m: int = 2, seed: int = 0, cases: int = 25) -> dict:
    return acc.group_laws(seed, cases, degree)


def discrete_suite(degree: int = 3, m: int = 2, seed: int = 0, cases: int = 50) -> dict:
    rng = np.random.default_rng(seed)
    counts: dict = {}
    letters = [Letter(i) for i in range(m + 1)]
    for _ in range(cases):
        c = random_polynomial(rng, letters, degree, 4)
        d = random_polynomial(rng, letters, degree, 4)
        N = int(rng.integers(1, 13))
        u = ev.DTSignal([[Fraction(int(v)) for v in rng.integers(-4, 5, size=m + 1)]
                         for _ in range(N)])
        fc, fd = ev.dt_fliess_eval(c, u, N)[0], ev.dt_fliess_eval(d, u, N)[0]
        _tally(counts, "parallel sum", fc + fd == ev.dt_fliess_eval(c + d, u, N)[0])
        _tally(counts, "parallel product (theta = -1)",
               fc * fd == ev.dt_fliess_eval(qs.qsh_series(c, d, -1), u, N)[0])
        f = [0] + [Fraction(int(v)) for v in rng.integers(-5, 6, size=N)]
        g = [0] + [Fraction(int(v)) for v in rng.integers(-5, 6, size=N)]
        Z = ev.summation_operator
        zf, zg = Z(f), Z(g)
        inner = [0] + [zf[k] * g[k] + f[k] * zg[k] - f[k] * g[k] for k in range(1, N + 1)]
        _tally(counts, "Rota-Baxter", [a * b for a, b in zip(zf, zg)][1:] == Z(inner)[1:])
    return counts


def _criteria_suite(*numbers):
    def run(degree=None, m=None, seed=0):
        out = {}
        for k in numbers:
            ok, _ = acc.run(k, seed)
            out[acc.CRITERIA[k][0]] = (int(ok), 1)
        return out

    return run


SUITES = {
    "shuffle": shuffle_suite,
    "qshuffle": qshuffle_suite,
    "hopf": hopf_suite,
    "group": group_suite,
    "discrete": discrete_suite,
    "feedback": _criteria_suite(10),
    "rational": _criteria_suite(11, 12),
    "bounds": _criteria_suite(13, 14),
}
