"""Numeric evaluation of continuous- and discrete-time Fliess operators.

Continuous time: iterated integrals E_eta[u] on a uniform grid by composite
trapezoid (memoized by word suffix), and RK4 for bilinear realizations.
Discrete time: iterated sums S_eta[u](N), exact whenever the input samples
are Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .composition import compose, feedback
from .rational import LinearRepresentation, StateAffineSystem, letter_input
from .series import Series, TruncationError, to_scalar
from .words import EMPTY, Word, as_word

__all__ = [
    "CTSignal", "DTSignal", "StateAffineSystem", "iterated_integral", "iterated_integrals",
    "ct_fliess_eval", "ct_fliess_trajectory", "ct_bilinear_simulate", "iterated_sum",
    "iterated_sums", "dt_fliess_eval", "sum_bound", "dt_state_affine_simulate",
    "verify_cascade_ct", "verify_feedback_ct", "PicardError", "picard_closed_loop",
    "summation_operator", "ct_tail_bound", "dt_tail_bound", "length_graded_partial_sums",
]


class PicardError(RuntimeError):
    pass


# -- signals ------------------------------------------------------------------


@dataclass
class CTSignal:
    """Samples of u_1..u_m on t0, t0+h, ...; u_0 = 1 is implicit."""

    t0: float
    h: float
    u: np.ndarray
    func: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim == 1:
            self.u = self.u[:, None]
        if self.h <= 0:
            raise ValueError("step h must be positive")
        if self.u.shape[0] < 2:
            raise ValueError("a CT signal needs at least two grid points")

    @classmethod
    def from_function(cls, f: Callable, t0: float, t1: float, h: float, m: int = 1) -> "CTSignal":
        n = int(round((t1 - t0) / h))
        t = t0 + h * np.arange(n + 1)
        vals = np.array([np.atleast_1d(f(s)) for s in t], dtype=float).reshape(n + 1, m)
        return cls(t0, h, vals, f)

    @property
    def m(self) -> int:
        return self.u.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.u.shape[0])

    def channel(self, i: int) -> np.ndarray:
        if i == 0:
            return np.ones(self.u.shape[0])
        if i > self.m:
            raise ValueError(f"input has no channel u{i} (m = {self.m})")
        return self.u[:, i - 1]

    def at(self, t: float) -> np.ndarray:
        """u_1..u_m at an arbitrary time (exact if a function was given)."""
        if self.func is not None:
            return np.atleast_1d(np.asarray(self.func(t), dtype=float)).reshape(self.m)
        return np.array([np.interp(t, self.times, self.u[:, j]) for j in range(self.m)])

    def index(self, t: float) -> int:
        k = int(round((t - self.t0) / self.h))
        if k < 0 or k >= self.u.shape[0] or abs(self.t0 + k * self.h - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"t = {t} is not a grid point of the signal")
        return k


@dataclass
class DTSignal:
    """u(1), ..., u(N_f); each sample is (u_0, ..., u_m)."""

    values: list

    def __post_init__(self):
        self.values = [tuple(to_scalar(v) for v in row) for row in self.values]
        if not self.values:
            raise ValueError("horizon must be >= 1")
        widths = {len(r) for r in self.values}
        if len(widths) != 1:
            raise ValueError("all samples need the same number of components")

    @property
    def horizon(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0]) - 1

    def __call__(self, k: int) -> tuple:
        if not 1 <= k <= self.horizon:
            raise IndexError(f"sample {k} outside 1..{self.horizon}")
        return self.values[k - 1]

    def sup_norm(self):
        return max(abs(v) for row in self.values for v in row)


# -- continuous time ----------------------------------------------------------


def iterated_integrals(words: Iterable[Word], u: CTSignal) -> dict:
    """E_eta[u](t) on the whole grid for each requested word."""
    memo: dict = {EMPTY: np.ones(u.u.shape[0])}

    def E(w: Word) -> np.ndarray:
        got = memo.get(w)
        if got is None:
            if not w[0].is_base:
                raise ValueError("iterated integrals take base-alphabet words")
            got = cumulative_trapezoid(u.channel(w[0][0]) * E(w[1:]), dx=u.h, initial=0.0)
            memo[w] = got
        return got

    return {w: E(as_word(w)) for w in words}


def iterated_integral(eta, u: CTSignal, t: float) -> float:
    k = u.index(t)
    return float(iterated_integrals([as_word(eta)], u)[as_word(eta)][k])


def _ct_words(c: Series, max_len: Optional[int]) -> list:
    if max_len is not None and c.truncation is not None and c.truncation < max_len:
        raise TruncationError(f"series truncated at {c.truncation} < max_len {max_len}")
    if max_len is None and c.truncation is not None:
        max_len = c.truncation
    return [w for w in c.terms if max_len is None or len(w) <= max_len]


def ct_fliess_trajectory(c: Series, u: CTSignal, max_len: Optional[int] = None) -> np.ndarray:
    """F_c[u](t) for every grid time, shape (points, ell)."""
    words = _ct_words(c, max_len)
    E = iterated_integrals(words, u)
    out = np.zeros((u.u.shape[0], c.ell))
    for w in words:
        out += np.outer(E[w], np.array([float(a) for a in c.terms[w]]))
    return out


def ct_fliess_eval(c: Series, u: CTSignal, t: float, max_len: Optional[int] = None) -> tuple:
    k = u.index(t)
    return tuple(ct_fliess_trajectory(c, u, max_len)[k])


def ct_bilinear_simulate(r: LinearRepresentation, u: CTSignal) -> np.ndarray:
    """RK4 for z' = (A_0 + sum_i A_i u_i) z, z(t0) = gamma; returns y = lambda z."""
    for x in r.alphabet:
        if not x.is_base:
            raise ValueError("bilinear simulation needs a base-alphabet representation")
    n = r.n
    A = [np.zeros((n, n)) for _ in range(u.m + 1)]
    for x in r.alphabet:
        if x[0] > u.m:
            if any(v != 0 for v in r.mu[x].flat):
                raise ValueError(f"representation uses x{x[0]} but the input has m = {u.m}")
            continue
        A[x[0]] = np.array(r.mu[x], dtype=float)
    lam = np.array(r.lam, dtype=float)
    z = np.array(r.gamma, dtype=float)[:, 0]

    def rhs(t, z):
        ut = u.at(t)
        M = A[0].copy()
        for i in range(1, u.m + 1):
            M += A[i] * ut[i - 1]
        return M @ z

    ts = u.times
    out = np.zeros((len(ts), r.ell))
    out[0] = lam @ z
    h = u.h
    for k in range(len(ts) - 1):
        t = ts[k]
        k1 = rhs(t, z)
        k2 = rhs(t + h / 2, z + h / 2 * k1)
        k3 = rhs(t + h / 2, z + h / 2 * k2)
        k4 = rhs(t + h, z + h * k3)
        z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = lam @ z
    return out


def ct_tail_bound(K, M, n_letters: int, R: float, T: float, L: int) -> float:
    """Bound on sum_{|eta| > L} |(c,eta) E_eta[u](t0+T)| for |(c,eta)| <= K M^|eta|,
    |u_i| <= R (R >= 1 covers u_0 = 1): K sum_{k>L} (n M R T)^k / k!."""
    q = float(n_letters * M * max(float(R), 1.0) * T)
    head = sum(q ** k / math.factorial(k) for k in range(L + 1))
    return float(K) * max(math.exp(q) - head, 0.0)


# -- discrete time ------------------------------------------------------------


def iterated_sums(words: Iterable[Word], u: DTSignal, N: int) -> dict:
    """S_eta[u](k) for k = 0..N per word (list index = k)."""
    if N > u.horizon:
        raise IndexError(f"N = {N} exceeds the input horizon {u.horizon}")
    memo: dict = {EMPTY: [Fraction(1)] * (N + 1)}

    def S(w: Word) -> list:
        got = memo.get(w)
        if got is None:
            inner = S(w[1:])
            acc = 0
            got = [Fraction(0)]
            for k in range(1, N + 1):
                acc = acc + letter_input(w[0], u(k)) * inner[k]
                got.append(acc)
            memo[w] = got
        return got

    return {as_word(w): S(as_word(w)) for w in words}


def iterated_sum(eta, u: DTSignal, N: int):
    """S_{x_i eta}(N) = sum_{k=1}^N u_i(k) S_eta(k), with S_e = 1."""
    w = as_word(eta)
    return iterated_sums([w], u, N)[w][N]


def dt_fliess_eval(c: Series, u: DTSignal, N: int, max_len: Optional[int] = None) -> tuple:
    words = _ct_words(c, max_len)
    S = iterated_sums(words, u, N)
    out = [0] * c.ell
    for w in words:
        s = S[w][N]
        for j, a in enumerate(c.terms[w]):
            out[j] = out[j] + a * s
    return tuple(to_scalar(v) if not isinstance(v, float) else v for v in out)


def summation_operator(f: Sequence) -> list:
    """Z(f)(N) = sum_{k=1}^N f(k); sequences are indexed from 1 (f[0] unused)."""
    out = [0]
    acc = 0
    for v in f[1:]:
        acc = acc + v
        out.append(acc)
    return out


def sum_bound(eta, R, N: int) -> tuple:
    """(R^|eta| C(N-1+|eta|, |eta|), 2^(N-1) (2R)^|eta|): tight and loose bounds."""
    n = len(as_word(eta))
    R = to_scalar(R)
    return R ** n * comb(N - 1 + n, n), 2 ** (N - 1) * (2 * R) ** n


def dt_tail_bound(K, M, n_letters: int, R, N: int, L: int):
    """K sum_{k>L} (n M R)^k C(N-1+k, k) for |(c,eta)| <= K M^|eta|, |u| <= R."""
    q = to_scalar(n_letters) * to_scalar(M) * to_scalar(R)
    if q >= 1:
        return math.inf
    total = (1 - q) ** (-N) if isinstance(q, float) else Fraction(1) / (1 - q) ** N
    head = sum(q ** k * comb(N - 1 + k, k) for k in range(L + 1))
    return to_scalar(K) * (total - head)


def length_graded_partial_sums(coeff: Callable, n_letters: int, R, N: int, L: int) -> list:
    """Partial sums of F^_c(N) at constant input u_i = R when (c, eta) = coeff(|eta|).

    Uses S_eta = R^|eta| C(N-1+|eta|, |eta|) for constant inputs.
    """
    R = to_scalar(R)
    out, acc = [], 0
    for k in range(L + 1):
        acc = acc + coeff(k) * n_letters ** k * R ** k * comb(N - 1 + k, k)
        out.append(acc)
    return out


def dt_state_affine_simulate(sys: StateAffineSystem, u: DTSignal, N: int) -> list:
    """y(0..N) of the state-affine recursion."""
    if N > u.horizon:
        raise IndexError(f"N = {N} exceeds the input horizon {u.horizon}")
    if N > 0:
        sys.guard(max(abs(v) for row in u.values[:N] for v in row))
    z = sys.gamma.copy()
    out = [sys.output(z)]
    for k in range(1, N + 1):
        z = sys.step(z, u(k))
        out.append(sys.output(z))
    return out


# -- interconnection verifiers -------------------------------------------------


def _as_input(y: np.ndarray, u: CTSignal) -> CTSignal:
    return CTSignal(u.t0, u.h, y)


def verify_cascade_ct(c: Series, d: Series, u: CTSignal, max_len: int) -> dict:
    """max |F_{c o d}[u] - F_c[F_d[u]]| over the grid."""
    cd = compose(c, d, max_len)
    direct = ct_fliess_trajectory(cd, u, max_len)
    inner = ct_fliess_trajectory(d, u, None if d.truncation is None else d.truncation)
    outer = ct_fliess_trajectory(c, _as_input(inner, u),
                                 None if c.truncation is None else c.truncation)
    err = float(np.max(np.abs(direct - outer)))
    return {"check": "cascade", "max_abs_error": err, "points": len(u.times), "max_len": max_len}


def picard_closed_loop(c: Series, d: Series, u: CTSignal, max_iter: int = 200,
                       tol: float = 1e-14) -> tuple:
    """Solve y = F_c[v], v = u + F_d[y] by successive substitution."""
    v = u.u.copy()
    prev_delta = math.inf
    growth = 0
    for it in range(1, max_iter + 1):
        y = ct_fliess_trajectory(c, _as_input(v, u), c.truncation)
        v_new = u.u + ct_fliess_trajectory(d, _as_input(y, u), d.truncation)
        delta = float(np.max(np.abs(v_new - v)))
        v = v_new
        if delta <= tol:
            return ct_fliess_trajectory(c, _as_input(v, u), c.truncation), it
        growth = growth + 1 if delta >= prev_delta else 0
        if growth >= 5 or not np.isfinite(delta):
            raise PicardError(f"Picard iteration is not contracting (delta = {delta:g})")
        prev_delta = delta
    if delta > 1e-10:
        raise PicardError(f"Picard iteration did not converge in {max_iter} steps")
    return ct_fliess_trajectory(c, _as_input(v, u), c.truncation), max_iter


def verify_feedback_ct(c: Series, d: Series, u: CTSignal, max_len: int) -> dict:
    """max |F_{c@d}[u] - y_picard| over the grid."""
    loop = feedback(c, d, max_len)
    series_out = ct_fliess_trajectory(loop, u, max_len)
    ref, iters = picard_closed_loop(c, d, u)
    err = float(np.max(np.abs(series_out - ref)))
    return {"check": "feedback", "max_abs_error": err, "picard_iterations": iters,
            "points": len(u.times), "max_len": max_len}
