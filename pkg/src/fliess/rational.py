"""Linear representations (mu, gamma, lambda) of rational series.

Matrices are numpy object arrays of ``Fraction`` (exact) or float arrays.
Coefficients are read off as (c, eta) = lambda mu(eta) gamma.  Kronecker
products always put the c-factor on the left: mu_c (x) mu_d.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np
import sympy

from .series import Series, fmt_scalar, to_scalar
from .words import EMPTY, Letter, as_word, bracket, parse_letter, word_key

DEFAULT_DIM_CAP = 4096


class AlphabetError(ValueError):
    pass


class DimensionCapError(ValueError):
    pass


class SingularTransitionError(ArithmeticError):
    pass


def _mat(rows, shape=None) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_scalar(v)
    return out


def _zeros(r: int, c: int) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out.fill(Fraction(0))
    return out


def _eye(n: int) -> np.ndarray:
    out = _zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


@dataclass
class LinearRepresentation:
    alphabet: tuple
    mu: dict
    gamma: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        self.alphabet = tuple(sorted(set(self.alphabet)))
        self.gamma = np.asarray(self.gamma, dtype=object).reshape(-1, 1)
        n = self.gamma.shape[0]
        self.lam = np.asarray(self.lam, dtype=object).reshape(-1, n)
        mu = {}
        for x in self.alphabet:
            mat = self.mu.get(x)
            mat = _zeros(n, n) if mat is None else np.asarray(mat, dtype=object)
            if mat.shape != (n, n):
                raise ValueError(f"mu({x}) has shape {mat.shape}, expected {(n, n)}")
            mu[x] = mat
        extra = set(self.mu) - set(self.alphabet)
        if extra:
            raise AlphabetError(f"matrices given for letters outside the alphabet: {sorted(extra)}")
        self.mu = mu

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    @property
    def ell(self) -> int:
        return self.lam.shape[0]

    def matrix(self, x: Letter) -> np.ndarray:
        try:
            return self.mu[x]
        except KeyError:
            raise AlphabetError(f"letter {x} not in alphabet {list(self.alphabet)}") from None

    def mu_word(self, w) -> np.ndarray:
        acc = _eye(self.n)
        for x in as_word(w):
            acc = acc @ self.matrix(x)
        return acc


def rep_coefficient(r: LinearRepresentation, w) -> tuple:
    """(c, eta) = lambda mu(eta) gamma."""
    row = r.lam
    for x in as_word(w):
        row = row @ r.matrix(x)
    return tuple(to_scalar(v) for v in (row @ r.gamma)[:, 0])


def rep_to_series(r: LinearRepresentation, degree: int, letters=None) -> Series:
    """All coefficients on words of length <= degree (prefix recursion)."""
    letters = sorted(letters if letters is not None else r.alphabet)
    mats, lam, gamma = _integral_view(r)
    terms = {}
    level = {EMPTY: lam}
    for k in range(degree + 1):
        nxt = {}
        for w, row in level.items():
            vec = tuple(to_scalar(v) for v in (row @ gamma)[:, 0])
            if any(v != 0 for v in vec):
                terms[w] = vec
            if k < degree:
                for x in letters:
                    if x not in mats:
                        raise AlphabetError(f"letter {x} not in alphabet {list(r.alphabet)}")
                    nxt[w + (x,)] = row @ mats[x]
        level = nxt
    return Series._raw(terms, r.ell, degree)


def _integral_view(r: LinearRepresentation) -> tuple:
    # Python ints are much faster than Fractions; use them when nothing is lost
    arrays = [r.lam, r.gamma, *r.mu.values()]
    if all(isinstance(v, Fraction) and v.denominator == 1 for a in arrays for v in a.flat):
        conv = lambda a: np.vectorize(lambda v: int(v), otypes=[object])(a) if a.size else a
        return {x: conv(m) for x, m in r.mu.items()}, conv(r.lam), conv(r.gamma)
    return r.mu, r.lam, r.gamma


# -- constructions ------------------------------------------------------------


def rep_from_polynomial(p: Series, alphabet=None) -> LinearRepresentation:
    """Suffix automaton: one state per suffix of a support word."""
    if p.truncation is not None:
        raise ValueError("rep_from_polynomial needs an exact polynomial")
    letters = set(p.letters())
    if alphabet is not None:
        alphabet = set(alphabet)
        if not letters <= alphabet:
            raise AlphabetError("polynomial uses letters outside the given alphabet")
        letters = alphabet
    states = {EMPTY}
    for w in p.terms:
        for k in range(len(w) + 1):
            states.add(w[k:])
    states = sorted(states, key=word_key)
    index = {s: i for i, s in enumerate(states)}
    n = len(states)
    mu = {x: _zeros(n, n) for x in letters}
    for s in states:
        if s:
            mu[s[0]][index[s], index[s[1:]]] = Fraction(1)
    gamma = _zeros(n, 1)
    gamma[index[EMPTY], 0] = Fraction(1)
    lam = _zeros(p.ell, n)
    for w, v in p.terms.items():
        for j, a in enumerate(v):
            lam[j, index[w]] = a
    return LinearRepresentation(tuple(letters), mu, gamma, lam)


def rep_one(alphabet=(), ell: int = 1) -> LinearRepresentation:
    return rep_from_polynomial(Series.one(ell), alphabet)


def rep_letter_star(i: int = 1, m: int = 1) -> LinearRepresentation:
    """1-dim representation of x_i* over x0..xm."""
    mu = {Letter(j): _mat([[1 if j == i else 0]]) for j in range(m + 1)}
    return LinearRepresentation(tuple(mu), mu, _mat([[1]]), _mat([[1]]))


def _union(*reps) -> tuple:
    return tuple(sorted(set().union(*(r.alphabet for r in reps))))


def _block(r: LinearRepresentation, x: Letter) -> np.ndarray:
    return r.mu[x] if x in r.mu else _zeros(r.n, r.n)


def _check_cap(n: int, cap: Optional[int]):
    cap = DEFAULT_DIM_CAP if cap is None else cap
    if n > cap:
        raise DimensionCapError(f"representation dimension {n} exceeds cap {cap}")


def rep_sum(rc: LinearRepresentation, rd: LinearRepresentation) -> LinearRepresentation:
    if rc.ell != rd.ell:
        raise ValueError("ell mismatch")
    alph = _union(rc, rd)
    n1, n2 = rc.n, rd.n
    mu = {}
    for x in alph:
        m = _zeros(n1 + n2, n1 + n2)
        m[:n1, :n1] = _block(rc, x)
        m[n1:, n1:] = _block(rd, x)
        mu[x] = m
    gamma = np.vstack([rc.gamma, rd.gamma])
    lam = np.hstack([rc.lam, rd.lam])
    return LinearRepresentation(alph, mu, gamma, lam)


def rep_scale(alpha, r: LinearRepresentation) -> LinearRepresentation:
    alpha = to_scalar(alpha)
    return LinearRepresentation(r.alphabet, dict(r.mu), r.gamma.copy(), r.lam * alpha)


def rep_cat(rc: LinearRepresentation, rd: LinearRepresentation) -> LinearRepresentation:
    """Catenation: mu = [[mu_c, gamma_c lambda_d mu_d], [0, mu_d]]."""
    if rc.ell != 1 or rd.ell != 1:
        raise ValueError("rep_cat is defined for ell = 1")
    alph = _union(rc, rd)
    n1, n2 = rc.n, rd.n
    link = rc.gamma @ rd.lam
    mu = {}
    for x in alph:
        m = _zeros(n1 + n2, n1 + n2)
        md = _block(rd, x)
        m[:n1, :n1] = _block(rc, x)
        m[:n1, n1:] = link @ md
        m[n1:, n1:] = md
        mu[x] = m
    gamma = np.vstack([link @ rd.gamma, rd.gamma])
    lam = np.hstack([rc.lam, _zeros(1, n2)])
    return LinearRepresentation(alph, mu, gamma, lam)


def rep_star(r: LinearRepresentation) -> LinearRepresentation:
    """(c)* for proper c: mu' = mu + gamma lambda mu gives c c*, then add 1."""
    if r.ell != 1:
        raise ValueError("rep_star is defined for ell = 1")
    if (r.lam @ r.gamma)[0, 0] != 0:
        raise ValueError("rep_star needs a proper series (lambda gamma = 0)")
    gl = r.gamma @ r.lam
    mu = {x: r.mu[x] + gl @ r.mu[x] for x in r.alphabet}
    plus = LinearRepresentation(r.alphabet, mu, r.gamma.copy(), r.lam.copy())
    return rep_sum(plus, rep_one(r.alphabet))


def rep_shuffle(rc: LinearRepresentation, rd: LinearRepresentation,
                cap: Optional[int] = None) -> LinearRepresentation:
    """mu(x) = mu_c(x) (x) I + I (x) mu_d(x)."""
    return rep_qshuffle(rc, rd, 0, cap)


def rep_qshuffle(rc: LinearRepresentation, rd: LinearRepresentation, theta,
                 cap: Optional[int] = None) -> LinearRepresentation:
    """Quasi-shuffle representation over X_c u X_d u [X_c X_d]."""
    if rc.ell != 1 or rd.ell != 1:
        raise ValueError("representation products are defined for ell = 1")
    th = to_scalar(theta)
    n1, n2 = rc.n, rd.n
    _check_cap(n1 * n2, cap)
    alph = set(rc.alphabet) | set(rd.alphabet)
    pairs: dict = {}
    if th != 0:
        for xi, xj in itertools.product(rc.alphabet, rd.alphabet):
            pairs.setdefault(bracket(xi, xj), []).append((xi, xj))
        alph |= set(pairs)
    i1, i2 = _eye(n1), _eye(n2)
    mu = {}
    for x in alph:
        m = np.kron(_block(rc, x), i2) + np.kron(i1, _block(rd, x))
        for xi, xj in pairs.get(x, ()):
            m = m + np.kron(rc.mu[xi], rd.mu[xj]) * th
        mu[x] = m
    gamma = np.kron(rc.gamma, rd.gamma)
    lam = np.kron(rc.lam, rd.lam)
    return LinearRepresentation(tuple(alph), mu, gamma, lam)


# -- bounds -------------------------------------------------------------------


def norm1(mat: np.ndarray):
    """Induced 1-norm (max absolute column sum)."""
    if mat.size == 0:
        return Fraction(0)
    return max(sum(abs(v) for v in mat[:, j]) for j in range(mat.shape[1]))


def growth_bound(r: LinearRepresentation) -> tuple:
    """(K, M) with |(c, eta)|_1 <= K M^|eta|."""
    K = norm1(r.lam) * norm1(r.gamma)
    M = max((norm1(r.mu[x]) for x in r.alphabet), default=Fraction(0))
    return K, M


def _rank(rows: list) -> int:
    if not rows:
        return 0
    return sympy.Matrix([[_to_sympy(to_scalar(v)) for v in row] for row in rows]).rank()


def row_space(r: LinearRepresentation) -> tuple:
    """Basis of span{lambda mu(eta)} and whether it is right-shift stable.

    Stability (v mu(x) stays in the span for every basis row v and letter x)
    is the finite-dimensional shift-invariant module behind rationality.
    """
    basis: list = []
    frontier = [list(r.lam[i, :]) for i in range(r.ell)]
    while frontier:
        nxt = []
        for v in frontier:
            if _rank(basis + [v]) > len(basis):
                basis.append(v)
                nxt.extend(list(np.array(v, dtype=object) @ r.mu[x]) for x in r.alphabet)
        frontier = nxt
    stable = all(_rank(basis + [list(np.array(v, dtype=object) @ r.mu[x])]) == len(basis)
                 for v in basis for x in r.alphabet)
    return basis, stable


# -- state-affine realization -------------------------------------------------


def _to_sympy(v):
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    return sympy.nsimplify(v) if isinstance(v, float) else sympy.Integer(v)


def letter_input(x: Letter, u: Sequence):
    """Input attached to a letter: u_i for x_i, the product for brackets."""
    val = 1
    for i in x:
        val = val * u[i]
    return val


@dataclass
class StateAffineSystem:
    """z(N) = (I - sum_x u_x(N) mu(x))^{-1} z(N-1), z(0) = gamma, y = lambda z."""

    alphabet: tuple
    mu: dict
    gamma: np.ndarray
    lam: np.ndarray
    norm_sum: object = field(default=None)

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def transition_matrix(self, u: Sequence) -> np.ndarray:
        """I - sum_x u_x mu(x) for one input sample u = (u_0, ..., u_m)."""
        acc = _eye(self.n)
        for x in self.alphabet:
            ux = letter_input(x, u)
            if ux != 0:
                acc = acc - self.mu[x] * to_scalar(ux)
        return acc

    def symbolic_transition(self, symbols=None):
        """The per-step map (I - sum u_x mu(x))^{-1} with symbolic inputs."""
        m = max((max(x) for x in self.alphabet), default=0)
        syms = symbols or sympy.symbols(f"u0:{m + 1}")
        acc = sympy.eye(self.n)
        for x in self.alphabet:
            ux = sympy.Mul(*[syms[i] for i in x])
            acc -= ux * sympy.Matrix(self.n, self.n, [_to_sympy(v) for v in self.mu[x].flat])
        return sympy.simplify(acc.inv())

    def guard(self, sup_u) -> None:
        total = sum((abs(to_scalar(sup_u)) ** len(x)) * norm1(self.mu[x]) for x in self.alphabet)
        if total >= 1:
            raise SingularTransitionError(
                f"input sup-norm {sup_u} outside the invertibility region (sum ||mu|| R = {total})")

    def step(self, z: np.ndarray, u: Sequence) -> np.ndarray:
        a = self.transition_matrix(u)
        exact = all(isinstance(v, Fraction) for v in a.flat) and all(
            isinstance(v, Fraction) for v in z.flat)
        if exact:
            A = sympy.Matrix(self.n, self.n, [_to_sympy(v) for v in a.flat])
            b = sympy.Matrix(self.n, 1, [_to_sympy(v) for v in z.flat])
            if A.det() == 0:
                raise SingularTransitionError("singular transition matrix")
            sol = A.LUsolve(b)
            return _mat([[Fraction(int(s.p), int(s.q))] for s in sol])
        af = np.array(a, dtype=float)
        try:
            sol = np.linalg.solve(af, np.array(z, dtype=float))
        except np.linalg.LinAlgError as exc:
            raise SingularTransitionError("singular transition matrix") from exc
        return sol.astype(object)

    def output(self, z: np.ndarray) -> tuple:
        return tuple(to_scalar(v) for v in (self.lam @ z)[:, 0])


def state_affine_realize(r: LinearRepresentation) -> StateAffineSystem:
    total = sum((norm1(r.mu[x]) for x in r.alphabet), Fraction(0))
    return StateAffineSystem(r.alphabet, dict(r.mu), r.gamma.copy(), r.lam.copy(), total)


# -- serialization ------------------------------------------------------------


def _enc(v):
    return fmt_scalar(v) if isinstance(v, Fraction) else float(v)


def _dec(v):
    return Fraction(v) if isinstance(v, (str, int)) else float(v)


def rep_to_dict(r: LinearRepresentation) -> dict:
    return {
        "alphabet": [str(x) for x in r.alphabet],
        "dimension": r.n,
        "mu": {str(x): [[_enc(v) for v in row] for row in r.mu[x]] for x in r.alphabet},
        "gamma": [_enc(v) for v in r.gamma[:, 0]],
        "lambda": [[_enc(v) for v in row] for row in r.lam],
    }


def rep_from_dict(data: Mapping) -> LinearRepresentation:
    alph = [parse_letter(s) for s in data["alphabet"]]
    mu = {parse_letter(k): _mat([[_dec(v) for v in row] for row in rows])
          for k, rows in data["mu"].items()}
    n = int(data.get("dimension", len(data["gamma"])))
    gamma = _mat([[_dec(v)] for v in data["gamma"]], (n, 1))
    lam = _mat([[_dec(v) for v in row] for row in data["lambda"]])
    return LinearRepresentation(tuple(alph), mu, gamma, lam)


def rep_to_json(r: LinearRepresentation, **kw) -> str:
    return json.dumps(rep_to_dict(r), **kw)


def rep_from_json(text: str) -> LinearRepresentation:
    return rep_from_dict(json.loads(text))


def reps_equal(r1: LinearRepresentation, r2: LinearRepresentation) -> bool:
    if r1.alphabet != r2.alphabet or r1.n != r2.n or r1.ell != r2.ell:
        return False
    same = lambda a, b: a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))
    return (same(r1.gamma, r2.gamma) and same(r1.lam, r2.lam)
            and all(same(r1.mu[x], r2.mu[x]) for x in r1.alphabet))


def random_rep(rng, letters, n: int, lo: int = -2, hi: int = 2, proper: bool = False
               ) -> LinearRepresentation:
    """Small-integer random representation, for tests and verify suites."""
    ints = lambda shape: _mat(rng.integers(lo, hi + 1, size=shape).tolist(), shape)
    mu = {x: ints((n, n)) for x in letters}
    gamma, lam = ints((n, 1)), ints((1, n))
    if proper:
        # zero the constant coefficient by adjusting one entry of lambda
        c0 = (lam @ gamma)[0, 0]
        k = next((i for i in range(n) if gamma[i, 0] != 0), None)
        if k is not None:
            lam[0, k] -= c0 / gamma[k, 0]
    return LinearRepresentation(tuple(letters), mu, gamma, lam)
