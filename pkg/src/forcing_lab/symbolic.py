"""Subshifts of finite type: admissible words, periodic points, entropy.

Symbols are integers.  A :class:`TransitionMatrix` row/column ``i`` carries
the symbol ``labels[i]`` (``i`` by default), so the Fibonacci graph of the
interval example can be written with the rows in the order (I1, I0)::

    >>> A = fibonacci_matrix()
    >>> is_admissible("011", A)
    True
    >>> count_periodic_points(A, 3)
    4
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, GuardError, InputError

PERIODIC_WORDS_GUARD = 24
ENTROPY_RTOL = 1e-12


@dataclass(frozen=True)
class TransitionMatrix:
    """Square matrix of non-negative integers with optional symbol labels."""

    entries: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...] = field(default=())

    def __init__(self, entries, labels=None):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        q = len(rows)
        if q == 0 or any(len(r) != q for r in rows):
            raise InputError("transition matrix must be square and non-empty")
        if any(v < 0 for r in rows for v in r):
            raise InputError("transition matrix entries must be >= 0")
        for r_in, r_out in zip(entries, rows):
            for a, b in zip(r_in, r_out):
                if a != b:
                    raise InputError(f"non-integer matrix entry {a!r}")
        labels = tuple(range(q)) if labels is None else tuple(int(s) for s in labels)
        if len(labels) != q or len(set(labels)) != q:
            raise InputError("labels must be distinct, one per row")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "labels", labels)

    @property
    def q(self) -> int:
        return len(self.entries)

    def index(self, symbol: int) -> int:
        try:
            return self.labels.index(symbol)
        except ValueError:
            raise InputError(f"symbol {symbol!r} not in alphabet {self.labels}") from None

    def edge(self, a: int, b: int) -> int:
        """Entry for the transition from symbol ``a`` to symbol ``b``."""
        return self.entries[self.index(a)][self.index(b)]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def dominates(self, other: "TransitionMatrix") -> bool:
        return all(a >= b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))


def fibonacci_matrix() -> TransitionMatrix:
    """A = (1 1; 1 0) with rows ordered (I1, I0): edges 0->1, 1->0, 1->1."""
    return TransitionMatrix([[1, 1], [1, 0]], labels=(1, 0))


def full_shift(q: int) -> TransitionMatrix:
    return TransitionMatrix([[1] * q for _ in range(q)])


def as_word(w) -> tuple[int, ...]:
    """Accept a string of digits or a sequence of ints."""
    if isinstance(w, str):
        if not w or not w.isdigit():
            raise InputError(f"word {w!r} must be a non-empty digit string")
        return tuple(int(c) for c in w)
    word = tuple(int(s) for s in w)
    if not word:
        raise InputError("words have length >= 1")
    return word


def minimal_rotation(word: Sequence[int]) -> tuple[int, ...]:
    word = tuple(word)
    return min(word[i:] + word[:i] for i in range(len(word)))


def minimal_period(word: Sequence[int]) -> int:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and tuple(word[d:]) + tuple(word[:d]) == tuple(word):
            return d
    return n


@dataclass(frozen=True)
class CycleWord:
    """A word read as a periodic bi-infinite sequence, stored canonically."""

    symbols: tuple[int, ...]

    def __init__(self, symbols):
        object.__setattr__(self, "symbols", minimal_rotation(as_word(symbols)))

    @property
    def length(self) -> int:
        return len(self.symbols)

    @property
    def period(self) -> int:
        return minimal_period(self.symbols)

    @property
    def is_primitive(self) -> bool:
        return self.period == self.length

    def rotations(self) -> list[tuple[int, ...]]:
        s = self.symbols
        return [s[i:] + s[:i] for i in range(len(s))]

    def __str__(self) -> str:
        if all(0 <= s <= 9 for s in self.symbols):
            return "".join(map(str, self.symbols))
        return ".".join(map(str, self.symbols))


def is_admissible(w, A: TransitionMatrix, cyclic: bool = False) -> bool:
    """True iff every consecutive pair of ``w`` is an edge of ``A``.

    With ``cyclic=True`` the wrap-around pair (last, first) is checked too.
    """
    word = as_word(w)
    idx = [A.index(s) for s in word]
    pairs = list(zip(idx, idx[1:]))
    if cyclic:
        pairs.append((idx[-1], idx[0]))
    return all(A.entries[i][j] > 0 for i, j in pairs)


def _matmul(X, Y):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def matrix_power(A: TransitionMatrix, p: int) -> list[list[int]]:
    """Exact integer power by repeated squaring."""
    if p < 0:
        raise InputError("power must be >= 0")
    n = A.q
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(r) for r in A.entries]
    while p:
        if p & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        p >>= 1
    return result


def count_periodic_points(A: TransitionMatrix, p: int) -> int:
    """trace(A^p): admissible p-periodic sequences, rotations counted."""
    if p < 1:
        raise InputError("period must be >= 1")
    # Python ints are unbounded, so trace(A^p) cannot overflow.
    P = matrix_power(A, p)
    return sum(P[i][i] for i in range(A.q))


def _is_permutation(A: TransitionMatrix) -> bool:
    rows = A.entries
    return all(sorted(r) == [0] * (A.q - 1) + [1] for r in rows) and all(
        sum(rows[i][j] for i in range(A.q)) == 1 for j in range(A.q)
    )


def spectral_radius(A: TransitionMatrix, rtol: float = ENTROPY_RTOL, max_iter: int = 20_000) -> float:
    """Perron root of ``A`` by power iteration from the all-ones vector.

    Iterates B = A + I, which has Perron root rho(A) + 1 and no other
    eigenvalue of that modulus, so the iteration converges even for
    periodic or reducible ``A``.
    """
    if _is_permutation(A):
        return 1.0
    B = A.as_array() + np.eye(A.q)
    x = np.ones(A.q) / A.q
    lam_prev = None
    stable = 0
    for _ in range(max_iter):
        y = B @ x
        lam = y.sum()  # ||x||_1 == 1 and everything is non-negative
        x = y / lam
        if lam_prev is not None and abs(lam - lam_prev) <= rtol * lam:
            stable += 1
            if stable >= 3:
                return max(lam - 1.0, 0.0)
        else:
            stable = 0
        lam_prev = lam
    # Non-trivial Jordan structure converges like 1/k; finish with the
    # Gelfand formula on repeated squares instead.
    return _gelfand_radius(A.as_array())


def _gelfand_radius(M: np.ndarray, squarings: int = 64) -> float:
    # rho = lim ||M^N||^(1/N) with N = 2**squarings; the scale is kept in logs.
    log_scale = 0.0
    P = M.copy()
    for _ in range(squarings):
        s = np.abs(P).max()
        if s == 0.0:
            return 0.0
        P = P / s
        log_scale = 2.0 * (log_scale + math.log(s))
        P = P @ P
    s = np.abs(P).max()
    if s == 0.0:
        return 0.0
    return math.exp((log_scale + math.log(s)) / 2.0**squarings)


def topological_entropy(A: TransitionMatrix) -> float:
    """log of the spectral radius; 0 when the shift has no periodic orbit."""
    if not any(v for r in A.entries for v in r):
        raise DomainError("entropy of the all-zero matrix is undefined")
    rho = spectral_radius(A)
    # Integer matrices have rho == 0 (nilpotent: empty shift) or rho >= 1.
    return math.log(rho) if rho >= 1.0 else 0.0


# -- characteristic polynomial cross-check ------------------------------------

def characteristic_polynomial(A: TransitionMatrix) -> list[int]:
    """Coefficients of det(xI - A), highest degree first (Faddeev-LeVerrier)."""
    n = A.q
    M = [[Fraction(v) for v in r] for r in A.entries]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    ck = Fraction(1)
    for k in range(1, n + 1):
        # M_k = A (M_{k-1} + c_{k-1} I)
        inner = [[Mk[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(M[i][t] * inner[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        ck = -sum(Mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
    return [int(c) for c in coeffs]


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sturm_chain(p):
    p = [Fraction(c) for c in p]
    n = len(p) - 1
    dp = [c * (n - i) for i, c in enumerate(p[:-1])]
    chain = [p, dp]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = [v for v in (_poly_eval(q, x) for q in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def perron_root_by_bisection(A: TransitionMatrix, rtol: float = 1e-15) -> float:
    """Largest real root of det(xI - A) via Sturm-sequence bisection.

    Independent of :func:`spectral_radius`; intended for q <= 8.
    """
    if A.q > 8:
        raise GuardError("characteristic-polynomial bisection is limited to q <= 8")
    chain = _sturm_chain(characteristic_polynomial(A))
    hi = Fraction(max(sum(r) for r in A.entries) + 1)
    # a nonzero Perron root of an integer matrix is >= 1; starting at 0 would
    # evaluate the chain at a root whenever A is singular
    lo = Fraction(1, 2)
    if _sign_changes(chain, lo) == _sign_changes(chain, hi):
        return 0.0
    while hi - lo > Fraction(rtol) * max(hi, Fraction(1)):
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) > _sign_changes(chain, hi):
            lo = mid
        else:
            hi = mid
        # keep the numerators small
        lo = lo.limit_denominator(2**80) if lo.denominator > 2**90 else lo
    return float((lo + hi) / 2)


def entropy_by_charpoly(A: TransitionMatrix) -> float:
    rho = perron_root_by_bisection(A)
    return math.log(rho) if rho >= 1.0 else 0.0


# -- periodic words -----------------------------------------------------------

def iter_cycle_words(A: TransitionMatrix, p: int) -> Iterable[CycleWord]:
    """Admissible cycle words of length p in canonical (minimal) form."""
    order = sorted(range(A.q), key=lambda i: A.labels[i])
    rank = {i: r for r, i in enumerate(order)}
    succ = {i: [j for j in order if A.entries[i][j] > 0] for i in range(A.q)}
    for start in order:
        # A canonical word starts with its smallest symbol.
        floor = rank[start]
        stack = [(start,)]
        while stack:
            path = stack.pop()
            if len(path) == p:
                if A.entries[path[-1]][start] > 0:
                    labels = tuple(A.labels[i] for i in path)
                    if minimal_rotation(labels) == labels:
                        yield CycleWord(labels)
                continue
            for j in reversed(succ[path[-1]]):
                if rank[j] >= floor:
                    stack.append(path + (j,))


def periodic_words(A: TransitionMatrix, p: int) -> list[CycleWord]:
    """All admissible cycle words of length ``p``, deduplicated under rotation."""
    if p < 1:
        raise InputError("period must be >= 1")
    if p > PERIODIC_WORDS_GUARD:
        raise GuardError(
            f"periodic_words enumerates exhaustively; p={p} exceeds the limit "
            f"p <= {PERIODIC_WORDS_GUARD}"
        )
    return sorted(iter_cycle_words(A, p), key=lambda c: c.symbols)


def orbit_count(words: Iterable[CycleWord], p: int) -> int:
    """Sum of rotation-class sizes over classes whose period divides ``p``."""
    return sum(c.period for c in words if p % c.period == 0)
