"""Arithmetic in the prime field F_d and polynomial functions F: F_d^* -> F_d.

A polynomial function on the nonzero field elements is stored by its canonical
coefficient vector ``coeffs[m]`` for ``x**m`` with ``0 <= m <= d - 2``.  Because
``x**(d-1) == 1`` for every nonzero ``x`` (Fermat), any exponent ``m`` is folded
to ``m mod (d - 1)``; in particular ``x**(d-1)`` becomes the constant 1.  Zero is
never an argument, so this folding is exact and the representation is unique.

Field elements are plain ``int`` values in ``[0, d)``; the modulus lives on the
containing object.  The ``*_batch`` helpers operate on 2-D integer arrays, one
polynomial (or evaluation vector) per row, and are what the enumeration code
uses.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import ConsistencyError, ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_dimension(d: int, minimum: int = 5) -> int:
    """Validate that ``d`` is a prime no smaller than ``minimum``."""
    if not isinstance(d, (int, np.integer)) or not is_prime(int(d)):
        raise ParameterError(f"dimension d={d} is not prime")
    if d < minimum:
        raise ParameterError(f"dimension d={d} is below the supported minimum {minimum}")
    return int(d)


@dataclass(frozen=True)
class PrimeField:
    """The field F_d for prime ``d``; elements are ints reduced mod ``d``."""

    d: int

    def __post_init__(self):
        if not is_prime(self.d):
            raise ParameterError(f"modulus {self.d} is not prime")

    def __call__(self, a: int) -> int:
        return int(a) % self.d

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.d

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.d

    def neg(self, a: int) -> int:
        return -a % self.d

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.d

    def inv(self, a: int) -> int:
        if a % self.d == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.d}")
        return pow(a, -1, self.d)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.d)
        return pow(a, e, self.d)

    def nonzero(self) -> range:
        return range(1, self.d)


@dataclass(frozen=True)
class Polynomial:
    """Canonical polynomial function on F_d^*.

    ``coeffs`` has length ``d - 1``; entry ``m`` multiplies ``x**m``.  Use
    :meth:`from_coeffs` or :func:`reduce_flt` rather than the raw constructor
    when the input may be unreduced.
    """

    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.d - 1:
            raise ParameterError(f"expected {self.d - 1} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.d for c in self.coeffs):
            raise ParameterError("coefficients must be reduced mod d")

    @classmethod
    def from_coeffs(cls, d: int, coeffs: Iterable[int]) -> Polynomial:
        """Build from a coefficient list of any length, folding long exponents."""
        return reduce_flt(d, dict(enumerate(int(c) for c in coeffs)))

    @classmethod
    def zero(cls, d: int) -> Polynomial:
        return cls(d, (0,) * (d - 1))

    @classmethod
    def constant(cls, d: int, c: int) -> Polynomial:
        return reduce_flt(d, {0: c})

    @classmethod
    def monomial(cls, d: int, m: int, c: int = 1) -> Polynomial:
        return reduce_flt(d, {m: c})

    @property
    def degree(self) -> int:
        # the zero polynomial has degree 0 by convention
        for m in range(self.d - 2, -1, -1):
            if self.coeffs[m]:
                return m
        return 0

    @property
    def shift(self) -> int:
        return self.coeffs[0]

    @property
    def is_shifted(self) -> bool:
        return self.coeffs[0] != 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, x: int) -> int:
        if x % self.d == 0:
            raise ParameterError("polynomial functions are defined on nonzero arguments only")
        return sum(c * pow(x, m, self.d) for m, c in enumerate(self.coeffs)) % self.d

    def evaluate(self) -> np.ndarray:
        return evaluate(self)

    def __add__(self, other: Polynomial) -> Polynomial:
        _same_field(self, other)
        return Polynomial(self.d, tuple((a + b) % self.d for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> Polynomial:
        return Polynomial(self.d, tuple(-a % self.d for a in self.coeffs))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return Polynomial(self.d, tuple(a * other % self.d for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        out = Polynomial.constant(self.d, 1)
        for _ in range(e):
            out = poly_mul(out, self)
        return out

    def __str__(self) -> str:
        terms = []
        for m, c in enumerate(self.coeffs):
            if not c:
                continue
            if m == 0:
                terms.append(str(c))
            else:
                mono = "x" if m == 1 else f"x^{m}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


def _same_field(a: Polynomial, b: Polynomial) -> None:
    if a.d != b.d:
        raise ParameterError(f"moduli differ: {a.d} vs {b.d}")


def reduce_flt(d: int, raw: Mapping[int, int]) -> Polynomial:
    """Fold ``{exponent: coefficient}`` into canonical form on F_d^*.

    >>> reduce_flt(7, {9: 1}).coeffs
    (0, 0, 0, 1, 0, 0)
    """
    coeffs = [0] * (d - 1)
    for m, c in raw.items():
        if m < 0:
            raise ParameterError("exponents must be nonnegative")
        coeffs[m % (d - 1)] += c
    return Polynomial(d, tuple(c % d for c in coeffs))


@lru_cache(maxsize=None)
def power_table(d: int) -> np.ndarray:
    """``T[m, x - 1] = x**m mod d`` for ``m, x - 1`` in ``[0, d - 2]``."""
    xs = np.arange(1, d, dtype=np.int64)
    T = np.ones((d - 1, d - 1), dtype=np.int64)
    for m in range(1, d - 1):
        T[m] = T[m - 1] * xs % d
    T.setflags(write=False)
    return T


@lru_cache(maxsize=None)
def interpolation_matrix(d: int) -> np.ndarray:
    """``W`` with ``coeffs = values @ W mod d``.

    Uses the character orthogonality on F_d^*: ``f_m = -sum_x v(x) x^(-m)``.
    """
    T = power_table(d)
    # x^(-m) = x^((d-1-m) mod (d-1))
    inv_rows = T[[(-m) % (d - 1) for m in range(d - 1)]]
    W = (-inv_rows.T) % d
    W.setflags(write=False)
    return W


def evaluate(F: Polynomial) -> np.ndarray:
    """Evaluation vector ``(F(1), ..., F(d-1))``."""
    return evaluate_batch(np.asarray(F.coeffs, dtype=np.int64)[None, :], F.d)[0]


def evaluate_batch(coeffs: np.ndarray, d: int) -> np.ndarray:
    """Evaluate each row of ``coeffs`` (low-order first, up to ``d - 1`` columns)."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    k = coeffs.shape[-1]
    if k > d - 1:
        raise ParameterError("use reduce_flt for exponents beyond d - 2")
    # float matmul goes through BLAS and is exact while k * d**2 < 2**53
    prod = coeffs.astype(np.float64) @ power_table(d)[:k].astype(np.float64)
    return prod.astype(np.int64) % d


def interpolate(values: Iterable[int], d: int) -> Polynomial:
    v = np.asarray(list(values), dtype=np.int64)
    if v.shape != (d - 1,):
        raise ParameterError(f"evaluation vector must have length {d - 1}")
    return Polynomial(d, tuple(int(c) for c in interpolate_batch(v[None, :], d)[0]))


def interpolate_batch(values: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(values, dtype=np.int64) % d @ interpolation_matrix(d) % d


def poly_mul(F: Polynomial, G: Polynomial) -> Polynomial:
    _same_field(F, G)
    out = poly_mul_batch(np.asarray([F.coeffs]), np.asarray([G.coeffs]), F.d)[0]
    return Polynomial(F.d, tuple(int(c) for c in out))


def poly_mul_batch(A: np.ndarray, B: np.ndarray, d: int) -> np.ndarray:
    """Row-wise product with exponents folded mod ``d - 1``.

    Rows may be shorter than ``d - 1`` (higher coefficients taken as zero);
    the result always has ``d - 1`` columns.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    rows = max(A.shape[0], B.shape[0])
    At = np.ascontiguousarray(np.broadcast_to(A, (rows, A.shape[1])).T)
    Bt = np.ascontiguousarray(np.broadcast_to(B, (rows, B.shape[1])).T)
    return np.ascontiguousarray(poly_mul_columns(At, Bt, d).T).astype(np.int64)


def poly_mul_columns(At: np.ndarray, Bt: np.ndarray, d: int) -> np.ndarray:
    """:func:`poly_mul_batch` on transposed ``(coefficient, row)`` arrays.

    Column-major keeps every monomial pair on contiguous memory; int32 is
    ample since entries stay below ``(d - 1) * d**2``.
    """
    L = d - 1
    At = At.astype(np.int32, copy=False)
    Bt = Bt.astype(np.int32, copy=False)
    out = np.zeros((L, At.shape[1]), dtype=np.int32)
    a_cols = [i for i in range(At.shape[0]) if At[i].any()]
    b_cols = [j for j in range(Bt.shape[0]) if Bt[j].any()]
    for i in a_cols:
        for j in b_cols:
            out[(i + j) % L] += At[i] * Bt[j]
    out %= d
    return out


def power_sum(H: Polynomial, check: bool = True) -> int:
    """``S(H) = sum_{x != 0} H(x)``, which equals ``-h_0 mod d``.

    With ``check`` the closed form is compared against the direct sum.
    """
    closed = -H.coeffs[0] % H.d
    if check:
        direct = int(evaluate(H).sum() % H.d)
        if direct != closed:
            raise ConsistencyError(f"power sum mismatch for {H}: closed {closed}, direct {direct}")
    return closed


def power_sum_batch(coeffs: np.ndarray, d: int, check: bool = True) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.int64)
    closed = -coeffs[:, 0] % d
    if check:
        direct = evaluate_batch(coeffs, d).sum(axis=1) % d
        bad = np.flatnonzero(direct != closed)
        if bad.size:
            raise ConsistencyError(f"power sum mismatch on row {bad[0]}")
    return closed


def count_roots(F: Polynomial) -> int:
    """Number of distinct nonzero roots, i.e. zeros of the evaluation vector."""
    return int(np.count_nonzero(evaluate(F) == 0))


def cubic_residues(d: int) -> frozenset[int]:
    return frozenset(pow(b, 3, d) for b in range(1, d))


def coefficient_grid(d: int, k: int) -> np.ndarray:
    """All ``d**k`` vectors in F_d^k as rows, lexicographic with the last column fastest."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((d,) * k, dtype=np.int64).reshape(k, -1).T
    return np.ascontiguousarray(grid)


def iter_coefficients(d: int, k: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(d), repeat=k)


def rank_mod_p(M: np.ndarray, d: int) -> int:
    """Rank of an integer matrix over F_d (Gaussian elimination)."""
    A = [[int(v) % d for v in row] for row in np.asarray(M)]
    rank, cols = 0, len(A[0]) if A else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, d)
        A[rank] = [v * inv % d for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                f = A[i][col]
                A[i] = [(u - f * v) % d for u, v in zip(A[i], A[rank])]
        rank += 1
    return rank
