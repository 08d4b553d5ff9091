"""Shortened quantum Reed-Muller codes on ``n = d - 1`` qudits.

Qudit ``x - 1`` (for ``x`` in F_d^*) carries the value ``F(x)`` of a polynomial
function.  The degree-``r`` code is stabilized by

* ``X_F`` for unshifted ``F`` of degree at most ``r`` (generators ``x^1..x^r``),
* ``Z_G`` for unshifted ``G`` of degree at most ``d - 2 - r``
  (generators ``x^1..x^(d-2-r)``),

with logical operators ``X^{(x)n}`` (the constant polynomial 1) and
``(Z^-1)^{(x)n}`` (the constant -1).  A Z-type error ``e`` commutes with every
X-type generator iff its interpolating polynomial has degree at most
``d - 2 - r``; its logical class is then ``sum(e) mod d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ParameterError
from .field_poly import (
    Polynomial,
    check_dimension,
    coefficient_grid,
    count_roots,
    evaluate,
    evaluate_batch,
    interpolate,
    interpolate_batch,
    reduce_flt,
)

#: default cap on the number of vectors a brute-force enumeration may visit
ENUMERATION_LIMIT = 2 * 10**7


@dataclass(frozen=True)
class PauliOperator:
    """Phase-free qudit Pauli ``prod_i X_i^x[i] Z_i^z[i]``."""

    d: int
    x: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ParameterError("x and z parts differ in length")

    @classmethod
    def from_vectors(cls, d: int, x, z) -> PauliOperator:
        return cls(d, tuple(int(a) % d for a in x), tuple(int(b) % d for b in z))

    @classmethod
    def identity(cls, d: int, n: int) -> PauliOperator:
        return cls(d, (0,) * n, (0,) * n)

    @classmethod
    def x_type(cls, F: Polynomial) -> PauliOperator:
        return cls.from_vectors(F.d, evaluate(F), [0] * (F.d - 1))

    @classmethod
    def z_type(cls, G: Polynomial) -> PauliOperator:
        return cls.from_vectors(G.d, [0] * (G.d - 1), evaluate(G))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def symplectic(self, other: PauliOperator) -> int:
        if other.n != self.n:
            raise ParameterError("operators act on different numbers of qudits")
        s = sum(a * b for a, b in zip(self.x, other.z)) - sum(a * b for a, b in zip(self.z, other.x))
        return s % self.d

    def commutes_with(self, other: PauliOperator) -> bool:
        return self.symplectic(other) == 0

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return PauliOperator.from_vectors(
            self.d,
            [a + b for a, b in zip(self.x, other.x)],
            [a + b for a, b in zip(self.z, other.z)],
        )

    def power(self, k: int) -> PauliOperator:
        return PauliOperator.from_vectors(self.d, [k * a for a in self.x], [k * b for b in self.z])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.x + self.z, dtype=np.int64)

    def __str__(self) -> str:
        sites = []
        for a, b in zip(self.x, self.z):
            s = (f"X{a}" if a else "") + (f"Z{b}" if b else "")
            sites.append(s or "I")
        return " ".join(sites)


@dataclass(frozen=True)
class QRMCode:
    d: int
    r: int
    x_stabilizers: tuple[PauliOperator, ...] = field(repr=False)
    z_stabilizers: tuple[PauliOperator, ...] = field(repr=False)
    logical_x: PauliOperator = field(repr=False)
    logical_z: PauliOperator = field(repr=False)

    @property
    def n(self) -> int:
        return self.d - 1

    @property
    def k(self) -> int:
        return 1

    @property
    def distance(self) -> int:
        """Designed distance ``r + 1``; see :func:`z_distance` for the computed value."""
        return self.r + 1

    @property
    def z_degree_bound(self) -> int:
        """Largest degree of an undetected Z-error polynomial."""
        return self.d - 2 - self.r

    @property
    def transversal(self) -> bool:
        return 3 * self.r < self.d - 1

    @property
    def generators(self) -> tuple[PauliOperator, ...]:
        return self.x_stabilizers + self.z_stabilizers

    def symplectic_matrix(self) -> np.ndarray:
        """Generators as rows ``[x | z]`` over F_d."""
        return np.stack([g.as_array() for g in self.generators])

    def x_check_matrix(self) -> np.ndarray:
        """Rows ``(F(1), ..., F(d-1))`` for ``F = x^m``, ``m = 1..r``."""
        return np.stack([np.asarray(g.x, dtype=np.int64) for g in self.x_stabilizers])

    def __str__(self) -> str:
        return f"[[{self.n},{self.k},{self.distance}]]_{self.d} (r={self.r})"


def build_code(d: int, r: int) -> QRMCode:
    d = check_dimension(d)
    if not 1 <= r <= d - 3:
        raise ParameterError(f"degree r={r} outside [1, {d - 3}] for d={d}")
    xs = tuple(PauliOperator.x_type(Polynomial.monomial(d, m)) for m in range(1, r + 1))
    zs = tuple(PauliOperator.z_type(Polynomial.monomial(d, m)) for m in range(1, d - 1 - r))
    n = d - 1
    return QRMCode(
        d=d,
        r=r,
        x_stabilizers=xs,
        z_stabilizers=zs,
        logical_x=PauliOperator.from_vectors(d, [1] * n, [0] * n),
        logical_z=PauliOperator.from_vectors(d, [0] * n, [d - 1] * n),
    )


def syndrome(code: QRMCode, P: PauliOperator) -> tuple[int, ...]:
    if P.n != code.n or P.d != code.d:
        raise ParameterError(f"operator on {P.n} qudits (d={P.d}) does not fit {code}")
    return tuple(g.symplectic(P) for g in code.generators)


def logical_class_of_z_error(code: QRMCode, e) -> tuple[bool, int]:
    """Return ``(detected, m)`` for the phase error ``Z_e``.

    ``m = sum(e) mod d`` is the power of the logical Z class and is only
    meaningful when the error is undetected (``m == 0`` means a stabilizer).
    """
    e = np.asarray(e, dtype=np.int64) % code.d
    if e.shape != (code.n,):
        raise ParameterError(f"error vector must have length {code.n}")
    detected = interpolate(e, code.d).degree > code.z_degree_bound
    return bool(detected), int(e.sum() % code.d)


def logical_state_support(code: QRMCode, k: int) -> np.ndarray:
    """Evaluation vectors of every ``F`` with ``f_0 = k`` and degree at most ``r``.

    Returns a ``(d**r, n)`` array; row order follows :func:`coefficient_grid`.
    """
    d, r = code.d, code.r
    coeffs = np.concatenate(
        [np.full((d**r, 1), k % d, dtype=np.int64), coefficient_grid(d, r)], axis=1
    )
    return evaluate_batch(coeffs, d)


def undetected_z_errors(code: QRMCode, leading: int | None = None) -> np.ndarray:
    """Evaluation vectors of all polynomials of degree <= ``d - 2 - r``.

    With ``leading`` set, only the slice whose constant term equals ``leading``.
    """
    d, s = code.d, code.z_degree_bound
    if leading is None:
        coeffs = coefficient_grid(d, s + 1)
    else:
        coeffs = np.concatenate(
            [np.full((d**s, 1), leading % d, dtype=np.int64), coefficient_grid(d, s)], axis=1
        )
    return evaluate_batch(coeffs, d)


def _z_distance_enumerate(code: QRMCode) -> int:
    d, s = code.d, code.z_degree_bound
    best = code.n
    tail = coefficient_grid(d, s)
    for g0 in range(1, d):
        block = np.concatenate([np.full((tail.shape[0], 1), g0, dtype=np.int64), tail], axis=1)
        weights = np.count_nonzero(evaluate_batch(block, d), axis=1)
        best = min(best, int(weights.min()))
    return best


def z_distance_witness(code: QRMCode) -> Polynomial:
    """A shifted polynomial of degree ``d - 2 - r`` with that many nonzero roots."""
    d = code.d
    G = Polynomial.constant(d, 1)
    for a in range(1, code.z_degree_bound + 1):
        G = G * reduce_flt(d, {1: 1, 0: -a})
    return G


def z_distance(code: QRMCode, limit: int = ENUMERATION_LIMIT) -> int:
    """Minimum weight of an undetected, non-stabilizer phase error.

    Enumerates every coefficient vector when ``(d-1) * d**(d-2-r)`` fits in
    ``limit``.  Otherwise the value follows from a root-count lower bound plus
    an explicit witness, both checked here.
    """
    d, s = code.d, code.z_degree_bound
    if (d - 1) * d**s <= limit:
        return _z_distance_enumerate(code)
    # lower bound: a shifted G of degree <= s is nonzero and has at most s roots
    bound = code.n - s
    witness = z_distance_witness(code)
    detected, m = logical_class_of_z_error(code, evaluate(witness))
    if detected or m == 0 or witness.degree != s or count_roots(witness) != s:
        raise AssertionError(f"distance witness {witness} is invalid for {code}")
    weight = code.n - count_roots(witness)
    assert weight == bound
    return weight


def stabilizer_group(code: QRMCode) -> np.ndarray:
    """All ``d**(n-1)`` stabilizer elements as symplectic rows."""
    S = code.symplectic_matrix()
    k = S.shape[0]
    if code.d**k > ENUMERATION_LIMIT:
        raise CapacityError(f"stabilizer group of size {code.d}^{k} exceeds {ENUMERATION_LIMIT}")
    return coefficient_grid(code.d, k) @ S % code.d


def _encode_rows(rows: np.ndarray, d: int) -> np.ndarray:
    radix = d ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ radix


def full_distance_bruteforce(
    code: QRMCode, limit: int = 10**6, part: str = "both"
) -> int:
    """Exact distance by scanning every symplectic vector.

    ``part`` selects all Paulis (``"both"``), X-only or Z-only operators.  Only
    practical for ``d = 5``; larger instances raise :class:`CapacityError`.
    """
    d, n = code.d, code.n
    free = {"both": 2 * n, "x": n, "z": n}[part]
    if d**free > limit:
        raise CapacityError(f"{d}^{free} Pauli operators exceed the limit {limit}")
    grid = coefficient_grid(d, free)
    zeros = np.zeros_like(grid)
    vecs = {"both": grid, "x": np.concatenate([grid, zeros], 1), "z": np.concatenate([zeros, grid], 1)}[part]
    S = code.symplectic_matrix()
    # sigma(g, P) = g.x . P.z - g.z . P.x
    omega = np.concatenate([-S[:, n:], S[:, :n]], axis=1) % d
    undetected = vecs[~(vecs @ omega.T % d).any(axis=1)]
    in_group = np.isin(_encode_rows(undetected, d), _encode_rows(stabilizer_group(code), d))
    logical = undetected[~in_group]
    weights = np.count_nonzero(logical[:, :n] | logical[:, n:], axis=1)
    return int(weights.min())


def undetected_z_polynomials_degree_check(code: QRMCode, errors: np.ndarray) -> np.ndarray:
    """Degrees of the interpolating polynomials of rows of ``errors``."""
    coeffs = interpolate_batch(errors, code.d)
    nz = coeffs != 0
    return np.where(nz.any(axis=1), code.d - 2 - np.argmax(nz[:, ::-1], axis=1), 0)
