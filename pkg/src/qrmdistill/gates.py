"""Diagonal phase gates ``omega**p(n)`` handled symbolically over F_d.

``M_mu = omega**(mu n^3)`` is the cubic phase gate.  This module classifies
phase polynomials by Clifford-hierarchy level, checks that the product gate
``M_{-mu}`` on every qudit acts as logical ``M_mu`` on the Reed-Muller
codewords, and sorts ``mu`` into Clifford-equivalence classes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import QRMCode, logical_state_support
from .errors import CapacityError, ConsistencyError, ParameterError
from .field_poly import (
    Polynomial,
    check_dimension,
    coefficient_grid,
    cubic_residues,
    is_prime,
    poly_mul_columns,
    power_sum_batch,
)

_CHUNK = 1 << 17
# d^(r+1) support polynomials per check; d=17, r=5 needs 2.4e7
CHECK_LIMIT = 3 * 10**7


@dataclass(frozen=True)
class PhasePolynomial:
    """Exponent ``a0 + a1 n + a2 n^2 + a3 n^3`` (mod d) of a diagonal gate."""

    d: int
    coeffs: tuple[int, int, int, int]

    @classmethod
    def make(cls, d: int, *coeffs: int) -> PhasePolynomial:
        padded = list(coeffs) + [0] * (4 - len(coeffs))
        if len(padded) != 4:
            raise ParameterError("phase polynomials have degree at most 3")
        return cls(d, tuple(int(c) % d for c in padded))

    @classmethod
    def clifford_diagonal(cls, d: int, alpha: int, beta: int) -> PhasePolynomial:
        return cls.make(d, 0, alpha, beta)

    @classmethod
    def cubic(cls, d: int, mu: int) -> PhasePolynomial:
        return cls.make(d, 0, 0, 0, mu)

    @property
    def degree(self) -> int:
        for m in (3, 2, 1):
            if self.coeffs[m]:
                return m
        return 0

    def __call__(self, x: int) -> int:
        return sum(c * x**m for m, c in enumerate(self.coeffs)) % self.d

    def phases(self) -> np.ndarray:
        """Exponent at every basis label 0..d-1."""
        xs = np.arange(self.d, dtype=np.int64)
        return sum(c * xs**m for m, c in enumerate(self.coeffs)) % self.d

    def __str__(self) -> str:
        names = ("", "n", "n^2", "n^3")
        terms = [f"{c}{names[m]}" for m, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def conjugate_x_by_m(mu: int, d: int) -> PhasePolynomial:
    """Diagonal part of ``M_mu X M_mu^dag X^-1``: ``mu((n+1)^3 - n^3)``."""
    # (n+1)^3 - n^3 = 3n^2 + 3n + 1
    return PhasePolynomial.make(d, mu, 3 * mu, 3 * mu)


def hierarchy_level(g: PhasePolynomial) -> int:
    """Clifford-hierarchy level of the diagonal gate ``omega**g``."""
    if g.d == 3:
        raise ParameterError("the cubic-gate argument does not apply to d = 3")
    if not is_prime(g.d) or g.d < 3:
        raise ParameterError(f"unsupported dimension {g.d}")
    deg = g.degree
    if deg <= 1:
        return 1
    if deg == 2:
        return 2
    a3 = g.coeffs[3]
    if (3 * a3) % g.d == 0:
        raise ParameterError(f"cubic coefficient {a3} is annihilated by 3 mod {g.d}")
    return 3


def max_transversal_degree(d: int) -> int:
    d = check_dimension(d)
    r = (d - 2) // 3
    assert 3 * r < d - 1 and r + 1 == (d + 1) // 3
    return r


@dataclass(frozen=True)
class TransversalityReport:
    d: int
    r: int
    mu: int
    holds: bool
    checked: int
    witness: Polynomial | None = None
    observed: int | None = None
    expected: int | None = None

    def __str__(self) -> str:
        head = f"d={self.d} r={self.r} mu={self.mu}: "
        if self.holds:
            return head + f"transversal M holds on all {self.checked} support polynomials"
        return head + (
            f"FAILS at F(x) = {self.witness}: phase exponent {self.observed}, "
            f"logical M_mu requires {self.expected}"
        )


def _cube_power_sums(code: QRMCode, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``S(F^3)`` for every support polynomial with shift ``k``.

    Returns ``(coeffs, sums)``; the polynomial route is checked against a
    pointwise sum of cubed evaluations.
    """
    d, r = code.d, code.r
    coeffs = np.concatenate(
        [np.full((d**r, 1), k, dtype=np.int64), coefficient_grid(d, r)], axis=1
    )
    sums = np.empty(coeffs.shape[0], dtype=np.int64)
    support = logical_state_support(code, k)
    for lo in range(0, coeffs.shape[0], _CHUNK):
        block = coeffs[lo : lo + _CHUNK]
        cols = np.ascontiguousarray(block.T)
        cube = poly_mul_columns(poly_mul_columns(cols, cols, d), cols, d)
        closed = power_sum_batch(cube[:1].T, d, check=False)
        direct = (support[lo : lo + _CHUNK] ** 3).sum(axis=1) % d
        if not np.array_equal(closed, direct):
            i = int(np.flatnonzero(closed != direct)[0])
            raise ConsistencyError(f"S(F^3) mismatch for coefficients {block[i].tolist()}")
        sums[lo : lo + _CHUNK] = closed
    return coeffs, sums


def transversality_check_all(code: QRMCode, mus=None) -> list[TransversalityReport]:
    """Run :func:`transversality_check` for several ``mu`` sharing one enumeration."""
    d = code.d
    mus = list(range(1, d)) if mus is None else [int(m) % d for m in mus]
    if any(m == 0 for m in mus):
        raise ParameterError("mu must be nonzero")
    if d ** (code.r + 1) > CHECK_LIMIT:
        raise CapacityError(f"{d}^{code.r + 1} support polynomials exceed {CHECK_LIMIT}")
    per_k = [_cube_power_sums(code, k) for k in range(d)]
    reports = []
    for mu in mus:
        report = None
        for k, (coeffs, sums) in enumerate(per_k):
            # M_{-mu} on every qudit multiplies |psi_F> by omega^(-mu S(F^3))
            observed = -mu * sums % d
            expected = mu * k**3 % d
            bad = np.flatnonzero(observed != expected)
            if bad.size:
                i = int(bad[0])
                F = Polynomial.from_coeffs(d, coeffs[i].tolist())
                report = TransversalityReport(
                    d, code.r, mu, False, d ** (code.r + 1), F, int(observed[i]), expected
                )
                break
        reports.append(report or TransversalityReport(d, code.r, mu, True, d ** (code.r + 1)))
    return reports


def transversality_check(code: QRMCode, mu: int) -> TransversalityReport:
    """Check that ``M_{-mu}`` on all qudits acts as logical ``M_mu``.

    Every ``F`` of degree at most ``r`` is cubed and summed over F_d^*; the
    gate is a logical ``M_mu`` iff ``-mu S(F^3) = mu f_0^3`` for all of them.
    """
    return transversality_check_all(code, [mu])[0]


@dataclass(frozen=True)
class MuClassification:
    d: int
    classes: tuple[tuple[int, ...], ...]

    def class_of(self, mu: int) -> tuple[int, ...]:
        for c in self.classes:
            if mu % self.d in c:
                return c
        raise ParameterError(f"mu={mu} is zero or out of range")

    def equivalent(self, mu: int, nu: int) -> bool:
        return nu % self.d in self.class_of(mu)


def mu_equivalence_classes(d: int) -> MuClassification:
    """Cosets of the cubic residues in F_d^*: ``mu ~ nu`` iff ``nu / mu`` is a cube."""
    d = check_dimension(d)
    residues = cubic_residues(d)
    seen: set[int] = set()
    classes = []
    for mu in range(1, d):
        if mu in seen:
            continue
        coset = tuple(sorted(mu * c % d for c in residues))
        seen.update(coset)
        classes.append(coset)
    return MuClassification(d, tuple(classes))
