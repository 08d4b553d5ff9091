"""Magic-state distillation statistics for the QRM codes.

One round consumes ``n = d - 1`` noisy magic states.  Depolarizing noise of
infidelity ``eps`` is diagonal in the twisted basis ``M Z^k |+>``, so each input
carries an independent phase error ``k`` with ``p(0) = 1 - eps`` and
``p(k) = eps / (d - 1)`` otherwise.  The round accepts iff the error vector
passes every X-type check (its polynomial has degree <= d - 2 - r) and leaves
the output with logical error ``m = sum(e) mod d``.

Everything downstream of the accepted-error table ``N[w][m]`` is a closed-form
polynomial in ``eps``.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .code import QRMCode, build_code
from .errors import CapacityError, ConsistencyError, ParameterError, PrecisionError
from .field_poly import check_dimension, coefficient_grid, evaluate_batch, is_prime
from .gates import max_transversal_degree

BRUTEFORCE_LIMIT = 10**8
_CHUNK = 1 << 16

#: efficiency exponents of qubit protocols, for comparison only
QUBIT_GAMMA = {"15-qubit code": 2.465, "Bravyi-Haah block codes (limit)": 1.585}


@dataclass(frozen=True)
class NoiseModel:
    d: int
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ParameterError(f"epsilon={self.epsilon} outside [0, 1]")

    def class_probabilities(self) -> np.ndarray:
        p = np.full(self.d, self.epsilon / (self.d - 1))
        p[0] = 1.0 - self.epsilon
        return p


@dataclass
class AcceptedEnumerator:
    """``counts[w, m]``: accepted phase errors of weight ``w`` and logical class ``m``."""

    d: int
    r: int
    counts: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.d - 1

    def total(self) -> int:
        return int(sum(int(c) for c in self.counts.ravel()))

    def validate(self) -> None:
        d, r, N = self.d, self.r, self.counts
        if N.shape != (self.n + 1, d):
            raise ConsistencyError(f"table shape {N.shape} != {(self.n + 1, d)}")
        if self.total() != d ** (d - 1 - r):
            raise ConsistencyError(f"table total {self.total()} != {d}^{d - 1 - r}")
        if N[0, 0] != 1 or N[0, 1:].any():
            raise ConsistencyError("weight-0 row must be the identity only")
        if N[1 : r + 1, 1:].any():
            raise ConsistencyError(f"logical error of weight <= {r} is accepted")

    def min_logical_weight(self) -> int:
        ws = np.flatnonzero(self.counts[:, 1:].any(axis=1))
        return int(ws[0])

    def to_json(self) -> str:
        rows = [
            [w, m, int(self.counts[w, m])]
            for w in range(self.n + 1)
            for m in range(self.d)
            if self.counts[w, m]
        ]
        return json.dumps({"d": self.d, "r": self.r, "counts": rows}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> AcceptedEnumerator:
        data = json.loads(text)
        d, r = int(data["d"]), int(data["r"])
        counts = np.zeros((d, d), dtype=np.int64)
        for w, m, c in data["counts"]:
            counts[w, m] = c
        return cls(d, r, counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AcceptedEnumerator):
            return NotImplemented
        return (self.d, self.r) == (other.d, other.r) and np.array_equal(self.counts, other.counts)


def _bruteforce_slice(d: int, r: int, g0: int) -> np.ndarray:
    """Counts for accepted errors whose polynomial has constant term ``g0``."""
    s = d - 2 - r
    counts = np.zeros(d * d, dtype=np.int64)
    grid = coefficient_grid(d, s)
    for lo in range(0, grid.shape[0], _CHUNK):
        block = grid[lo : lo + _CHUNK]
        tail_eval = evaluate_batch(np.concatenate([np.zeros((block.shape[0], 1), np.int64), block], 1), d)
        e = (tail_eval + g0) % d
        w = np.count_nonzero(e, axis=1)
        m = e.sum(axis=1) % d
        counts += np.bincount(w * d + m, minlength=counts.size)
    return counts


def accepted_enumerator_bruteforce(
    code: QRMCode, limit: int = BRUTEFORCE_LIMIT, workers: int = 1
) -> AcceptedEnumerator:
    """Walk every coefficient vector ``(g_0, ..., g_{d-2-r})`` and tally its evaluation.

    Work is split by ``g_0``; with ``workers > 1`` the slices run in separate
    processes and are summed, which gives the same table in any order.
    """
    d, r = code.d, code.r
    size = d ** (d - 1 - r)
    if size > limit:
        raise CapacityError(
            f"{d}^{d - 1 - r} = {size} error vectors exceed {limit}; use method='charsum'"
        )
    job = partial(_bruteforce_slice, d, r)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            slices = list(pool.map(job, range(d)))
    else:
        slices = [job(g0) for g0 in range(d)]
    counts = np.sum(slices, axis=0).reshape(d, d)
    table = AcceptedEnumerator(d, r, counts)
    table.validate()
    return table


def root_count_histograms(code: QRMCode) -> np.ndarray:
    """``A[t, k]``: unshifted ``f`` of degree <= r for which ``f + t`` has ``k`` nonzero roots.

    The unshifted polynomials of degree <= r are exactly the X-type stabilizer
    vectors (the dual of the accepted set).
    """
    d, r, n = code.d, code.r, code.n
    grid = coefficient_grid(d, r)
    A = np.zeros((d, n + 1), dtype=np.int64)
    values = np.arange(d, dtype=np.int64)
    for lo in range(0, grid.shape[0], _CHUNK):
        block = grid[lo : lo + _CHUNK]
        F = evaluate_batch(np.concatenate([np.zeros((block.shape[0], 1), np.int64), block], 1), d)
        # hist[i, v] = #{x : F_i(x) = v}; roots of F_i + t are the x with F_i(x) = -t
        hist = (F[:, :, None] == values).sum(axis=1)
        for t in range(d):
            A[t] += np.bincount(hist[:, (-t) % d], minlength=n + 1)
    return A


def _weight_polynomials(d: int) -> list[list[int]]:
    """Coefficients of ``(1 + (d-1) z)^k (1 - z)^(n-k)`` for ``k = 0..n``."""
    n = d - 1
    out = []
    for k in range(n + 1):
        poly = [1]
        for factor in [[1, d - 1]] * k + [[1, -1]] * (n - k):
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i] += c * factor[0]
                nxt[i + 1] += c * factor[1]
            poly = nxt
        out.append(poly)
    return out


def accepted_enumerator_charsum(code: QRMCode) -> AcceptedEnumerator:
    """Same table as the brute force, via a character transform over the checks.

    With ``[e accepted] = d^-r sum_f omega^<e,f>`` over unshifted ``f`` of degree
    <= r and ``[sum e = m] = d^-1 sum_t omega^(t(sum e - m))``, the sum over ``e``
    factorizes per site, each site contributing ``1 + (d-1) z`` where
    ``f(x) + t = 0`` and ``1 - z`` elsewhere.  Scaling ``f -> c f`` shows the
    root histograms agree for every ``t != 0``, so the character sum
    over ``t`` collapses to integers and the transform is exact.  A nonzero
    remainder in the final division raises :class:`PrecisionError`.
    """
    d, r, n = code.d, code.r, code.n
    A = root_count_histograms(code)
    if not (A[1:] == A[1]).all():
        raise ConsistencyError("root histograms differ between nonzero shifts")
    W = _weight_polynomials(d)
    scale = d ** (r + 1)
    counts = np.zeros((n + 1, d), dtype=np.int64)
    for m in range(d):
        char = d if m == 0 else 0
        acc = [0] * (n + 1)
        for k in range(n + 1):
            c = int(A[0, k]) + int(A[1, k]) * (char - 1)
            if c:
                for w, coeff in enumerate(W[k]):
                    acc[w] += c * coeff
        for w, total in enumerate(acc):
            q, rem = divmod(total, scale)
            if rem:
                raise PrecisionError(f"N[{w}][{m}] has residual {rem}/{scale}")
            counts[w, m] = q
    table = AcceptedEnumerator(d, r, counts)
    table.validate()
    return table


def accepted_enumerator(code: QRMCode, method: str = "auto", workers: int = 1) -> AcceptedEnumerator:
    if method == "auto":
        method = "bruteforce" if code.d ** (code.d - 1 - code.r) <= BRUTEFORCE_LIMIT else "charsum"
    if method == "bruteforce":
        return accepted_enumerator_bruteforce(code, workers=workers)
    if method == "charsum":
        return accepted_enumerator_charsum(code)
    raise ParameterError(f"unknown method {method!r}")


@dataclass(frozen=True)
class DistillationOutcome:
    epsilon: float
    p_accept: float
    logical_dist: np.ndarray = field(repr=False)
    eps_out: float


def _class_weights(N: AcceptedEnumerator, eps: float) -> np.ndarray:
    n, d = N.n, N.d
    w = np.arange(n + 1)
    # 0.0 ** 0 == 1 keeps eps = 0 exact
    per_weight = (1.0 - eps) ** (n - w) * (eps / (d - 1)) ** w
    return per_weight @ N.counts.astype(np.float64)


def distill_map(N: AcceptedEnumerator, eps: float) -> DistillationOutcome:
    """Acceptance probability and output error after one round at input ``eps``.

    ``eps_out`` is summed over the nonzero classes rather than taken as
    ``1 - P(0)`` so that it stays accurate deep in the ``eps**D`` regime.
    """
    if not 0.0 <= eps < 1.0:
        raise ParameterError(f"eps={eps} outside [0, 1)")
    P = _class_weights(N, eps)
    p_accept = float(P.sum())
    dist = P / p_accept
    return DistillationOutcome(float(eps), p_accept, dist, float(P[1:].sum() / p_accept))


@dataclass(frozen=True)
class ThresholdResult:
    d: int
    r: int
    eps_star: float | None
    bracket: tuple[float, float] | None
    tol: float
    iterations: int

    @property
    def found(self) -> bool:
        return self.eps_star is not None


def threshold(
    code_or_table: QRMCode | AcceptedEnumerator,
    tol: float = 1e-6,
    step: float = 0.01,
    method: str = "auto",
) -> ThresholdResult:
    """Smallest ``eps > 0`` where one round stops reducing the error.

    A scan of step ``step`` brackets the first crossing of
    ``eps_out(eps) - eps`` and bisection narrows it to width ``tol``.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    N = code_or_table
    if isinstance(N, QRMCode):
        N = accepted_enumerator(N, method=method)
    d = N.d

    def gap(eps: float) -> float:
        return distill_map(N, eps).eps_out - eps

    top = 1.0 - 1.0 / d
    lo = 0.0
    hi = None
    for i in range(1, int(math.ceil(top / step))):
        eps = i * step
        if eps >= top:
            break
        if gap(eps) >= 0:
            hi = eps
            break
        lo = eps
    if hi is None:
        return ThresholdResult(d, N.r, None, None, tol, 0)
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) >= 0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    eps_star = 0.5 * (lo + hi)
    return ThresholdResult(d, N.r, eps_star, (lo, hi), tol, iterations)


def gamma(d: int) -> float:
    """Efficiency exponent ``log(d-1) / log(D)`` with ``D = floor((d+1)/3)``."""
    if d < 5:
        raise ParameterError(f"gamma needs d >= 5, got {d}")
    if not is_prime(d):
        raise ParameterError(f"dimension d={d} is not prime")
    return math.log(d - 1) / math.log((d + 1) // 3)


def scaling_exponent(N: AcceptedEnumerator, eps_grid: Sequence[float]) -> float:
    """Least-squares slope of ``log eps_out`` against ``log eps``."""
    eps = np.asarray(eps_grid, dtype=np.float64)
    out = np.array([distill_map(N, e).eps_out for e in eps])
    if (out <= 0).any() or not np.isfinite(out).all():
        raise ParameterError("eps_out underflows on this grid; widen it")
    slope, _ = np.polyfit(np.log(eps), np.log(out), 1)
    return float(slope)


@dataclass(frozen=True)
class GammaPoint:
    d: int
    r: int
    D: int
    gamma: float

    @property
    def residue(self) -> int:
        return self.d % 3


def gamma_curves(d_list: Sequence[int]) -> list[GammaPoint]:
    points = []
    for d in d_list:
        d = check_dimension(d)
        r = max_transversal_degree(d)
        points.append(GammaPoint(d, r, r + 1, gamma(d)))
    return points


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(max(lo, 5), hi + 1) if is_prime(p)]


def enumerator_for(d: int, r: int | None = None, method: str = "auto", workers: int = 1) -> AcceptedEnumerator:
    r = max_transversal_degree(d) if r is None else r
    return accepted_enumerator(build_code(d, r), method=method, workers=workers)
