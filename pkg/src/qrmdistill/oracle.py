"""Dense state-vector ground truth for small dimensions (d = 5, optionally 7).

Nothing here reuses the symbolic shortcuts of :mod:`gates` or :mod:`distill`:
gates are explicit matrices, codewords are explicit amplitude vectors and the
code projector is built from the stabilizer generators.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .code import PauliOperator, QRMCode, logical_state_support
from .distill import DistillationOutcome
from .errors import CapacityError, ParameterError
from .field_poly import check_dimension

ATOL = 1e-12
STATE_LIMIT = 7**6
PROJECTOR_LIMIT = 5**4


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


# -- single- and two-qudit gates ------------------------------------------------

def x_gate(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def z_gate(d: int) -> np.ndarray:
    return np.diag(omega(d) ** np.arange(d))


def hadamard(d: int) -> np.ndarray:
    x = np.arange(d)
    return omega(d) ** np.outer(x, x) / np.sqrt(d)


def cz_gate(d: int) -> np.ndarray:
    x = np.arange(d)
    return np.diag((omega(d) ** np.outer(x, x)).ravel())


def z_ab(d: int, alpha: int, beta: int) -> np.ndarray:
    x = np.arange(d)
    return np.diag(omega(d) ** ((alpha * x + beta * x * x) % d))


def x_ab(d: int, alpha: int, beta: int) -> np.ndarray:
    """Permutation ``|x> -> |alpha + beta x>``."""
    if beta % d == 0:
        raise ParameterError("beta = 0 does not give a permutation")
    U = np.zeros((d, d), dtype=complex)
    for x in range(d):
        U[(alpha + beta * x) % d, x] = 1.0
    return U


def m_gate(d: int, mu: int) -> np.ndarray:
    x = np.arange(d)
    return np.diag(omega(d) ** (mu * x**3 % d))


def gate_constructors(d: int) -> dict:
    """Named gate matrices and factories for dimension ``d``."""
    check_dimension(d)
    return {
        "X": x_gate(d),
        "Z": z_gate(d),
        "H": hadamard(d),
        "CZ": cz_gate(d),
        "Xab": lambda a, b: x_ab(d, a, b),
        "Zab": lambda a, b: z_ab(d, a, b),
        "M": lambda mu: m_gate(d, mu),
    }


def is_unitary(U: np.ndarray, atol: float = ATOL) -> bool:
    return np.allclose(U @ U.conj().T, np.eye(U.shape[0]), atol=atol)


def pauli_matrix(d: int, a: int, b: int) -> np.ndarray:
    """``X^a Z^b`` on one qudit."""
    return np.linalg.matrix_power(x_gate(d), a % d) @ np.linalg.matrix_power(z_gate(d), b % d)


def as_pauli(U: np.ndarray, d: int, atol: float = 1e-10) -> tuple[int, int] | None:
    """``(a, b)`` when ``U`` is ``X^a Z^b`` up to a global phase, else ``None``."""
    for a in range(d):
        for b in range(d):
            P = pauli_matrix(d, a, b)
            overlap = np.trace(P.conj().T @ U) / d
            if abs(abs(overlap) - 1) < atol and np.allclose(U, overlap * P, atol=atol):
                return a, b
    return None


def is_clifford(U: np.ndarray, d: int) -> bool:
    """Single-qudit Clifford test: ``U X U^dag`` and ``U Z U^dag`` are Paulis."""
    Ud = U.conj().T
    return as_pauli(U @ x_gate(d) @ Ud, d) is not None and as_pauli(U @ z_gate(d) @ Ud, d) is not None


def diagonal_exponents(U: np.ndarray, d: int, atol: float = 1e-10) -> np.ndarray | None:
    """Integer ``k_x`` with ``U = diag(omega^k_x)``, or ``None`` if ``U`` is not of that form."""
    if not np.allclose(U, np.diag(np.diag(U)), atol=atol):
        return None
    angles = np.angle(np.diag(U)) * d / (2 * np.pi)
    k = np.rint(angles).astype(np.int64)
    if not np.allclose(angles, k, atol=1e-8):
        return None
    return k % d


def fit_phase_polynomial(exponents, d: int) -> tuple[int, ...]:
    """Coefficients (low order first, length d) of the polynomial over F_d through the points."""
    V = np.array([[pow(x, m, d) for m in range(d)] for x in range(d)], dtype=object)
    rhs = [int(e) % d for e in exponents]
    # Gauss-Jordan elimination mod d on the Vandermonde system
    A = [list(V[i]) + [rhs[i]] for i in range(d)]
    for col in range(d):
        piv = next(i for i in range(col, d) if A[i][col] % d)
        A[col], A[piv] = A[piv], A[col]
        inv = pow(int(A[col][col]), -1, d)
        A[col] = [int(v) * inv % d for v in A[col]]
        for i in range(d):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [(u - f * v) % d for u, v in zip(A[i], A[col])]
    return tuple(int(A[i][d]) for i in range(d))


# -- many-qudit states ---------------------------------------------------------

@dataclass
class StateVector:
    d: int
    n: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)


def _check_capacity(d: int, n: int, limit: int = STATE_LIMIT) -> None:
    if d**n > limit:
        raise CapacityError(f"state of dimension {d}^{n} exceeds the budget {limit}")


def basis_index(v, d: int) -> int:
    idx = 0
    for a in v:
        idx = idx * d + int(a)
    return idx


def build_logical_state(code: QRMCode, k: int) -> StateVector:
    """``|k_L>``: uniform superposition over the evaluation vectors with shift ``k``."""
    d, n, r = code.d, code.n, code.r
    _check_capacity(d, n)
    radix = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    amps = np.zeros(d**n, dtype=complex)
    amps[logical_state_support(code, k) @ radix] = d ** (-r / 2)
    return StateVector(d, n, amps)


def apply_local(state: StateVector, U: np.ndarray, site: int) -> StateVector:
    t = np.tensordot(U, state.tensor(), axes=([1], [site]))
    t = np.moveaxis(t, 0, site)
    return StateVector(state.d, state.n, t.reshape(-1))


def apply_product(state: StateVector, gates) -> StateVector:
    """Apply ``gates[i]`` to qudit ``i`` (a single matrix is used on every qudit)."""
    if isinstance(gates, np.ndarray):
        gates = [gates] * state.n
    for site, U in enumerate(gates):
        state = apply_local(state, U, site)
    return state


def apply_pauli(state: StateVector, P: PauliOperator) -> StateVector:
    return apply_product(state, [pauli_matrix(state.d, a, b) for a, b in zip(P.x, P.z)])


def pauli_operator_matrix(P: PauliOperator) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for a, b in zip(P.x, P.z):
        out = np.kron(out, pauli_matrix(P.d, a, b))
    return out


def code_projector(code: QRMCode, generators=None) -> np.ndarray:
    """``prod_g (1/d) sum_j g^j`` over the given (default: all) generators, as a matrix."""
    d, n = code.d, code.n
    if d**n > PROJECTOR_LIMIT:
        raise CapacityError(f"projector of dimension {d}^{n} exceeds {PROJECTOR_LIMIT}")
    generators = code.generators if generators is None else generators
    P = np.eye(d**n, dtype=complex)
    for g in generators:
        G = pauli_operator_matrix(g)
        acc = np.zeros_like(P)
        Gj = np.eye(d**n, dtype=complex)
        for _ in range(d):
            acc += Gj
            Gj = Gj @ G
        P = P @ (acc / d)
    return P


def verify_stabilizers(code: QRMCode, generators=None, atol: float = ATOL) -> bool:
    generators = code.generators if generators is None else generators
    for k in range(code.d):
        ket = build_logical_state(code, k)
        for g in generators:
            if np.abs(apply_pauli(ket, g).amplitudes - ket.amplitudes).max() > atol:
                return False
    return True


def logical_z_phases(code: QRMCode) -> list[complex]:
    """``<k_L| Zbar |k_L>`` for each ``k``."""
    return [
        build_logical_state(code, k).inner(apply_pauli(build_logical_state(code, k), code.logical_z))
        for k in range(code.d)
    ]


def verify_transversality_numeric(code: QRMCode, mu: int, atol: float = ATOL) -> bool:
    """``M_{-mu}`` on every qudit maps ``|k_L>`` to ``omega^(mu k^3) |k_L>`` for all ``k``."""
    d = code.d
    U = m_gate(d, -mu)
    for k in range(d):
        ket = build_logical_state(code, k)
        out = apply_product(ket, U)
        target = omega(d) ** (mu * k**3 % d) * ket.amplitudes
        if np.abs(out.amplitudes - target).max() > atol:
            return False
    return True


def verify_clifford_identities(d: int = 5) -> dict[str, bool]:
    """Matrix checks of the cubic-gate conjugation identities.

    * ``x_conjugation``: ``M X M^dag = X diag(omega^(mu(3x^2+3x+1)))``.
    * ``permutation_conjugation``: ``X_ab^dag M X_ab = diag(omega^(mu(a+bx)^3))``,
      whose cubic coefficient is ``mu b^3``.
    * ``third_level``: ``M X^a Z^b M^dag = C^a Z^b`` up to phase and is Clifford;
      ``M`` itself is not Clifford for ``mu != 0``.
    * ``hadamard_swaps_roles``: ``H`` maps the phase gates ``Z_{a,0}`` to shifts
      and the permutations ``X_ab`` to monomial (permutation times phase) gates.
    """
    d = check_dimension(d)
    X, Z, H = x_gate(d), z_gate(d), hadamard(d)
    xs = np.arange(d)
    out = {"unitary": True, "x_conjugation": True, "permutation_conjugation": True,
           "third_level": True, "hadamard_swaps_roles": True}

    for mu in range(d):
        M = m_gate(d, mu)
        Md = M.conj().T
        out["unitary"] &= is_unitary(M)
        C = X @ np.diag(omega(d) ** (mu * (3 * xs**2 + 3 * xs + 1) % d))
        out["x_conjugation"] &= np.allclose(M @ X @ Md, C, atol=ATOL)
        for a, b in itertools.product(range(d), range(d)):
            conj = M @ pauli_matrix(d, a, b) @ Md
            target = np.linalg.matrix_power(C, a) @ np.linalg.matrix_power(Z, b)
            phase = np.trace(target.conj().T @ conj) / d
            out["third_level"] &= abs(abs(phase) - 1) < 1e-10 and np.allclose(conj, phase * target, atol=1e-10)
            out["third_level"] &= is_clifford(conj, d)
        out["third_level"] &= is_clifford(M, d) == (mu == 0)
        for alpha in range(d):
            for beta in range(1, d):
                P = x_ab(d, alpha, beta)
                D = P.conj().T @ M @ P
                k = diagonal_exponents(D, d)
                ok = k is not None and np.array_equal(k, mu * (alpha + beta * xs) ** 3 % d)
                if ok:
                    coeffs = fit_phase_polynomial(k, d)
                    ok = coeffs[3] == mu * beta**3 % d and not any(coeffs[4:])
                out["permutation_conjugation"] &= ok

    Hd = H.conj().T
    for alpha in range(d):
        shifted = H @ z_ab(d, alpha, 0) @ Hd
        out["hadamard_swaps_roles"] &= as_pauli(shifted, d) is not None
        out["hadamard_swaps_roles"] &= np.allclose(np.abs(shifted), x_ab(d, -alpha, 1).real, atol=1e-10) \
            or np.allclose(np.abs(shifted), x_ab(d, alpha, 1).real, atol=1e-10)
        for beta in range(1, d):
            V = H @ x_ab(d, alpha, beta) @ Hd
            mags = np.abs(V)
            monomial = np.allclose(mags, np.rint(mags), atol=1e-10) and np.allclose(mags.sum(0), 1) \
                and np.allclose(mags.sum(1), 1)
            out["hadamard_swaps_roles"] &= bool(monomial)
    return {k: bool(v) for k, v in out.items()}


# -- noisy magic states and the distillation round ------------------------------

def plus_state(d: int) -> np.ndarray:
    return np.ones(d, dtype=complex) / np.sqrt(d)


def twisted_basis(d: int, mu: int) -> np.ndarray:
    """Columns ``M_mu Z^k |+>`` for ``k = 0..d-1``."""
    return np.stack([m_gate(d, mu) @ np.linalg.matrix_power(z_gate(d), k) @ plus_state(d) for k in range(d)], axis=1)


def depolarized_magic_state(d: int, mu: int, eps: float) -> np.ndarray:
    """``(1-p)|M><M| + p I/d`` with ``p`` chosen so the infidelity is ``eps``."""
    p = eps * d / (d - 1)
    psi = m_gate(d, mu) @ plus_state(d)
    return (1 - p) * np.outer(psi, psi.conj()) + p * np.eye(d) / d


def simulate_distillation_exact(
    code: QRMCode, eps: float, mu: int = 1, limit: int = PROJECTOR_LIMIT
) -> DistillationOutcome:
    """One distillation round simulated on explicit state vectors.

    Each input qudit is the depolarized state ``rho`` of ``M_{-mu}|+>``; the
    ensemble is taken from the eigen-decomposition of ``rho`` itself.  Every
    product branch is projected onto the codespace with the matrix from
    :func:`code_projector`.  The Z-type outcomes are uniformly random and all
    accepted, so the acceptance probability is that of the trivial X syndrome
    given a trivial Z syndrome.  Output classes come from overlaps with the
    logical states ``Mbar Zbar^m |+_L>``.
    """
    d, n = code.d, code.n
    if d**n > limit:
        raise CapacityError(f"{d}^{n} branches exceed the simulation budget {limit}")
    rho = depolarized_magic_state(d, -mu, eps)
    vals, vecs = np.linalg.eigh(rho)
    P_all = code_projector(code)
    P_z = code_projector(code, code.z_stabilizers)

    plus_l = sum(build_logical_state(code, k).amplitudes for k in range(d)) / np.sqrt(d)
    plus_l = StateVector(d, n, plus_l)
    logical_basis = []
    for m in range(d):
        v = apply_pauli(plus_l, code.logical_z.power(m))
        logical_basis.append(apply_product(v, m_gate(d, -mu)).amplitudes)
    L = np.stack(logical_basis)

    p_full = p_z = 0.0
    weights = np.zeros(d)
    keep = [i for i in range(d) if vals[i] > 1e-15]
    for branch in itertools.product(keep, repeat=n):
        prob = float(np.prod(vals[list(branch)]))
        psi = vecs[:, branch[0]]
        for i in branch[1:]:
            psi = np.kron(psi, vecs[:, i])
        projected = P_all @ psi
        p_full += prob * float(np.vdot(projected, projected).real)
        pz = P_z @ psi
        p_z += prob * float(np.vdot(pz, pz).real)
        weights += prob * np.abs(L.conj() @ projected) ** 2
    if abs(weights.sum() - p_full) > 1e-9 * max(p_full, 1e-300):
        raise AssertionError("codespace is not spanned by the logical magic basis")
    p_accept = p_full / p_z
    dist = weights / weights.sum()
    return DistillationOutcome(float(eps), float(p_accept), dist, float(dist[1:].sum()))
