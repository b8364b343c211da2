"""Dense desk-scale simulation of matchgate unitaries (default cap: 6 qubits).

This module carries the floating-point side of the toolkit: building gate
unitaries, extracting their action on the Majorana sector, phase-insensitive
distances, the operator-entanglement and stabilizer-entropy diagnostics, and
the numeric check that errors lift from the 2n-dimensional orthogonal
representation to the full unitary with at most a (pi/2)*n factor.

Index convention (pinned by the homomorphism test in the suite): the
transfer matrix of a unitary ``U`` has entries

    Q[r][c] = 2**(-n) * Tr[c_r U c_c U^dagger],

which maps gate products in time order onto matrix products ``G_d ... G_1``
and reproduces the discrete generator matrices of :mod:`mgsynth.somat`
exactly for ``Rz(pi/4)``, ``Rz(pi/2)`` and ``Rxx(pi/2)``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

import numpy as np
import scipy.linalg

from .circuits import Circuit
from .errors import (
    CapError,
    DimensionError,
    NormalizationError,
    NotMatchgateError,
    NotOrthogonalError,
)
from .somat import GateKind, GeneratorId

QUBIT_CAP = 6

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_cap(n: int, cap: int | None = None) -> None:
    limit = QUBIT_CAP if cap is None else cap
    if n > limit:
        raise CapError(f"dense simulation capped at {limit} qubits, got n={n}")


def _kron_chain(labels: str) -> np.ndarray:
    out = _PAULI[labels[0]]
    for ch in labels[1:]:
        out = np.kron(out, _PAULI[ch])
    return out


@lru_cache(maxsize=8)
def majorana_ops(n: int) -> tuple[np.ndarray, ...]:
    """The 2n Jordan-Wigner Majorana operators c_1 ... c_2n."""
    ops = []
    for q in range(1, n + 1):
        prefix = "Z" * (q - 1)
        suffix = "I" * (n - q)
        ops.append(_kron_chain(prefix + "X" + suffix))
        ops.append(_kron_chain(prefix + "Y" + suffix))
    for op in ops:
        op.setflags(write=False)
    return tuple(ops)


def rz_unitary(n: int, q: int, theta: float, cap: int | None = None) -> np.ndarray:
    """exp(i*theta*Z_q/2) on qubit q (1-based)."""
    _check_cap(n, cap)
    if not 1 <= q <= n:
        raise DimensionError(f"qubit {q} out of range for n={n}")
    dim = 1 << n
    bit = n - q  # qubit 1 is the most significant factor
    idx = np.arange(dim)
    z = 1 - 2 * ((idx >> bit) & 1)
    return np.diag(np.exp(0.5j * theta * z))


def rxx_unitary(n: int, q: int, theta: float, cap: int | None = None) -> np.ndarray:
    """exp(i*theta*X_q X_{q+1}/2) on neighboring qubits (q, q+1)."""
    _check_cap(n, cap)
    if not 1 <= q <= n - 1:
        raise DimensionError(f"bond {q} out of range for n={n}")
    dim = 1 << n
    b1, b2 = n - q, n - q - 1
    idx = np.arange(dim)
    flipped = idx ^ ((1 << b1) | (1 << b2))
    u = np.zeros((dim, dim), dtype=complex)
    u[idx, idx] = np.cos(theta / 2)
    u[flipped, idx] = 1j * np.sin(theta / 2)
    return u


_GATE_ANGLES = {
    GateKind.T: np.pi / 4,
    GateKind.TINV: -np.pi / 4,
    GateKind.S: np.pi / 2,
    GateKind.SINV: -np.pi / 2,
    GateKind.R: np.pi / 2,
    GateKind.RINV: -np.pi / 2,
}


def generator_unitary(n: int, gid: GeneratorId, cap: int | None = None) -> np.ndarray:
    """Dense unitary of one discrete gate."""
    gid.validate(n)
    theta = _GATE_ANGLES[gid.kind]
    if gid.kind in (GateKind.R, GateKind.RINV):
        return rxx_unitary(n, gid.site, theta, cap)
    return rz_unitary(n, gid.site, theta, cap)


def gate_unitary(n: int, gate, cap: int | None = None) -> np.ndarray:
    """Dense unitary for a discrete gate or a continuous planar rotation.

    Accepts a :class:`GeneratorId` or any object with ``plane`` (1-based)
    and ``theta`` attributes; odd planes are z-rotations on qubit
    (plane+1)/2, even planes are xx-rotations on bond plane/2.
    """
    if isinstance(gate, GeneratorId):
        return generator_unitary(n, gate, cap)
    plane, theta = gate.plane, gate.theta
    if plane % 2 == 1:
        return rz_unitary(n, (plane + 1) // 2, theta, cap)
    return rxx_unitary(n, plane // 2, theta, cap)


def circuit_unitary(
    n: int, circuit: Circuit | Iterable[GeneratorId], cap: int | None = None
) -> np.ndarray:
    """Dense unitary of a circuit or flat gate word, first gate applied first."""
    _check_cap(n, cap)
    gates = circuit.gates() if isinstance(circuit, Circuit) else list(circuit)
    u = np.eye(1 << n, dtype=complex)
    for gid in gates:
        u = generator_unitary(n, gid, cap) @ u
    return u


def transfer_matrix(u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Extract the 2n x 2n orthogonal action of a matchgate unitary.

    Raises :class:`NotMatchgateError` when the result fails orthogonality
    within ``tol`` (the a-posteriori matchgate check).
    """
    dim = u.shape[0]
    n = int(round(np.log2(dim)))
    if 1 << n != dim or u.shape != (dim, dim):
        raise DimensionError("unitary must be 2^n x 2^n")
    cs = majorana_ops(n)
    udag = u.conj().T
    q = np.empty((2 * n, 2 * n), dtype=float)
    for c_idx in range(2 * n):
        v = u @ cs[c_idx] @ udag
        for r_idx in range(2 * n):
            val = np.einsum("ij,ji->", cs[r_idx], v) / dim
            q[r_idx, c_idx] = val.real
    if np.linalg.norm(q.T @ q - np.eye(2 * n)) > tol * (2 * n):
        raise NotMatchgateError("conjugation does not preserve the Majorana sector")
    return q


def op_norm_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Spectral-norm distance ||u - v||."""
    if u.shape != v.shape:
        raise DimensionError("operands differ in shape")
    return float(np.linalg.norm(u - v, 2))


def adjoint_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-insensitive distance ||u (x) u* - v (x) v*||.

    Computed from the eigenphases of w = u^dagger v: the superoperator difference
    has eigenvalues exp(i(t_j - t_k)) - 1, so the norm is the largest
    pairwise chord distance between eigenvalues of w on the unit circle.
    """
    if u.shape != v.shape:
        raise DimensionError("operands differ in shape")
    w = u.conj().T @ v
    lam = np.linalg.eigvals(w)
    lam /= np.abs(lam)
    return float(np.max(np.abs(lam[:, None] - lam[None, :])))


def phase_aligned_dist(u: np.ndarray, v: np.ndarray) -> float:
    """min over global phases of ||exp(i*phi) u - v||.

    Equals max_j |exp(i*phi) - lambda_j| for the eigenvalues of u^dagger v at the
    optimal phase, i.e. the chord radius of the smallest arc enclosing the
    eigenvalues; satisfies d(u, v) <= 2 * phase_aligned_dist(u, v).
    """
    if u.shape != v.shape:
        raise DimensionError("operands differ in shape")
    lam = np.linalg.eigvals(u.conj().T @ v)
    lam /= np.abs(lam)
    phases = np.sort(np.angle(lam))
    gaps = np.diff(np.concatenate([phases, [phases[0] + 2 * np.pi]]))
    arc = 2 * np.pi - float(np.max(gaps))
    if arc < np.pi:
        return float(2 * np.sin(arc / 4))
    # wide spread: minimize over a fine grid of candidate phases
    grid = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    cand = np.exp(1j * grid)
    return float(np.min(np.max(np.abs(cand[:, None] - lam[None, :]), axis=1)))


def operator_entanglement(u: np.ndarray) -> float:
    """Linear entropy 1 - sum s_i^4 of the operator-Schmidt spectrum.

    Defined here for two-qubit operators, across the qubit bipartition of
    the normalized vectorization.
    """
    if u.shape != (4, 4):
        raise DimensionError("operator entanglement implemented for 2-qubit operators")
    m = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    s = np.linalg.svd(m, compute_uv=False)
    total = np.sum(s**2)
    if total == 0:
        raise DimensionError("zero operator")
    p = s**2 / total
    return float(max(0.0, 1.0 - np.sum(p**2)))


def stabilizer_entropy(state: np.ndarray, tol: float = 1e-9, cap: int | None = None) -> float:
    """2^(-n) * sum over all Pauli strings P of <P>^4 for a pure state."""
    state = np.asarray(state, dtype=complex).ravel()
    dim = state.shape[0]
    n = int(round(np.log2(dim)))
    if 1 << n != dim:
        raise DimensionError("state length must be a power of two")
    _check_cap(n, cap)
    if abs(np.linalg.norm(state) - 1.0) > tol:
        raise NormalizationError("state is not normalized")
    rho = np.outer(state, state.conj())
    # Contract each qubit's (row, col) index pair against the Pauli basis:
    # coeff tensor c[p_1..p_n] = Tr(rho * P_{p_1} x ... x P_{p_n}).
    paulis = np.stack([_PAULI[ch] for ch in "IXYZ"])  # axes [p, row, col]
    t = rho.reshape((2,) * (2 * n))
    for step in range(n):
        rem = n - step
        # axes: [i_1..i_rem, j_1..j_rem, p...]; fold qubit via
        # sum_{i,j} t[i,..,j,..] * P[p][j][i]
        t = np.tensordot(t, paulis, axes=([0, rem], [2, 1]))
    coeffs = t.real
    return float(np.sum(coeffs**4) / dim)


# -- lifting SO(2n) elements to the spinor representation ---------------


def _so_canonical_angles(q: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Rotation-plane decomposition of a special orthogonal matrix.

    Returns ``(basis, angles)`` with ``basis`` orthogonal and, writing
    ``o_j`` for its columns, ``q = exp(sum_j angles_j (o_{2j-1} o_{2j}^T -
    o_{2j} o_{2j-1}^T))`` (0-based column pairs).
    """
    dim = q.shape[0]
    t, o = scipy.linalg.schur(q, output="real")
    pairs: list[tuple[np.ndarray, np.ndarray, float]] = []
    plus_ones: list[np.ndarray] = []
    minus_ones: list[np.ndarray] = []
    i = 0
    while i < dim:
        if i + 1 < dim and abs(t[i + 1, i]) > tol:
            lam = float(np.arctan2(t[i, i + 1], t[i, i]))
            pairs.append((o[:, i], o[:, i + 1], lam))
            i += 2
        else:
            (minus_ones if t[i, i] < 0 else plus_ones).append(o[:, i])
            i += 1
    if len(minus_ones) % 2 != 0:
        raise NotOrthogonalError("odd count of -1 eigenvalues; determinant is -1")
    for j in range(0, len(minus_ones), 2):
        pairs.append((minus_ones[j], minus_ones[j + 1], float(np.pi)))
    for j in range(0, len(plus_ones), 2):
        pairs.append((plus_ones[j], plus_ones[j + 1], 0.0))
    cols: list[np.ndarray] = []
    angles: list[float] = []
    for c1, c2, lam in pairs:
        cols.extend((c1, c2))
        angles.append(lam)
    return np.column_stack(cols), np.array(angles)


def _so_log(q: np.ndarray) -> np.ndarray:
    """Real antisymmetric logarithm of a special orthogonal matrix."""
    basis, angles = _so_canonical_angles(q)
    dim = q.shape[0]
    h = np.zeros((dim, dim))
    for j, lam in enumerate(angles):
        o1 = basis[:, 2 * j]
        o2 = basis[:, 2 * j + 1]
        h += lam * (np.outer(o1, o2) - np.outer(o2, o1))
    return h


def lift_orthogonal(q: np.ndarray, tol: float = 1e-9, cap: int | None = None) -> np.ndarray:
    """A unitary whose Majorana action is ``q`` (fixed up to global sign).

    Realized by exponentiating (1/4) sum_{uv} h_{uv} c_u c_v for the
    antisymmetric logarithm ``h`` of ``q``.
    """
    q = np.asarray(q, dtype=float)
    dim = q.shape[0]
    if dim % 2 != 0 or q.shape != (dim, dim):
        raise DimensionError("expected a 2n x 2n matrix")
    n = dim // 2
    _check_cap(n, cap)
    if np.linalg.norm(q.T @ q - np.eye(dim)) > tol * dim:
        raise NotOrthogonalError("input is not orthogonal within tolerance")
    h = _so_log(q)
    cs = majorana_ops(n)
    gen = np.zeros((1 << n, 1 << n), dtype=complex)
    for mu in range(dim):
        for nu in range(mu + 1, dim):
            if h[mu, nu] != 0.0:
                gen += (0.5 * h[mu, nu]) * (cs[mu] @ cs[nu])
    return scipy.linalg.expm(gen)


def check_theorem2(q: np.ndarray, q_eps: np.ndarray, tol: float = 1e-9) -> dict:
    """Numeric check that spin-representation error <= (pi/2) * n * SO error.

    Returns ``{"eps_so", "eps_spin", "bound", "holds"}`` where ``eps_spin``
    is the phase-insensitive distance between the lifted unitaries,
    computed by lifting r = q^T q_eps through its canonical rotation form.
    """
    q = np.asarray(q, dtype=float)
    q_eps = np.asarray(q_eps, dtype=float)
    if q.shape != q_eps.shape:
        raise DimensionError("operands differ in shape")
    dim = q.shape[0]
    n = dim // 2
    _check_cap(n)
    for mat in (q, q_eps):
        if np.linalg.norm(mat.T @ mat - np.eye(dim)) > tol * dim:
            raise NotOrthogonalError("inputs must be orthogonal within 1e-9")
    eps_so = float(np.linalg.norm(q - q_eps, 2))
    r = q.T @ q_eps
    v = lift_orthogonal(r)
    eps_spin = adjoint_dist(np.eye(1 << n, dtype=complex), v)
    bound = 0.5 * np.pi * n * eps_so
    return {
        "eps_so": eps_so,
        "eps_spin": eps_spin,
        "bound": bound,
        "holds": bool(eps_spin <= bound + 1e-9),
    }
