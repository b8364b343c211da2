"""Benchmark targets and seeded fixtures.

The XX-chain benchmark is reconstructed from first principles: the periodic
hopping matrix is diagonalized by the real Fourier modes (cosine/sine
recombinations of the +-k momentum pairs), whose amplitudes for n in {4, 8}
are eighth roots of unity up to normalization and therefore lie in the
dyadic ring.  Doubling that orthogonal mode map onto interleaved Majorana
pairs yields an exact special orthogonal matrix that block-diagonalizes the
coupling matrix; that block-diagonalization is the defining property and is
verified in ring arithmetic at construction time.  Gate-level layouts of
the same diagonalizer differ from this one by mode ordering only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SynthesisError
from .ring import ONE, ZERO, RingScalar
from .somat import GateKind, GeneratorId, TransferMatrix, eval_product


class UnsupportedSizeError(DomainError):
    """The XX benchmark is exact only for n in {4, 8}."""


@dataclass(frozen=True)
class XxTarget:
    n: int
    q_dis: TransferMatrix
    h_xx: tuple[tuple[int, ...], ...]
    gamma0: TransferMatrix
    spectrum: tuple[RingScalar, ...]


# cos(m * pi/4) as ring scalars, m mod 8
_COS_EIGHTH = {
    0: RingScalar(1, 0, 0),
    1: RingScalar(1, 0, 1),
    2: RingScalar(0, 0, 0),
    3: RingScalar(-1, 0, 1),
    4: RingScalar(-1, 0, 0),
    5: RingScalar(-1, 0, 1),
    6: RingScalar(0, 0, 0),
    7: RingScalar(1, 0, 1),
}


def _cos_ring(two_pi_times: int, n: int) -> RingScalar:
    """cos(2*pi*two_pi_times/n) for n in {4, 8}, exactly."""
    m = (two_pi_times * 8 // n) % 8
    return _COS_EIGHTH[m]


def _sin_ring(two_pi_times: int, n: int) -> RingScalar:
    return _cos_ring(two_pi_times - n // 4, n)  # sin x = cos(x - pi/2)


def vacuum_covariance(n: int) -> TransferMatrix:
    """Direct sum of n blocks [[0, 1], [-1, 0]]."""
    dim = 2 * n
    rows = [[ZERO for _ in range(dim)] for _ in range(dim)]
    for j in range(n):
        rows[2 * j][2 * j + 1] = ONE
        rows[2 * j + 1][2 * j] = RingScalar(-1, 0, 0)
    return TransferMatrix(n, rows)


def xx_coupling(n: int) -> tuple[tuple[int, ...], ...]:
    """Antisymmetric Majorana coupling matrix of the periodic XX chain."""
    dim = 2 * n
    h = [[0] * dim for _ in range(dim)]
    for s in range(n):
        a, b = (2 * s) % dim, (2 * s + 3) % dim
        h[a][b] += 1
        h[b][a] -= 1
        a, b = (2 * s + 1) % dim, (2 * s + 2) % dim
        h[a][b] -= 1
        h[b][a] += 1
    return tuple(tuple(r) for r in h)


def _fourier_modes(n: int) -> list[tuple[list[RingScalar], RingScalar]]:
    """Real orthonormal eigenmodes of the periodic hopping matrix.

    Returns (column, energy) pairs ordered k = 0, (cos_1, sin_1), ...,
    (cos_{n/2-1}, sin_{n/2-1}), k = n/2.  All amplitudes are exact ring
    scalars for n in {4, 8}.
    """
    inv_sqrt_n = {4: RingScalar(1, 0, 2), 8: RingScalar(1, 0, 3)}[n]
    sqrt_2_over_n = {4: RingScalar(1, 0, 1), 8: RingScalar(1, 0, 2)}[n]
    two = RingScalar(2, 0, 0)
    modes: list[tuple[list[RingScalar], RingScalar]] = []
    modes.append(([inv_sqrt_n for _ in range(n)], two))
    for k in range(1, n // 2):
        energy = two * _cos_ring(k, n)
        cos_col = [sqrt_2_over_n * _cos_ring(k * j, n) for j in range(n)]
        sin_col = [sqrt_2_over_n * _sin_ring(k * j, n) for j in range(n)]
        modes.append((cos_col, energy))
        modes.append((sin_col, energy))
    alternating = [inv_sqrt_n if j % 2 == 0 else -inv_sqrt_n for j in range(n)]
    modes.append((alternating, RingScalar(-2, 0, 0)))
    return modes


def xx_target(n: int) -> XxTarget:
    """Exact diagonalizing transfer matrix for the XX chain, n in {4, 8}."""
    if n not in (4, 8):
        raise UnsupportedSizeError(f"XX benchmark defined for n in {{4, 8}}, got {n}")
    modes = _fourier_modes(n)
    dim = 2 * n
    rows = [[ZERO for _ in range(dim)] for _ in range(dim)]
    for m, (col, _energy) in enumerate(modes):
        for j in range(n):
            v = col[j]
            rows[2 * m][2 * j] = v
            rows[2 * m + 1][2 * j + 1] = v
    q = TransferMatrix(n, rows)
    if not q.is_special_orthogonal():
        raise SynthesisError("mode matrix is not special orthogonal")  # bug trap
    h = xx_coupling(n)
    spectrum = _verify_block_diagonalization(q, h)
    want = sorted((RingScalar(2, 0, 0) * _cos_ring(k, n)).to_float() for k in range(n))
    got = sorted(e.to_float() for e in spectrum)
    if any(abs(a - b) > 1e-12 for a, b in zip(want, got)):
        raise SynthesisError("block spectrum does not match the single-particle energies")
    return XxTarget(
        n=n,
        q_dis=q,
        h_xx=h,
        gamma0=vacuum_covariance(n),
        spectrum=tuple(spectrum),
    )


def _verify_block_diagonalization(
    q: TransferMatrix, h: tuple[tuple[int, ...], ...]
) -> list[RingScalar]:
    """Check q h q^T = direct sum of [[0, e], [-e, 0]] blocks, exactly."""
    dim = 2 * q.n
    h_ring = [[RingScalar(v, 0, 0) for v in row] for row in h]
    qh = [
        [_dot(q.rows[i], [h_ring[r][j] for r in range(dim)]) for j in range(dim)]
        for i in range(dim)
    ]
    out = [
        [_dot(qh[i], list(q.rows[j])) for j in range(dim)]  # (q h) q^T
        for i in range(dim)
    ]
    energies = []
    for i in range(dim):
        for j in range(dim):
            v = out[i][j]
            same_block = i // 2 == j // 2
            if not same_block and not v.is_zero():
                raise SynthesisError(f"off-block entry ({i},{j}) = {v} is nonzero")
            if i == j and not v.is_zero():
                raise SynthesisError("diagonal of an antisymmetric form is nonzero")
    for b in range(q.n):
        e = out[2 * b][2 * b + 1]
        if out[2 * b + 1][2 * b] != -e:
            raise SynthesisError("block is not antisymmetric")
        energies.append(e)
    return energies


def _dot(xs, ys) -> RingScalar:
    acc = ZERO
    for x, y in zip(xs, ys):
        if (x.a or x.b) and (y.a or y.b):
            acc = acc + x * y
    return acc


# -- seeded fixtures -----------------------------------------------------


def random_ring_target(n: int, t_budget: int, seed: int) -> TransferMatrix:
    """Product of a seeded gate word with exactly ``t_budget`` T-kind gates.

    Clifford gates are interleaved in bounded numbers; the result always has
    k_max <= t_budget.
    """
    rng = random.Random(seed)
    word = random_gate_word(n, t_budget, rng)
    return eval_product(n, word)


def random_gate_word(n: int, t_budget: int, rng: random.Random) -> list[GeneratorId]:
    cliff_kinds = [GateKind.S, GateKind.SINV] + ([GateKind.R, GateKind.RINV] if n > 1 else [])
    word: list[GeneratorId] = []

    def push_cliffords(count: int) -> None:
        for _ in range(count):
            kind = rng.choice(cliff_kinds)
            hi = n if kind in (GateKind.S, GateKind.SINV) else n - 1
            word.append(GeneratorId(kind, rng.randint(1, hi)))

    push_cliffords(rng.randint(1, 3))
    for _ in range(t_budget):
        kind = rng.choice((GateKind.T, GateKind.TINV))
        word.append(GeneratorId(kind, rng.randint(1, n)))
        push_cliffords(rng.randint(1, 3))
    return word


def random_haar_so(n: int, seed: int) -> np.ndarray:
    """Haar sample from SO(2n) via sign-fixed QR of a Gaussian matrix."""
    rng = np.random.default_rng(seed)
    dim = 2 * n
    g = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q
