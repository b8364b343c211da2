"""Transfer matrices over D[sqrt(2)] and the discrete generator families.

The three generator families are plane rotations of R^(2n):

* ``T`` on the odd plane pair (2q-1, 2q) with block [[1,1],[-1,1]]/sqrt(2),
* ``S`` on the same plane pair, a signed transposition [[0,1],[-1,0]],
* ``R`` on the even plane pair (2q, 2q+1), the same signed transposition.

Inverse kinds are the transposes.  Convention: a gate sequence
``g_1, ..., g_d`` in time order (``g_1`` applied first) corresponds to the
matrix product ``G_d ... G_2 G_1`` acting on Majorana column vectors; this
orientation is pinned once by the dense-simulation homomorphism test.
"""

from __future__ import annotations

import enum
import json
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionError, NotInRingError, RangeError
from .ring import ONE, ZERO, RingScalar


class GateKind(str, enum.Enum):
    T = "T"
    TINV = "Tinv"
    S = "S"
    SINV = "Sinv"
    R = "R"
    RINV = "Rinv"


_INVERSE = {
    GateKind.T: GateKind.TINV,
    GateKind.TINV: GateKind.T,
    GateKind.S: GateKind.SINV,
    GateKind.SINV: GateKind.S,
    GateKind.R: GateKind.RINV,
    GateKind.RINV: GateKind.R,
}

T_KINDS = frozenset({GateKind.T, GateKind.TINV})
SINGLE_QUBIT_KINDS = frozenset({GateKind.T, GateKind.TINV, GateKind.S, GateKind.SINV})


class GeneratorId(NamedTuple):
    """A discrete gate: ``kind`` plus a 1-based qubit (or bond) index."""

    kind: GateKind
    site: int

    def inverse(self) -> "GeneratorId":
        return GeneratorId(_INVERSE[self.kind], self.site)

    def is_t_kind(self) -> bool:
        return self.kind in T_KINDS

    def qubits(self) -> tuple[int, ...]:
        if self.kind in SINGLE_QUBIT_KINDS:
            return (self.site,)
        return (self.site, self.site + 1)

    def plane(self) -> int:
        """0-based row index p; the gate rotates rows (p, p+1)."""
        if self.kind in SINGLE_QUBIT_KINDS:
            return 2 * self.site - 2
        return 2 * self.site - 1

    def validate(self, n: int) -> None:
        if self.kind in SINGLE_QUBIT_KINDS:
            if not 1 <= self.site <= n:
                raise RangeError(f"{self.kind.value} site {self.site} out of range for n={n}")
        else:
            if not 1 <= self.site <= n - 1:
                raise RangeError(f"{self.kind.value} bond {self.site} out of range for n={n}")


def _identity_rows(n: int) -> list[list[RingScalar]]:
    dim = 2 * n
    return [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)]


def apply_generator_rows(rows: list[list[RingScalar]], gid: GeneratorId) -> None:
    """In-place left multiplication of ``rows`` by the generator matrix."""
    p = gid.plane()
    rp, rq = rows[p], rows[p + 1]
    kind = gid.kind
    if kind is GateKind.T:
        rows[p] = [(x + y).div_sqrt2() for x, y in zip(rp, rq)]
        rows[p + 1] = [(y - x).div_sqrt2() for x, y in zip(rp, rq)]
    elif kind is GateKind.TINV:
        rows[p] = [(x - y).div_sqrt2() for x, y in zip(rp, rq)]
        rows[p + 1] = [(x + y).div_sqrt2() for x, y in zip(rp, rq)]
    elif kind in (GateKind.S, GateKind.R):
        rows[p] = rq
        rows[p + 1] = [-x for x in rp]
    else:  # Sinv / Rinv
        rows[p] = [-y for y in rq]
        rows[p + 1] = rp


class TransferMatrix:
    """Immutable 2n x 2n matrix of ring scalars."""

    __slots__ = ("n", "rows", "_k_max", "_so")

    def __init__(self, n: int, rows: Sequence[Sequence[RingScalar]]) -> None:
        dim = 2 * n
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise DimensionError(f"expected {dim}x{dim} matrix")
        self.n = n
        self.rows = tuple(tuple(r) for r in rows)
        self._k_max: int | None = None
        self._so: bool | None = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "TransferMatrix":
        return cls(n, _identity_rows(n))

    @classmethod
    def from_json_dict(cls, data: dict) -> "TransferMatrix":
        try:
            n = int(data["n"])
            k = int(data["scale_k"])
            a = data["a"]
            b = data["b"]
        except (KeyError, TypeError, ValueError) as exc:
            raise NotInRingError(f"malformed matrix JSON: {exc}") from exc
        if k < 0:
            raise NotInRingError("scale_k must be non-negative")
        dim = 2 * n
        if len(a) != dim or len(b) != dim:
            raise DimensionError("matrix JSON has wrong dimensions")
        rows = []
        for i in range(dim):
            if len(a[i]) != dim or len(b[i]) != dim:
                raise DimensionError("matrix JSON has ragged rows")
            row = []
            for j in range(dim):
                ai, bi = a[i][j], b[i][j]
                if not isinstance(ai, int) or not isinstance(bi, int):
                    raise NotInRingError("matrix JSON entries must be integers")
                row.append(RingScalar(ai, bi, k))
            rows.append(row)
        return cls(n, rows)

    def to_json_dict(self) -> dict:
        k = self.k_max()
        a = [[e._upscaled(k)[0] for e in row] for row in self.rows]
        b = [[e._upscaled(k)[1] for e in row] for row in self.rows]
        return {"n": self.n, "scale_k": k, "a": a, "b": b}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    # -- queries ----------------------------------------------------------

    def k_max(self) -> int:
        if self._k_max is None:
            self._k_max = max(e.k for row in self.rows for e in row)
        return self._k_max

    def entry(self, i: int, j: int) -> RingScalar:
        return self.rows[i][j]

    def transpose(self) -> "TransferMatrix":
        dim = 2 * self.n
        return TransferMatrix(self.n, [[self.rows[j][i] for j in range(dim)] for i in range(dim)])

    def matmul(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.n != other.n:
            raise DimensionError("matmul requires equal qubit counts")
        dim = 2 * self.n
        cols = [[other.rows[r][c] for r in range(dim)] for c in range(dim)]
        out = []
        for i in range(dim):
            row_i = self.rows[i]
            out_row = []
            for j in range(dim):
                acc = ZERO
                col_j = cols[j]
                for r in range(dim):
                    x = row_i[r]
                    if x.a or x.b:
                        acc = acc + x * col_j[r]
                out_row.append(acc)
            out.append(out_row)
        return TransferMatrix(self.n, out)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return self.matmul(other)

    def is_special_orthogonal(self) -> bool:
        if self._so is None:
            self._so = self._check_orthogonal() and self._det_sign() == 1
        return self._so

    def _check_orthogonal(self) -> bool:
        dim = 2 * self.n
        for i in range(dim):
            for j in range(i, dim):
                acc = ZERO
                for r in range(dim):
                    x = self.rows[r][i]
                    if x.a or x.b:
                        acc = acc + x * self.rows[r][j]
                want = ONE if i == j else ZERO
                if acc != want:
                    return False
        return True

    def _det_sign(self) -> int:
        """Sign of the determinant via fraction-free elimination over Z[sqrt(2)].

        Works on the matrix scaled by sqrt(2)**k_max, whose determinant is
        +-2**(n*k_max) for orthogonal input.
        """
        k = self.k_max()
        dim = 2 * self.n
        m = [[e._upscaled(k) for e in row] for row in self.rows]
        sign = 1
        prev = (1, 0)
        for col in range(dim - 1):
            pivot_row = None
            for r in range(col, dim):
                if m[r][col] != (0, 0):
                    pivot_row = r
                    break
            if pivot_row is None:
                return 0
            if pivot_row != col:
                m[col], m[pivot_row] = m[pivot_row], m[col]
                sign = -sign
            pc = m[col][col]
            for r in range(col + 1, dim):
                mr = m[r]
                mrc = mr[col]
                for c in range(col + 1, dim):
                    num = _z2_sub(_z2_mul(pc, mr[c]), _z2_mul(mrc, m[col][c]))
                    mr[c] = _z2_divexact(num, prev)
                mr[col] = (0, 0)
            prev = pc
        det_a, det_b = m[dim - 1][dim - 1]
        det_a *= sign
        det_b *= sign
        if det_b != 0:
            raise NotInRingError("determinant of scaled orthogonal matrix not rational")
        scale = 1 << (self.n * k)
        if det_a == scale:
            return 1
        if det_a == -scale:
            return -1
        # Non-orthogonal input; only the sign is meaningful.
        return 1 if det_a > 0 else -1

    def to_float_array(self):
        import numpy as np

        return np.array([[e.to_float() for e in row] for row in self.rows], dtype=float)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"TransferMatrix(n={self.n}, k_max={self.k_max()})"


def _z2_mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _z2_sub(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    return (x[0] - y[0], x[1] - y[1])


def _z2_divexact(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    # x / y = x * (y0 - y1 s) / (y0^2 - 2 y1^2); exact by Bareiss theory.
    norm = y[0] * y[0] - 2 * y[1] * y[1]
    na = x[0] * y[0] - 2 * x[1] * y[1]
    nb = x[1] * y[0] - x[0] * y[1]
    qa, ra = divmod(na, norm)
    qb, rb = divmod(nb, norm)
    if ra or rb:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return (qa, qb)


def generator(n: int, gid: GeneratorId) -> TransferMatrix:
    """Exact 2n x 2n matrix of a single generator."""
    gid.validate(n)
    rows = _identity_rows(n)
    apply_generator_rows(rows, gid)
    return TransferMatrix(n, rows)


def eval_product(n: int, gates: Iterable[GeneratorId]) -> TransferMatrix:
    """Exact product ``G_d ... G_1`` of a gate word in time order."""
    rows = _identity_rows(n)
    for gid in gates:
        gid.validate(n)
        apply_generator_rows(rows, gid)
    return TransferMatrix(n, rows)


def k_max(q: TransferMatrix) -> int:
    return q.k_max()


def is_special_orthogonal(q: TransferMatrix) -> bool:
    return q.is_special_orthogonal()
