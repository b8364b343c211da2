"""Exact arithmetic in Z[sqrt(2)] and D[sqrt(2)].

A :class:`RingScalar` stores ``(a, b, k)`` and denotes the real number
``(a + b*sqrt(2)) / sqrt(2)**k`` with arbitrary-precision integers ``a, b``
and a non-negative scale exponent ``k``.  Construction always canonicalizes,
so ``k`` is the least denominator exponent of the value: either ``k == 0``
or the numerator ``a + b*sqrt(2)`` is not divisible by ``sqrt(2)`` (``a``
odd).  Zero is represented uniquely as ``(0, 0, 0)``.

The parity (residue) map onto Z2[sqrt(2)] drives the exact synthesis
algorithm: an element of Z[sqrt(2)] is divisible by sqrt(2) exactly when the
parity of its integer part is even.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class Residue:
    """Componentwise parity of an element of Z[sqrt(2)], written "ab"."""

    __slots__ = ("a_parity", "b_parity")

    def __init__(self, a_parity: int, b_parity: int) -> None:
        self.a_parity = a_parity & 1
        self.b_parity = b_parity & 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return (self.a_parity, self.b_parity) == (other.a_parity, other.b_parity)
        if isinstance(other, str):
            return str(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a_parity, self.b_parity))

    def __add__(self, other: "Residue") -> "Residue":
        return Residue(self.a_parity ^ other.a_parity, self.b_parity ^ other.b_parity)

    def __mul__(self, other: "Residue") -> "Residue":
        # (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) s,
        # and 2 b1 b2 vanishes mod 2.
        return Residue(
            self.a_parity & other.a_parity,
            (self.a_parity & other.b_parity) ^ (self.b_parity & other.a_parity),
        )

    def is_reducible(self) -> bool:
        """True when the residue is sqrt(2) times another residue."""
        return self.a_parity == 0

    def is_twice_reducible(self) -> bool:
        """True when the residue is 2 times another residue, i.e. "00"."""
        return self.a_parity == 0 and self.b_parity == 0

    def __str__(self) -> str:
        return f"{self.a_parity}{self.b_parity}"

    def __repr__(self) -> str:
        return f"Residue({self.a_parity}, {self.b_parity})"


def is_reducible(r: Residue) -> bool:
    return r.is_reducible()


def is_twice_reducible(r: Residue) -> bool:
    return r.is_twice_reducible()


class RingScalar:
    """An element of D[sqrt(2)] in canonical (least-denominator) form."""

    __slots__ = ("a", "b", "k")

    def __init__(self, a: int, b: int, k: int = 0) -> None:
        if k < 0:
            raise ValueError("scale exponent must be non-negative")
        # Canonical form: strip factors of sqrt(2) shared by numerator and
        # denominator.  (a + b s)/s = b + (a/2) s when a is even.
        while k > 0 and a & 1 == 0:
            a, b = b, a >> 1
            k -= 1
        if a == 0 and b == 0:
            k = 0
        self.a = a
        self.b = b
        self.k = k

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "RingScalar":
        return cls(n, 0, 0)

    @classmethod
    def zero(cls) -> "RingScalar":
        return cls(0, 0, 0)

    @classmethod
    def one(cls) -> "RingScalar":
        return cls(1, 0, 0)

    @classmethod
    def sqrt2(cls) -> "RingScalar":
        return cls(0, 1, 0)

    @classmethod
    def inv_sqrt2(cls) -> "RingScalar":
        return cls(1, 0, 1)

    @classmethod
    def parse(cls, text: str) -> "RingScalar":
        """Parse the textual form ``"a,b,k"``."""
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"expected 'a,b,k', got {text!r}")
        return cls(int(parts[0]), int(parts[1]), int(parts[2]))

    # -- ring operations ----------------------------------------------

    def _upscaled(self, k: int) -> tuple[int, int]:
        """Integer components at (non-canonical) scale exponent ``k >= self.k``."""
        a, b = self.a, self.b
        for _ in range(k - self.k):
            a, b = 2 * b, a
        return a, b

    def __add__(self, other: "RingScalar") -> "RingScalar":
        if not isinstance(other, RingScalar):
            return NotImplemented
        k = max(self.k, other.k)
        a1, b1 = self._upscaled(k)
        a2, b2 = other._upscaled(k)
        return RingScalar(a1 + a2, b1 + b2, k)

    def __sub__(self, other: "RingScalar") -> "RingScalar":
        if not isinstance(other, RingScalar):
            return NotImplemented
        k = max(self.k, other.k)
        a1, b1 = self._upscaled(k)
        a2, b2 = other._upscaled(k)
        return RingScalar(a1 - a2, b1 - b2, k)

    def __neg__(self) -> "RingScalar":
        return RingScalar(-self.a, -self.b, self.k)

    def __mul__(self, other: "RingScalar") -> "RingScalar":
        if not isinstance(other, RingScalar):
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return RingScalar(a1 * a2 + 2 * b1 * b2, a1 * b2 + b1 * a2, self.k + other.k)

    def mul_sqrt2(self) -> "RingScalar":
        """Exact product with sqrt(2)."""
        return RingScalar(2 * self.b, self.a, self.k)

    def div_sqrt2(self) -> "RingScalar":
        """Exact quotient by sqrt(2)."""
        return RingScalar(self.a, self.b, self.k + 1)

    def conj(self) -> "RingScalar":
        """Galois conjugate (the ring automorphism sending sqrt(2) -> -sqrt(2)).

        Both numerator and denominator conjugate, so for odd ``k`` an overall
        sign appears: sigma(x) = (-1)**k * (a - b*sqrt(2)) / sqrt(2)**k.
        """
        if self.k & 1:
            return RingScalar(-self.a, self.b, self.k)
        return RingScalar(self.a, -self.b, self.k)

    # -- queries --------------------------------------------------------

    def lde(self) -> int:
        """Least denominator exponent (0 for the zero element)."""
        return self.k

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integer_part(self) -> bool:
        """True when the value lies in Z[sqrt(2)]."""
        return self.k == 0

    def residue(self) -> Residue:
        """Componentwise parity; only defined on Z[sqrt(2)]."""
        from .errors import DomainError

        if self.k != 0:
            raise DomainError(f"residue undefined outside Z[sqrt(2)]: {self}")
        return Residue(self.a & 1, self.b & 1)

    def scaled_residue(self, k: int) -> Residue:
        """Residue of ``sqrt(2)**k * self``, which must land in Z[sqrt(2)]."""
        from .errors import DomainError

        t = k - self.k
        if t < 0:
            raise DomainError(f"scale {k} below least denominator exponent {self.k}")
        if t == 0:
            return Residue(self.a & 1, self.b & 1)
        if t == 1:
            return Residue(0, self.a & 1)
        return Residue(0, 0)

    def to_float(self) -> float:
        """Nearest double to the value.

        Evaluated through an integer approximation of sqrt(2) carried with
        enough guard bits that cancellation between ``a`` and ``b*sqrt(2)``
        cannot push the relative error anywhere near a double ulp.
        """
        if self.is_zero():
            return 0.0
        prec = 64 + 2 * max(self.a.bit_length(), self.b.bit_length()) + self.k
        s = isqrt(2 << (2 * prec))  # floor(sqrt(2) * 2**prec)
        num = Fraction((self.a << prec) + self.b * s, 1 << prec)
        num /= Fraction(1 << (self.k // 2))
        if self.k & 1:
            num /= Fraction(s, 1 << prec)
        return float(num)

    # -- protocol -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RingScalar):
            return (self.a, self.b, self.k) == (other.a, other.b, other.k)
        if isinstance(other, int):
            return self.k == 0 and self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.k))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"RingScalar({self.a}, {self.b}, {self.k})"

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.k}"

    def pretty(self) -> str:
        """Human-readable form ``(a+b√2)/√2^k``."""
        num = f"{self.a}" if self.b == 0 else f"{self.a}{self.b:+}√2"
        if self.k == 0:
            return num
        return f"({num})/√2^{self.k}"


ZERO = RingScalar.zero()
ONE = RingScalar.one()
MINUS_ONE = RingScalar.from_int(-1)
SQRT2 = RingScalar.sqrt2()
INV_SQRT2 = RingScalar.inv_sqrt2()


def add(x: RingScalar, y: RingScalar) -> RingScalar:
    return x + y


def mul(x: RingScalar, y: RingScalar) -> RingScalar:
    return x * y


def lde(x: RingScalar) -> int:
    return x.lde()


def residue(x: RingScalar) -> Residue:
    return x.residue()


def to_float(x: RingScalar) -> float:
    return x.to_float()
