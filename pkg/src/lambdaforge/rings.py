"""Coefficient rings: Z, Q, F_p, and Z/p^N with exact arithmetic.

Coefficients are plain ``int`` (Z, F_p, Z/p^N; residues canonical in
[0, modulus)) or ``fractions.Fraction`` (Q).  Everything is
arbitrary precision; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

Coef = Union[int, Fraction]

INTEGERS = "integers"
RATIONALS = "rationals"
PRIME_FIELD = "prime_field"
TRUNCATED_PADIC = "truncated_padic"


def is_prime(n: int) -> bool:
    """Trial-division primality check; fine at the scales used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoefRing:
    """One of Z, Q, F_p, Z/p^N.

    Z/p^N is a quotient ring, not a field: division is only by units.
    """

    kind: str
    p: int | None = None
    N: int | None = None

    def __post_init__(self):
        if self.kind not in (INTEGERS, RATIONALS, PRIME_FIELD, TRUNCATED_PADIC):
            raise DomainError(f"unknown ring kind {self.kind!r}")
        if self.kind in (PRIME_FIELD, TRUNCATED_PADIC):
            if self.p is None or not is_prime(self.p):
                raise DomainError(f"modulus base {self.p!r} is not prime")
        if self.kind == TRUNCATED_PADIC:
            if self.N is None or self.N < 1:
                raise DomainError(f"precision N={self.N!r} must be >= 1")
        if self.kind in (INTEGERS, RATIONALS) and (self.p is not None or self.N is not None):
            raise DomainError(f"{self.kind} takes no modulus parameters")
        if self.kind == PRIME_FIELD and self.N is not None:
            raise DomainError("prime_field takes no precision N")

    @property
    def modulus(self) -> int | None:
        if self.kind == PRIME_FIELD:
            return self.p
        if self.kind == TRUNCATED_PADIC:
            return self.p ** self.N
        return None

    @property
    def characteristic(self) -> int:
        if self.kind == PRIME_FIELD:
            return self.p
        return 0

    def normalize(self, value) -> Coef:
        """Coerce ints/Fractions/strings to the canonical representative."""
        if isinstance(value, str):
            value = Fraction(value) if "/" in value else int(value)
        if isinstance(value, Fraction) and value.denominator == 1:
            value = int(value)
        m = self.modulus
        if m is not None:
            if isinstance(value, Fraction):
                value = self._fraction_residue(value)
            return value % m
        if self.kind == RATIONALS:
            return value if isinstance(value, Fraction) else Fraction(value)
        if not isinstance(value, int):
            raise DomainError(f"{value!r} is not an integer (ring {self})")
        return value

    def _fraction_residue(self, q: Fraction) -> int:
        m = self.modulus
        if q.denominator % self.p == 0:
            raise DomainError(f"{q} has no residue mod {self.p}^{self.N or 1}")
        return q.numerator * pow(q.denominator, -1, m) % m

    def zero(self) -> Coef:
        return 0 if self.kind != RATIONALS else Fraction(0)

    def one(self) -> Coef:
        return 1 if self.kind != RATIONALS else Fraction(1)

    def add(self, a: Coef, b: Coef) -> Coef:
        m = self.modulus
        return (a + b) % m if m is not None else a + b

    def sub(self, a: Coef, b: Coef) -> Coef:
        m = self.modulus
        return (a - b) % m if m is not None else a - b

    def neg(self, a: Coef) -> Coef:
        m = self.modulus
        return (-a) % m if m is not None else -a

    def mul(self, a: Coef, b: Coef) -> Coef:
        m = self.modulus
        return (a * b) % m if m is not None else a * b

    def is_zero(self, a: Coef) -> bool:
        return a == 0

    def is_unit(self, a: Coef) -> bool:
        if self.kind == INTEGERS:
            return a in (1, -1)
        if self.kind == RATIONALS:
            return a != 0
        if self.kind == PRIME_FIELD:
            return a % self.p != 0
        return a % self.p != 0  # unit in Z/p^N iff prime to p

    def inv(self, a: Coef) -> Coef:
        if not self.is_unit(a):
            raise DomainError(f"{a!r} is not a unit in {self}")
        if self.kind == INTEGERS:
            return a
        if self.kind == RATIONALS:
            return Fraction(1) / a
        return pow(a, -1, self.modulus)

    def divide(self, a: Coef, b: Coef) -> Coef:
        """Exact division; b must be a unit, or divide a exactly over Z."""
        if self.kind == INTEGERS:
            if b == 0:
                raise DomainError("division by zero")
            q, r = divmod(a, b)
            if r != 0:
                raise DomainError(f"{a} is not divisible by {b} over the integers")
            return q
        return self.mul(a, self.inv(b))

    def coef_to_str(self, a: Coef) -> str:
        return str(a)

    def coef_from_str(self, s: str) -> Coef:
        return self.normalize(s)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        if self.N is not None:
            out["N"] = self.N
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CoefRing":
        return cls(obj["kind"], obj.get("p"), obj.get("N"))

    def __str__(self) -> str:
        if self.kind == INTEGERS:
            return "Z"
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == PRIME_FIELD:
            return f"F{self.p}"
        return f"Z/{self.p}^{self.N}"


ZZ = CoefRing(INTEGERS)
QQ = CoefRing(RATIONALS)


def GF(p: int) -> CoefRing:
    return CoefRing(PRIME_FIELD, p)


def ZMOD(p: int, N: int) -> CoefRing:
    return CoefRing(TRUNCATED_PADIC, p, N)
