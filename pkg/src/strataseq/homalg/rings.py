"""Coefficient rings: the integers, the rationals, and prime fields F_p.

Scalars are plain Python ints (over Z and F_p) or fractions.Fraction
(over Q).  Everything is exact; no floating point appears anywhere in
the package.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import RingMismatch


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Ring:
    """One of Z, Q or F_p.  Instances are interned, compare by identity."""

    __slots__ = ("name", "char", "is_field")

    def __init__(self, name: str, char: int, is_field: bool):
        self.name = name
        self.char = char
        self.is_field = is_field

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return Fraction(0) if self is QQ else 0

    @property
    def one(self):
        return Fraction(1) if self is QQ else 1

    def coerce(self, x):
        """Normalize a scalar into this ring's canonical representation."""
        if self is QQ:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise RingMismatch(f"cannot coerce {x!r} into Q")
        if not isinstance(x, int):
            if isinstance(x, Fraction) and x.denominator == 1:
                x = x.numerator
            else:
                raise RingMismatch(f"cannot coerce {x!r} into {self.name}")
        return x % self.char if self.char else x

    def normalize(self, x):
        """Cheap post-arithmetic normalization (reduction mod p)."""
        return x % self.char if self.char else x

    def inv(self, x):
        if self is QQ:
            return 1 / Fraction(x)
        if self.char:
            return pow(x, -1, self.char)
        raise RingMismatch("Z is not a field")

    def parse_scalar(self, s: str):
        if self is QQ:
            return Fraction(s)
        return self.coerce(int(s))

    @staticmethod
    def from_name(name: str) -> "Ring":
        """Parse 'Z', 'Q' or 'Fp:<p>' (aliases: 'F<p>', 'GF(<p>)')."""
        name = name.strip()
        if name == "Z":
            return ZZ
        if name == "Q":
            return QQ
        p = None
        if name.startswith("Fp:"):
            p = name[3:]
        elif name.startswith("GF(") and name.endswith(")"):
            p = name[3:-1]
        elif name.startswith("F"):
            p = name[1:]
        if p is not None and p.isdigit():
            return GF(int(p))
        raise RingMismatch(f"unknown ring {name!r}")


ZZ = Ring("Z", 0, False)
QQ = Ring("Q", 0, True)

_prime_fields: dict[int, Ring] = {}


def GF(p: int) -> Ring:
    """The prime field with p elements."""
    if p not in _prime_fields:
        if not _is_prime(p):
            raise RingMismatch(f"{p} is not prime")
        _prime_fields[p] = Ring(f"Fp:{p}", p, True)
    return _prime_fields[p]
