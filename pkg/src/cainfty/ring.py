"""Exact coefficient rings: the rationals, the integers and prime fields."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]


class RingError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """A commutative coefficient ring.

    ``kind`` is one of ``"Q"``, ``"Z"`` or ``"Zmod"``; ``p`` is the modulus
    for ``"Zmod"``.  Elements are plain Python ints (``Z``, ``Zmod``) or
    ints/Fractions (``Q``) and are kept canonical by :meth:`reduce`.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Zmod"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zmod" and not _is_prime(self.p):
            raise RingError(f"modulus {self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def reduce(self, x: Number) -> Number:
        if self.kind == "Zmod":
            if type(x) is int:
                return x % self.p
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return x % self.p
        if type(x) is int:
            return x
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return int(x)
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x.numerator)
        return x

    def neg(self, x: Number) -> Number:
        return self.reduce(-x)

    def inv(self, x: Number) -> Number:
        x = self.reduce(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Zmod":
            return pow(x, -1, self.p)
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise RingError(f"{x} is not a unit in Z")
        return self.reduce(Fraction(1) / x)

    def parse(self, text) -> Number:
        """Parse an exact coefficient: an int, or a string ``"n"`` / ``"a/b"``."""
        if isinstance(text, bool):
            raise RingError(f"bad coefficient {text!r}")
        if isinstance(text, int):
            return self.reduce(text)
        if not isinstance(text, str):
            raise RingError(f"bad coefficient {text!r}")
        s = text.strip()
        try:
            if "/" in s:
                a, b = s.split("/")
                num, den = int(a), int(b)
                if den == 0:
                    raise RingError(f"zero denominator in {text!r}")
                if self.kind == "Zmod":
                    if den % self.p == 0:
                        raise RingError(f"denominator of {text!r} vanishes mod {self.p}")
                    return (num * pow(den, -1, self.p)) % self.p
                return self.reduce(Fraction(num, den))
            return self.reduce(int(s))
        except ValueError as exc:
            if isinstance(exc, RingError):
                raise
            raise RingError(f"bad coefficient {text!r}") from None

    def format(self, x: Number) -> str:
        x = self.reduce(x)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    def descriptor(self) -> dict:
        if self.kind == "Zmod":
            return {"kind": "Zmod", "p": self.p}
        return {"kind": self.kind}

    @classmethod
    def from_descriptor(cls, d: dict) -> "Ring":
        if not isinstance(d, dict) or "kind" not in d:
            raise RingError(f"bad ring descriptor {d!r}")
        if d["kind"] == "Zmod":
            return cls("Zmod", int(d.get("p", 0)))
        return cls(d["kind"])

    def __str__(self):
        return f"Z/{self.p}" if self.kind == "Zmod" else self.kind


QQ = Ring("Q")
ZZ = Ring("Z")


def GF(p: int) -> Ring:
    return Ring("Zmod", p)


@dataclass(frozen=True)
class Scalar:
    """An exact ring element tagged with its ring."""

    ring: Ring
    value: Number

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.reduce(self.value))

    def _check(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        return Scalar(self.ring, other)

    def __add__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.value - o.value)

    def __mul__(self, other):
        o = self._check(other)
        return Scalar(self.ring, self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, -self.value)

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.ring.reduce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring.format(self.value)
