"""Exact coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of Z, Q or F_p.

    Scalars are plain Python ints for Z and F_p (reduced into ``range(p)``)
    and :class:`fractions.Fraction` for Q.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F":
            if not is_prime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p}")
        elif self.p != 0:
            raise ValueError(f"ring {self.kind} takes no characteristic")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls("F", p)

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse ``Z``, ``Q``, ``F5``, ``F_5`` or ``GF(5)``."""
        t = text.strip()
        if t in ("Z", "ZZ"):
            return cls.integers()
        if t in ("Q", "QQ"):
            return cls.rationals()
        m = re.fullmatch(r"(?:F_?|GF\()(\d+)\)?", t)
        if m:
            return cls.prime_field(int(m.group(1)))
        raise ValueError(f"cannot parse ring {text!r} (expected Z, Q or Fp)")

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.kind == "F" else self.kind

    def __str__(self):
        return self.name

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def __call__(self, x):
        """Coerce an int, Fraction or numeric string into this ring."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x.numerator)
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def norm(self, x):
        """Reduce the result of ordinary arithmetic back into the ring."""
        return x % self.p if self.kind == "F" else x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x == 1 or x == -1
        return x != 0

    def inv(self, x):
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        if self.kind == "Q":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def to_json(self, x):
        """JSON-safe form of a scalar (ints stay ints, rationals become strings)."""
        if self.kind == "Q":
            return str(x) if x.denominator != 1 else int(x.numerator)
        return int(x)


ZZ = RingSpec.integers()
QQ = RingSpec.rationals()


def GF(p: int) -> RingSpec:
    return RingSpec.prime_field(p)
