"""Exact sparse polynomial arithmetic in the anisotropy variable q.

A polynomial is stored as a dict mapping exponent (a non-negative int) to a
nonzero arbitrary-precision integer coefficient:

    q^2 + 3*q^4  ->  {2: 1, 4: 3}

The empty dict is the zero polynomial.  All arithmetic is exact: coefficients
are Python ints, evaluation at a ``Fraction`` point produces a ``Fraction``
with no rounding anywhere.  This makes polynomial identities and inequalities
decidable, which the verification suites rely on.

Values are immutable after construction and safe to share across threads;
every operation returns a new object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DomainError

Scalar = Union[Fraction, float]


class QPoly:
    """Sparse polynomial in q with integer coefficients, canonical form.

    Canonical form means no stored coefficient is zero, so equality is plain
    term-by-term dict equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        data: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exp, coeff in items:
                if exp < 0:
                    raise ValueError(f"negative exponent {exp}")
                c = data.get(exp, 0) + coeff
                if c:
                    data[exp] = c
                elif exp in data:
                    del data[exp]
        self._terms = data

    @classmethod
    def zero(cls) -> QPoly:
        return cls()

    @classmethod
    def one(cls) -> QPoly:
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> QPoly:
        """The single term coeff * q^exp."""
        return cls({exp: coeff})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> tuple[tuple[int, int], ...]:
        """(exponent, coefficient) pairs sorted by exponent."""
        return tuple(sorted(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, exp: int) -> int:
        return self._terms.get(exp, 0)

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no minimum exponent")
        return min(self._terms)

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def all_coefficients_positive(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    def has_even_exponents_only(self) -> bool:
        return all(e % 2 == 0 for e in self._terms)

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self.terms())

    def __neg__(self) -> QPoly:
        out = QPoly()
        out._terms = {e: -c for e, c in self._terms.items()}
        return out

    def __add__(self, other: QPoly) -> QPoly:
        if not isinstance(other, QPoly):
            return NotImplemented
        data = dict(self._terms)
        for e, c in other._terms.items():
            s = data.get(e, 0) + c
            if s:
                data[e] = s
            elif e in data:
                del data[e]
        out = QPoly()
        out._terms = data
        return out

    def __sub__(self, other: QPoly) -> QPoly:
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: QPoly) -> QPoly:
        if not isinstance(other, QPoly):
            return NotImplemented
        data: dict[int, int] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = ea + eb
                s = data.get(e, 0) + ca * cb
                if s:
                    data[e] = s
                elif e in data:
                    del data[e]
        out = QPoly()
        out._terms = data
        return out

    def __pow__(self, n: int) -> QPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = QPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> QPoly:
        """Multiply by q^k: every exponent increases by k, coefficients unchanged."""
        if k < 0:
            raise ValueError("shift must be non-negative")
        out = QPoly()
        out._terms = {e + k: c for e, c in self._terms.items()}
        return out

    def divexact(self, divisor: QPoly) -> QPoly:
        """Exact polynomial quotient; raises ArithmeticError on any remainder."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = dict(self._terms)
        dlead = divisor.max_exponent()
        dcoeff = divisor.coefficient(dlead)
        quot: dict[int, int] = {}
        while rem:
            rlead = max(rem)
            if rlead < dlead:
                raise ArithmeticError("inexact polynomial division (remainder)")
            c, r = divmod(rem[rlead], dcoeff)
            if r:
                raise ArithmeticError("inexact polynomial division (coefficient)")
            e = rlead - dlead
            quot[e] = c
            for de, dc in divisor._terms.items():
                s = rem.get(de + e, 0) - dc * c
                if s:
                    rem[de + e] = s
                elif de + e in rem:
                    del rem[de + e]
        out = QPoly()
        out._terms = quot
        return out

    # -- evaluation and serialization ----------------------------------------

    def evaluate(self, q: Scalar) -> Scalar:
        """Value at q.  Exact when q is a Fraction, float otherwise."""
        if isinstance(q, Fraction):
            return sum((c * q**e for e, c in self._terms.items()), Fraction(0))
        return float(sum(c * q**e for e, c in self._terms.items()))

    def to_json_obj(self) -> list[list]:
        """[[exponent, coefficient-as-decimal-string], ...] sorted by exponent."""
        return [[e, str(c)] for e, c in self.terms()]

    @classmethod
    def from_json_obj(cls, obj: Iterable) -> QPoly:
        return cls((int(e), int(c)) for e, c in obj)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.terms():
            if e == 0:
                parts.append(str(c))
            else:
                mono = "q" if e == 1 else f"q^{e}"
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"QPoly({dict(self.terms())!r})"


@dataclass(frozen=True)
class QRational:
    """Ratio of two QPoly values, e.g. an exact correlation probability.

    Not reduced to lowest terms; equality is mathematical (cross-multiplied).
    """

    num: QPoly
    den: QPoly

    def __post_init__(self):
        if self.den.is_zero:
            raise ZeroDivisionError("QRational denominator is the zero polynomial")

    def evaluate(self, q: Scalar) -> Scalar:
        d = self.den.evaluate(q)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q={q}")
        return self.num.evaluate(q) / d

    def complement(self) -> QRational:
        """1 - self, over the same denominator."""
        return QRational(self.den - self.num, self.den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QRational):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def to_json_obj(self) -> dict:
        return {"num": self.num.to_json_obj(), "den": self.den.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> QRational:
        return cls(QPoly.from_json_obj(obj["num"]), QPoly.from_json_obj(obj["den"]))

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def evaluate(value: QPoly | QRational, q: Scalar) -> Scalar:
    """Evaluate a QPoly or QRational at q (exact for Fraction q)."""
    return value.evaluate(q)


@dataclass(frozen=True)
class ModelParameters:
    """Spin-chain parameters derived from the weight base q in (0, 1).

    delta      anisotropy (q + 1/q)/2, exact when q is a Fraction
    boundary_field   pinning field sqrt(1 - delta^-2)/2
    beta       inverse temperature of the equivalent classical area model,
               fixed by q^2 = exp(-beta)
    """

    q: Scalar
    delta: Scalar = field(init=False)
    boundary_field: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise DomainError(f"q must lie strictly in (0, 1), got {self.q}")
        delta = (self.q + 1 / self.q) / 2
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "boundary_field", 0.5 * math.sqrt(1 - 1 / float(delta) ** 2))
        object.__setattr__(self, "beta", -2.0 * math.log(float(self.q)))

    def q_from_delta(self) -> float:
        """Invert delta -> q, taking the root in (0, 1)."""
        d = float(self.delta)
        return d - math.sqrt(d * d - 1)
