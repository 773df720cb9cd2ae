"""Exact rational arithmetic and the quadratic field Q(sqrt(D)).

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator). :class:`QuadExt` adds elements ``p + q*sqrt(D)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = ["Fraction", "QuadExt", "RadicandMismatch", "rat", "fmt_rat", "parse_rat",
           "trace_norm", "quad_arith"]

Number = int | Fraction


class RadicandMismatch(ValueError):
    """Raised when combining elements of different quadratic fields."""


def rat(num: int, den: int = 1) -> Fraction:
    """Reduced rational ``num/den``; ``den == 0`` raises ZeroDivisionError."""
    if den == 0:
        raise ZeroDivisionError(f"rat({num}, 0): zero denominator")
    return Fraction(num, den)


def fmt_rat(x: Number) -> str:
    """Always ``num/den``, including integers (``5/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


@dataclass(frozen=True)
class QuadExt:
    """Element ``rational + radical*sqrt(radicand)`` of Q(sqrt(D)).

    The radicand is kept verbatim (not reduced to squarefree form). A
    perfect-square radicand collapses the element onto the rationals.
    """

    rational: Fraction
    radical: Fraction
    radicand: int

    def __post_init__(self):
        if self.radicand <= 0:
            raise ValueError("radicand must be a positive integer")
        p, q = Fraction(self.rational), Fraction(self.radical)
        root = _isqrt_exact(self.radicand)
        if root is not None:
            p, q = p + q * root, Fraction(0)
        object.__setattr__(self, "rational", p)
        object.__setattr__(self, "radical", q)

    @classmethod
    def sqrt(cls, radicand: int) -> QuadExt:
        return cls(Fraction(0), Fraction(1), radicand)

    def _coerce(self, other) -> QuadExt:
        if isinstance(other, QuadExt):
            if other.radicand != self.radicand:
                raise RadicandMismatch(f"sqrt({self.radicand}) vs sqrt({other.radicand})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadExt(Fraction(other), Fraction(0), self.radicand)
        return NotImplemented

    def is_rational(self) -> bool:
        return self.radical == 0

    def conj(self) -> QuadExt:
        return QuadExt(self.rational, -self.radical, self.radicand)

    def norm(self) -> Fraction:
        return self.rational ** 2 - self.radical ** 2 * self.radicand

    def trace(self) -> Fraction:
        return 2 * self.rational

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.rational + o.rational, self.radical + o.radical, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.rational, -self.radical, self.radicand)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.rational * o.rational + self.radical * o.radical * self.radicand
        q = self.rational * o.radical + self.radical * o.rational
        return QuadExt(p, q, self.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(D))")
        num = self * o.conj()
        return QuadExt(num.rational / n, num.radical / n, self.radicand)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = QuadExt(Fraction(1), Fraction(0), self.radicand)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        """Exact sign of ``p + q*sqrt(D)``."""
        sp = (self.rational > 0) - (self.rational < 0)
        sq = (self.radical > 0) - (self.radical < 0)
        if sq == 0 or sp == sq:
            return sp if sp else sq
        # opposite signs: compare p^2 with q^2 D
        diff = self.rational ** 2 - self.radical ** 2 * self.radicand
        return sp if diff > 0 else (sq if diff < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            return self.is_rational() and self.rational == other
        if isinstance(other, QuadExt):
            if self.is_rational() and other.is_rational():
                return self.rational == other.rational
            return (self.radicand == other.radicand and self.rational == other.rational
                    and self.radical == other.radical)
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational)
        return hash((self.rational, self.radical, self.radicand))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def to_mpf(self, prec: int = 256):
        with mpmath.workprec(prec):
            return mpmath.mpf(self.rational.numerator) / self.rational.denominator + (
                mpmath.mpf(self.radical.numerator) / self.radical.denominator
                * mpmath.sqrt(self.radicand))

    def __float__(self):
        if self.is_rational():
            return float(self.rational)  # Fraction rounds correctly
        return float(self.to_mpf())

    def __str__(self):
        return f"{fmt_rat(self.rational)} + {fmt_rat(self.radical)}*sqrt({self.radicand})"

    def __repr__(self):
        return f"QuadExt({self})"


def quad_arith(a: QuadExt, b: QuadExt, op: str) -> QuadExt:
    ops = {"add": QuadExt.__add__, "sub": QuadExt.__sub__,
           "mul": QuadExt.__mul__, "div": QuadExt.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](a, b)


def trace_norm(x: QuadExt | Number) -> tuple[Fraction, Fraction]:
    """``(x + conj x, x * conj x)``, both rational."""
    if not isinstance(x, QuadExt):
        r = Fraction(x)
        return 2 * r, r * r
    return x.trace(), x.norm()
