"""Exact scalar values that can be re-evaluated at any working precision.

Inner products in the structured configurations are rationals, quadratic
irrationals (a + b sqrt(r)), or cosines of rational angles.  Keeping them in
symbolic form lets certificate verification evaluate nodes to hundreds of
digits, or to rigorous intervals, without re-deriving the geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath


@dataclass(frozen=True, order=False)
class ExactScalar:
    kind: str  # 'rational' | 'quadratic' | 'cosine'
    a: Fraction = Fraction(0)  # rational part, or angle numerator j for cosine
    b: Fraction = Fraction(0)  # coefficient of sqrt(root), or angle denominator
    root: int = 0

    def __float__(self) -> float:
        if self.kind == "rational":
            return float(self.a)
        if self.kind == "quadratic":
            return float(self.a) + float(self.b) * self.root**0.5
        import math

        return math.cos(2 * math.pi * self.a / self.b)

    def mpf(self) -> mpmath.mpf:
        if self.kind == "rational":
            return mpmath.mpf(self.a.numerator) / self.a.denominator
        if self.kind == "quadratic":
            a = mpmath.mpf(self.a.numerator) / self.a.denominator
            b = mpmath.mpf(self.b.numerator) / self.b.denominator
            return a + b * mpmath.sqrt(self.root)
        ang = 2 * mpmath.pi * self.a.numerator / (self.a.denominator * self.b)
        return mpmath.cos(ang)

    def iv(self):
        ivc = mpmath.iv
        if self.kind == "rational":
            return ivc.mpf(self.a.numerator) / self.a.denominator
        if self.kind == "quadratic":
            a = ivc.mpf(self.a.numerator) / self.a.denominator
            b = ivc.mpf(self.b.numerator) / self.b.denominator
            return a + b * ivc.sqrt(self.root)
        ang = 2 * ivc.pi * self.a.numerator / (self.a.denominator * self.b)
        return ivc.cos(ang)

    def fraction(self) -> Fraction | None:
        if self.kind == "rational":
            return self.a
        return None

    def __lt__(self, other):
        return float(self) < float(other)


def rational(q) -> ExactScalar:
    return ExactScalar("rational", a=Fraction(q))


def quadratic(a, b, root: int) -> ExactScalar:
    if root < 0:
        raise ValueError("root must be nonnegative")
    return ExactScalar("quadratic", a=Fraction(a), b=Fraction(b), root=root)


def cosine_angle(j: int, N: int) -> ExactScalar:
    """cos(2 pi j / N)."""
    if N <= 0:
        raise ValueError("denominator must be positive")
    return ExactScalar("cosine", a=Fraction(j), b=Fraction(N))


def to_float(v) -> float:
    return float(v)


def to_mpf(v) -> mpmath.mpf:
    if isinstance(v, ExactScalar):
        return v.mpf()
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    if isinstance(v, int):
        return mpmath.mpf(v)
    return mpmath.mpf(v)


def to_iv(v):
    if isinstance(v, ExactScalar):
        return v.iv()
    if isinstance(v, Fraction):
        return mpmath.iv.mpf(v.numerator) / v.denominator
    return mpmath.iv.mpf(v)


def exact_fraction(v) -> Fraction | None:
    if isinstance(v, ExactScalar):
        return v.fraction()
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    return None
