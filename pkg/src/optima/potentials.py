"""Pair potentials as functions of squared distance.

A potential f is evaluated at r2 = |x - y|^2.  On the unit sphere r2 = 2 - 2t
for inner product t, and energies use the half-sum over ordered pairs,
E = (1/2) sum_{x != y} f(|x - y|^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.spatial.distance import pdist

from optima.errors import DegeneratePairError, FormatError
from optima.polynomial import Polynomial1D
from optima.scalars import to_mpf

_DEGENERATE_R2 = 1e-14


@dataclass(frozen=True)
class InversePower:
    s: Fraction

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("exponent must be positive")


@dataclass(frozen=True)
class Gaussian:
    c: Fraction

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("width parameter must be positive")


@dataclass(frozen=True)
class Log:
    pass


@dataclass(frozen=True)
class PolyInT:
    poly: Polynomial1D


Potential = InversePower | Gaussian | Log | PolyInT


def inverse_power(s) -> InversePower:
    return InversePower(Fraction(s))


def gaussian(c) -> Gaussian:
    return Gaussian(Fraction(c))


def log_potential() -> Log:
    return Log()


def poly_in_t(coeffs) -> PolyInT:
    if isinstance(coeffs, Polynomial1D):
        return PolyInT(coeffs)
    return PolyInT(Polynomial1D([Fraction(c) for c in coeffs]))


def is_singular(f: Potential) -> bool:
    return isinstance(f, (InversePower, Log))


def completely_monotone(f: Potential) -> bool:
    """True when g(t) = f(2-2t)/2 has nonnegative derivatives of all orders on [-1, 1)."""
    return isinstance(f, (InversePower, Gaussian, Log))


# ----------------------------------------------------------------------
# Radial side: float / ndarray evaluation at squared distance r2.


def value(f: Potential, r2):
    r2 = np.asarray(r2, dtype=float)
    if isinstance(f, InversePower):
        return np.power(r2, -float(f.s))
    if isinstance(f, Gaussian):
        return np.exp(-float(f.c) * r2)
    if isinstance(f, Log):
        return -0.5 * np.log(r2)
    return _horner_float(f.poly, 1.0 - r2 / 2)


def radial_derivative(f: Potential, r2, order: int = 1):
    """d^order f / d r2^order for order in {0, 1, 2}."""
    if order == 0:
        return value(f, r2)
    if order not in (1, 2):
        raise ValueError("derivatives implemented up to order 2")
    r2 = np.asarray(r2, dtype=float)
    if isinstance(f, InversePower):
        s = float(f.s)
        if order == 1:
            return -s * np.power(r2, -s - 1)
        return s * (s + 1) * np.power(r2, -s - 2)
    if isinstance(f, Gaussian):
        c = float(f.c)
        return (-c) ** order * np.exp(-c * r2)
    if isinstance(f, Log):
        if order == 1:
            return -0.5 / r2
        return 0.5 / r2**2
    p = f.poly
    for _ in range(order):
        p = p.derivative()
    return _horner_float(p, 1.0 - r2 / 2) * (-0.5) ** order


def _horner_float(p: Polynomial1D, x):
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for c in reversed(p.coeffs):
        acc = acc * x + float(c)
    return acc


# ----------------------------------------------------------------------
# Surface side: g(t) = f(2 - 2t)/2 and its t-derivatives, generic arithmetic.
# Works for float, mpmath mpf, and mpmath interval scalars.


def _is_iv(x) -> bool:
    return isinstance(x, mpmath.ctx_iv.ivmpf)


def _exp(x):
    if isinstance(x, (float, int)):
        return math.exp(x)
    if _is_iv(x):
        return mpmath.iv.exp(x)
    return mpmath.exp(x)


def _log(x):
    if isinstance(x, (float, int)):
        return math.log(x)
    if _is_iv(x):
        return mpmath.iv.log(x)
    return mpmath.log(x)


def _pow(x, s: Fraction):
    if isinstance(x, (float, int)):
        return float(x) ** float(s)
    if _is_iv(x):
        return mpmath.iv.exp(mpmath.iv.log(x) * mpmath.iv.mpf(s.numerator) / s.denominator)
    return mpmath.power(x, to_mpf(s))


def _rat(q: Fraction, like):
    """Constant q in the arithmetic of `like`."""
    return (like * 0 + q.numerator) / q.denominator


def surface_eval(f: Potential, t, order: int = 0):
    """d^order/dt^order of g(t) = f(2 - 2t)/2; t may be float, mpf, or interval."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    one_minus = 1 - t
    if isinstance(f, InversePower):
        s = f.s
        coef = Fraction(1, 2)
        for j in range(order):
            coef *= 2 * (s + j)
        return _rat(coef, t) * _pow(2 * one_minus, -(s + order))
    if isinstance(f, Gaussian):
        c = f.c
        coef = Fraction(1, 2) * (2 * c) ** order
        return _rat(coef, t) * _exp(_rat(-2 * c, t) * one_minus)
    if isinstance(f, Log):
        # value() defines f(r2) = -log(r2)/2, so g(t) = -log(2 - 2t)/4
        if order == 0:
            return -_log(2 * one_minus) / 4
        coef = Fraction(math.factorial(order - 1), 4)
        return _rat(coef, t) * _pow(one_minus, Fraction(-order))
    p = f.poly
    for _ in range(order):
        p = p.derivative()
    acc = t * 0
    for c in reversed(p.coeffs):
        acc = acc * t + _rat(Fraction(c) / 2, t)
    return acc


# ----------------------------------------------------------------------
# Energies.


def energy(C, f: Potential) -> float:
    """Direct pair sum E = (1/2) sum_{x != y} f(|x - y|^2), float64."""
    d2 = pdist(np.asarray(C.points, dtype=float), "sqeuclidean")
    if is_singular(f) and d2.size and d2.min() < _DEGENERATE_R2:
        raise DegeneratePairError(
            f"minimum squared distance {d2.min():.3e} under a singular potential"
        )
    return float(np.sum(value(f, d2)))


def energy_from_distribution(dist, f: Potential, high_precision: bool = False):
    """Energy from a distance distribution: sum over t < 1 of count * g(t).

    With high_precision the sum is taken in mpmath arithmetic at the current
    working precision, re-evaluating exact nodes symbolically.
    """
    if high_precision:
        total = mpmath.mpf(0)
        for v, count in dist.entries_below_one():
            t = to_mpf(v)
            if is_singular(f) and 1 - t < _DEGENERATE_R2:
                raise DegeneratePairError("node too close to 1 under a singular potential")
            total += count * surface_eval(f, t)
        return total
    total = 0.0
    for v, count in dist.entries_below_one():
        t = float(v)
        if is_singular(f) and 1 - t < _DEGENERATE_R2:
            raise DegeneratePairError("node too close to 1 under a singular potential")
        total += count * surface_eval(f, t)
    return total


# ----------------------------------------------------------------------
# Parsing.  Spec strings: "inverse-power:s=0.5", "gaussian:c=1.0", "log",
# "poly-t:[c0,c1,...]", plus the convenience alias "coulomb".

_KINDS = ("inverse-power", "gaussian", "log", "poly-t", "coulomb")


def _parse_number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad numeric value {text!r}") from exc


def parse_potential(spec: str) -> Potential:
    """Parse a potential spec string, e.g. 'inverse-power:s=0.5' or 'poly-t:[1,0,2]'."""
    head, _, rest = spec.strip().partition(":")
    head = head.strip()
    if head not in _KINDS:
        raise FormatError(f"unknown potential kind {head!r}; expected one of {_KINDS}")
    if head == "coulomb":
        if rest:
            raise FormatError("coulomb takes no parameters")
        return inverse_power(Fraction(1, 2))
    if head == "log":
        if rest:
            raise FormatError("log takes no parameters")
        return log_potential()
    if head == "poly-t":
        body = rest.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise FormatError("poly-t expects a bracketed list, e.g. poly-t:[1,0,2]")
        items = [x.strip() for x in body[1:-1].split(",") if x.strip()]
        if not items:
            raise FormatError("poly-t needs at least one coefficient")
        return PolyInT(Polynomial1D([_parse_number(x) for x in items]))
    params = {}
    if rest:
        for item in rest.split(";"):
            key, eq, val = item.partition("=")
            if not eq:
                raise FormatError(f"expected key=value, got {item!r}")
            params[key.strip()] = val.strip()
    try:
        if head == "inverse-power":
            out = inverse_power(_parse_number(params.pop("s")))
        else:
            out = gaussian(_parse_number(params.pop("c")))
    except KeyError as exc:
        raise FormatError(f"missing parameter {exc.args[0]!r} for {head}") from exc
    if params:
        raise FormatError(f"unexpected parameters {sorted(params)} for {head}")
    return out


def format_potential(f: Potential) -> str:
    if isinstance(f, InversePower):
        return f"inverse-power:s={f.s}"
    if isinstance(f, Gaussian):
        return f"gaussian:c={f.c}"
    if isinstance(f, Log):
        return "log"
    coeffs = ",".join(str(Fraction(c)) for c in f.poly.coeffs)
    return f"poly-t:[{coeffs}]"
