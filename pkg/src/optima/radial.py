"""Radial eigenfunctions of the Fourier transform on R^n.

b_k(r2) = L_k^{(n/2-1)}(2 pi r2) * exp(-pi r2) transforms to (-1)^k b_k, so a
function f = sum c_k b_k(|x|^2) has transform sum (-1)^k c_k b_k(|t|^2).
Working in the variable u = 2 pi r2 makes the polynomial part exact: the
Laguerre polynomials have rational coefficients for every integer n >= 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from optima.polynomial import Polynomial1D


def alpha_param(n: int) -> Fraction:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {n!r}")
    return Fraction(n - 2, 2)


@lru_cache(maxsize=None)
def laguerre_u_poly(n: int, k: int) -> Polynomial1D:
    """Exact L_k^{(n/2-1)} as a polynomial in u."""
    a = alpha_param(n)
    coeffs = []
    for j in range(k + 1):
        binom = Fraction(1)
        for i in range(1, k - j + 1):
            binom *= (a + j + i) / i
        coeffs.append((-1) ** j * binom / math.factorial(j))
    return Polynomial1D(coeffs)


def laguerre_at_zero(n: int, k: int) -> Fraction:
    """L_k(0) = binomial(k + alpha, k), the natural column scale."""
    a = alpha_param(n)
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= (a + i) / i
    return out


def laguerre_at_zero_float(n: int, kmax: int) -> np.ndarray:
    al = float(alpha_param(n))
    ks = np.arange(kmax + 1)
    return np.exp(gammaln(ks + al + 1) - gammaln(ks + 1) - gammaln(al + 1))


def weighted_laguerre_rows(n: int, kmax: int, us: np.ndarray) -> np.ndarray:
    """Matrix of psi_k(u) = exp(-u/2) L_k^{(alpha)}(u), shape (len(us), kmax+1).

    Upward recurrence on the weighted functions stays well conditioned where
    the raw polynomial values overflow the exponential.
    """
    al = float(alpha_param(n))
    us = np.asarray(us, dtype=float)
    out = np.empty((us.size, kmax + 1))
    e = np.exp(-us / 2)
    out[:, 0] = e
    if kmax >= 1:
        out[:, 1] = e * (1.0 + al - us)
    for k in range(1, kmax):
        out[:, k + 1] = ((2 * k + 1 + al - us) * out[:, k] - (k + al) * out[:, k - 1]) / (k + 1)
    return out


def eigenbasis_values(n: int, kmax: int, r2) -> np.ndarray:
    """b_k(r2) for k = 0..kmax; r2 scalar or 1d array."""
    r2 = np.atleast_1d(np.asarray(r2, dtype=float))
    return weighted_laguerre_rows(n, kmax, 2 * math.pi * r2)


def fourier_eigenbasis_value(n: int, k: int, r2: float) -> float:
    """b_k(r2) = L_k^{(n/2-1)}(2 pi r2) exp(-pi r2); transform is (-1)^k b_k."""
    if r2 < 0:
        raise ValueError("r2 must be nonnegative")
    return float(eigenbasis_values(n, k, r2)[0, k])


def transform_parity(k: int) -> int:
    """Fourier eigenvalue of b_k: +1 for even k, -1 for odd k."""
    return -1 if k % 2 else 1


def combo_u_poly(n: int, coeffs, signed: bool = False) -> Polynomial1D:
    """Exact polynomial sum c_k L_k(u), with c_k replaced by (-1)^k c_k when signed.

    Float coefficients are taken at their exact binary values, so the result
    states an exact property of the given coefficient list.
    """
    out = Polynomial1D(())
    for k, c in enumerate(coeffs):
        q = Fraction(c)
        if signed and k % 2 == 1:
            q = -q
        if q != 0:
            out = out + laguerre_u_poly(n, k) * q
    return out


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    value = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -value if sign else value


def pi_enclosure(digits: int) -> tuple[Fraction, Fraction]:
    """Rational lo < pi < hi with roughly the requested number of digits."""
    import mpmath

    old = mpmath.iv.prec
    try:
        mpmath.iv.prec = int(digits * 3.33) + 12
        enc = +mpmath.iv.pi
        raw_lo, raw_hi = enc._mpi_
        lo = _raw_to_fraction(raw_lo)
        hi = _raw_to_fraction(raw_hi)
    finally:
        mpmath.iv.prec = old
    if not lo < hi:
        raise RuntimeError("degenerate pi enclosure")
    return lo, hi
