"""Monic ultraspherical polynomials for the weight (1 - t^2)^((n-3)/2) on [-1, 1].

P_0 = 1, P_1 = t, and P_{k+1} = t P_k - b_k P_{k-1} with exact rational b_k.
For n = 2 the weight is improper but the limiting recurrence (b_1 = 1/2) is
used, giving rescaled Chebyshev polynomials; all identities below hold there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from optima.polynomial import Polynomial1D


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")


@lru_cache(maxsize=None)
def recurrence_b(n: int, k: int) -> Fraction:
    """Coefficient b_k in P_{k+1} = t P_k - b_k P_{k-1}."""
    _check_dim(n)
    if k < 1:
        raise ValueError("recurrence index starts at 1")
    if k == 1:
        return Fraction(1, 2) if n == 2 else Fraction(1, n)
    return Fraction(k * (k + n - 3), (2 * k + n - 2) * (2 * k + n - 4))


@lru_cache(maxsize=None)
def gegenbauer(n: int, k: int) -> Polynomial1D:
    """Monic ultraspherical polynomial P_k for S^{n-1}, exact coefficients."""
    _check_dim(n)
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k == 0:
        return Polynomial1D((Fraction(1),))
    if k == 1:
        return Polynomial1D((Fraction(0), Fraction(1)))
    t = Polynomial1D((Fraction(0), Fraction(1)))
    prev, cur = gegenbauer(n, k - 2), gegenbauer(n, k - 1)
    return t * cur - recurrence_b(n, k - 1) * prev


def gegenbauer_table(n: int, kmax: int) -> list[Polynomial1D]:
    return [gegenbauer(n, k) for k in range(kmax + 1)]


def _convert_fraction(q: Fraction, conv):
    return conv(q.numerator) / conv(q.denominator)


def eval_all(n: int, kmax: int, t, conv=float):
    """Values [P_0(t), ..., P_kmax(t)] by the recurrence; t may be scalar or ndarray."""
    _check_dim(n)
    one = conv(1)
    vals = [t * 0 + one]
    if kmax >= 1:
        vals.append(t * vals[0])
    for k in range(1, kmax):
        b = _convert_fraction(recurrence_b(n, k), conv)
        vals.append(t * vals[-1] - b * vals[-2])
    return vals[: kmax + 1]


@dataclass(frozen=True)
class GegenbauerExpansion:
    """Coefficients alpha_k of a polynomial written as sum alpha_k P_k^n."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        _check_dim(self.n)
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def polynomial(self) -> Polynomial1D:
        """Reconstruct the monomial form sum alpha_k P_k."""
        out = Polynomial1D(())
        for k, a in enumerate(self.coeffs):
            out = out + gegenbauer(self.n, k) * a
        return out

    def kernel_nonneg(self) -> bool:
        """True when alpha_k >= 0 for every k >= 1 (positive-definite kernel part)."""
        return all(a >= 0 for a in self.coeffs[1:])


def expand(p: Polynomial1D, n: int) -> GegenbauerExpansion:
    """Expansion of p in the monic basis by back substitution.

    Exact when p has rational coefficients; otherwise carried out in the
    coefficient arithmetic of p (float or mpmath types).
    """
    _check_dim(n)
    if p.degree < 0:
        return GegenbauerExpansion(n, (0 * Fraction(0),))
    exact = p.exact
    rem = list(p.as_fractions().coeffs if exact else p.coeffs)
    alphas = [None] * len(rem)
    for k in range(len(rem) - 1, -1, -1):
        a = rem[k]
        alphas[k] = a
        if a == 0 and exact:
            continue
        basis = gegenbauer(n, k).coeffs
        for j, c in enumerate(basis):
            if exact:
                rem[j] -= a * c
            else:
                rem[j] = rem[j] - a * c.numerator / c.denominator
        rem.pop()
    return GegenbauerExpansion(n, tuple(alphas))
