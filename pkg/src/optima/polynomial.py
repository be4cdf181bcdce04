"""Univariate polynomials with exact rational sign analysis.

Coefficients are stored in ascending order.  Arithmetic is generic over the
scalar type (float, Fraction, mpmath mpf/iv); the sign-certification helpers
(Sturm chains, squarefree split, nonnegativity on rays and intervals) require
Fraction coefficients and are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def _trim(coeffs: Sequence) -> tuple:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Polynomial1D:
    """Polynomial sum(coeffs[k] * x**k); zero polynomial has empty coeffs."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coeffs)

    def __call__(self, x):
        if not self.coeffs:
            return 0 * x
        acc = self.coeffs[-1] + 0 * x
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial1D":
        return Polynomial1D([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "Polynomial1D") -> "Polynomial1D":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial1D(out)

    def __sub__(self, other: "Polynomial1D") -> "Polynomial1D":
        return self + (-other)

    def __neg__(self) -> "Polynomial1D":
        return Polynomial1D([-c for c in self.coeffs])

    def __mul__(self, other) -> "Polynomial1D":
        if not isinstance(other, Polynomial1D):
            return Polynomial1D([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Polynomial1D(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial1D(out)

    __rmul__ = __mul__

    def shifted(self, a) -> "Polynomial1D":
        """Return q with q(x) = p(x + a), via synthetic division."""
        cs = list(self.coeffs)
        for i in range(len(cs) - 1):
            for j in range(len(cs) - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return Polynomial1D(cs)

    def as_fractions(self) -> "Polynomial1D":
        """Exact rational copy (floats converted via their binary value)."""
        return Polynomial1D([Fraction(c) for c in self.coeffs])

    def monomial_coeffs_float(self):
        return [float(c) for c in self.coeffs]


def from_roots(roots: Sequence, lead=1) -> Polynomial1D:
    p = Polynomial1D([lead])
    for r in roots:
        p = p * Polynomial1D([-r, 1])
    return p


# ----------------------------------------------------------------------
# Exact sign machinery (Fraction coefficients).


def _fcoeffs(p: Polynomial1D) -> tuple:
    cs = tuple(Fraction(c) for c in p.coeffs)
    return _trim(cs)


def _strip_content(cs: tuple) -> tuple:
    """Divide by a positive rational to keep numerators small; sign preserved."""
    if not cs:
        return cs
    from math import gcd

    num = 0
    den = 1
    for c in cs:
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    if num == 0:
        return cs
    scale = Fraction(den, num)
    return tuple(c * scale for c in cs)


def _polydiv(a: tuple, b: tuple) -> tuple:
    """Remainder of a by b over Q; b nonzero."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        q = r[-1] / lb
        shift = len(r) - 1 - db
        for i, c in enumerate(b):
            r[i + shift] -= q * c
        r.pop()
    return _trim(tuple(r))


def sturm_chain(p: Polynomial1D) -> list:
    cs = _strip_content(_fcoeffs(p))
    if not cs:
        return []
    chain = [cs]
    d = _trim(tuple((i + 1) * c for i, c in enumerate(cs[1:])))
    if d:
        chain.append(_strip_content(d))
        while True:
            r = _polydiv(chain[-2], chain[-1])
            if not r:
                break
            chain.append(_strip_content(tuple(-c for c in r)))
    return chain


def _eval_frac(cs: tuple, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _sign_variations_at(chain: list, x) -> int:
    signs = []
    for cs in chain:
        v = _eval_frac(cs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_variations_at_inf(chain: list, positive: bool) -> int:
    signs = []
    for cs in chain:
        s = 1 if cs[-1] > 0 else -1
        if not positive and (len(cs) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_interval(p: Polynomial1D, a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b]; requires p(a) != 0."""
    chain = sturm_chain(p)
    if not chain:
        raise ValueError("zero polynomial")
    if _eval_frac(chain[0], Fraction(a)) == 0:
        raise ValueError("p(a) = 0; shrink the interval")
    return _sign_variations_at(chain, Fraction(a)) - _sign_variations_at(chain, Fraction(b))


def count_roots_ray(p: Polynomial1D, a: Fraction) -> int:
    """Distinct real roots in (a, +inf); requires p(a) != 0."""
    chain = sturm_chain(p)
    if not chain:
        raise ValueError("zero polynomial")
    if _eval_frac(chain[0], Fraction(a)) == 0:
        raise ValueError("p(a) = 0; perturb the endpoint")
    return _sign_variations_at(chain, Fraction(a)) - _sign_variations_at_inf(chain, True)


def count_roots_total(p: Polynomial1D) -> int:
    chain = sturm_chain(p)
    if not chain:
        raise ValueError("zero polynomial")
    return _sign_variations_at_inf(chain, False) - _sign_variations_at_inf(chain, True)


def poly_gcd(a: Polynomial1D, b: Polynomial1D) -> Polynomial1D:
    x, y = _strip_content(_fcoeffs(a)), _strip_content(_fcoeffs(b))
    while y:
        x, y = y, _strip_content(_polydiv(x, y))
    if not x:
        return Polynomial1D(())
    return Polynomial1D(tuple(c / x[-1] for c in x))


def _polydiv_exact(a: tuple, b: tuple) -> tuple:
    """Quotient of a by b when the division is exact."""
    r = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        c = r[-1] / lb
        shift = len(r) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r.pop()
    if any(r):
        raise ValueError("division not exact")
    return _trim(tuple(q))


def squarefree_decomposition(p: Polynomial1D) -> list[Polynomial1D]:
    """Yun's algorithm: return [q1, q2, ...] with p = lead * prod qi^i, qi monic squarefree."""
    cs = _fcoeffs(p)
    if not cs:
        raise ValueError("zero polynomial")
    lead = cs[-1]
    cs = tuple(c / lead for c in cs)
    if len(cs) == 1:
        return []
    dp = _trim(tuple((i + 1) * c for i, c in enumerate(cs[1:])))
    g = poly_gcd(Polynomial1D(cs), Polynomial1D(dp))
    out = []
    if g.degree == 0:
        out.append(Polynomial1D(cs))
        return out
    w = _polydiv_exact(cs, _fcoeffs(g))
    y = _polydiv_exact(dp, _fcoeffs(g))
    while True:
        wp = _trim(tuple((i + 1) * c for i, c in enumerate(w[1:])))
        z = _trim(tuple(a - b for a, b in _zip_pad(y, wp)))
        if not z:
            out.append(Polynomial1D(w))
            break
        g2 = poly_gcd(Polynomial1D(w), Polynomial1D(z))
        out.append(g2)
        w = _polydiv_exact(w, _fcoeffs(g2))
        y = _polydiv_exact(z, _fcoeffs(g2))
    return out


def _zip_pad(a: tuple, b: tuple):
    n = max(len(a), len(b))
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        yield x, y


def odd_multiplicity_part(p: Polynomial1D) -> Polynomial1D:
    """Monic product of the factors of p with odd multiplicity (its sign-change locus)."""
    parts = squarefree_decomposition(p)
    out = Polynomial1D((Fraction(1),))
    for i, q in enumerate(parts, start=1):
        if i % 2 == 1 and q.degree > 0:
            out = out * q
    return out


def cauchy_root_bound(p: Polynomial1D) -> Fraction:
    cs = _fcoeffs(p)
    if len(cs) <= 1:
        return Fraction(0)
    lead = abs(cs[-1])
    return 1 + max(abs(c) / lead for c in cs[:-1])


def _interior_nonneg_sample(p: Polynomial1D, a: Fraction, b: Fraction) -> bool:
    """Sign of p at some interior point where it does not vanish."""
    cs = _fcoeffs(p)
    lo, hi = Fraction(a), Fraction(b)
    denom = 2
    for _ in range(4 * len(cs) + 8):
        x = lo + (hi - lo) / denom
        v = _eval_frac(cs, x)
        if v != 0:
            return v > 0
        denom *= 2
    raise ValueError("could not find a nonvanishing interior sample")


def nonneg_on_ray(p: Polynomial1D, a: Fraction) -> bool:
    """Exact check that p(x) >= 0 for all x >= a."""
    cs = _fcoeffs(p)
    if not cs:
        return True
    if len(cs) == 1:
        return cs[0] >= 0
    if cs[-1] < 0:
        return False
    odd = odd_multiplicity_part(p)
    if odd.degree > 0:
        ocs = _fcoeffs(odd)
        aa = Fraction(a)
        if _eval_frac(ocs, aa) == 0:
            # sign change exactly at the endpoint is allowed
            odd2 = Polynomial1D(_polydiv_exact(ocs, (-aa, Fraction(1))))
            if odd2.degree > 0 and _eval_frac(_fcoeffs(odd2), aa) == 0:
                return False
            if odd2.degree > 0 and count_roots_ray(odd2, aa) > 0:
                return False
        elif count_roots_ray(odd, aa) > 0:
            return False
    return _eval_frac(cs, Fraction(a)) >= 0 or _interior_nonneg_sample(
        p, Fraction(a), Fraction(a) + 1
    )


def nonpos_on_ray(p: Polynomial1D, a: Fraction) -> bool:
    return nonneg_on_ray(-p, a)


def nonneg_on_interval(
    p: Polynomial1D, a: Fraction, b: Fraction, include_right: bool = True
) -> bool:
    """Exact check that p >= 0 on [a, b] (or [a, b) when include_right is false)."""
    cs = _fcoeffs(p)
    aa, bb = Fraction(a), Fraction(b)
    if not cs:
        return True
    if len(cs) == 1:
        return cs[0] >= 0
    odd = odd_multiplicity_part(p)
    if odd.degree > 0:
        ocs = _fcoeffs(odd)
        work = ocs
        for endpoint in (aa, bb):
            while work and len(work) > 1 and _eval_frac(work, endpoint) == 0:
                work = _polydiv_exact(work, (-endpoint, Fraction(1)))
        if len(work) > 1:
            q = Polynomial1D(work)
            if count_roots_interval(q, aa, bb) - (
                1 if _eval_frac(work, bb) == 0 else 0
            ) > 0:
                return False
    va, vb = _eval_frac(cs, aa), _eval_frac(cs, bb)
    if va > 0 or (va == 0 and _interior_nonneg_sample(p, aa, bb)):
        pass
    else:
        return False
    if include_right and vb < 0:
        return False
    return True


def isolate_roots_interval(p: Polynomial1D, a: Fraction, b: Fraction) -> list[tuple]:
    """Disjoint rational intervals in (a, b], one distinct root each, via Sturm bisection."""
    chain = sturm_chain(p)
    if not chain:
        raise ValueError("zero polynomial")
    aa, bb = Fraction(a), Fraction(b)
    if _eval_frac(chain[0], aa) == 0:
        raise ValueError("p(a) = 0")

    out = []

    def recurse(lo, hi, nlo, nhi):
        k = nlo - nhi
        if k == 0:
            return
        if k == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        while _eval_frac(chain[0], mid) == 0:
            mid = (lo + mid) / 2
        nm = _sign_variations_at(chain, mid)
        recurse(lo, mid, nlo, nm)
        recurse(mid, hi, nm, nhi)

    recurse(aa, bb, _sign_variations_at(chain, aa), _sign_variations_at(chain, bb))
    return out
