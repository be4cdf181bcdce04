"""Linear programming lower bounds for energy on the sphere.

An auxiliary polynomial h with nonnegative Gegenbauer coefficients alpha_k
(k >= 1) lying below g(t) = f(2-2t)/2 on [-1, 1) gives

    E_f(C) >= alpha_0 N^2 - h(1) N        for every N-point C on S^{n-1}.

For an m-distance set that is a (2m-1)-design, the Hermite interpolant of g
(value and first derivative at each occurring inner product, degree <= 2m-1)
turns the bound into an equality, which is certified here numerically.

Verification is never assumed: polynomial potentials are checked by exact
Sturm root isolation, and the transcendental kinds by adaptive interval
arithmetic with cells split down to width 1e-40 around the touch points.
Any residual ambiguity is folded into the bound as a constant shift of h, so
the reported bound is sound regardless of rounding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from optima.configurations import (
    Configuration,
    design_strength,
    distance_distribution,
)
from optima.errors import DesignPreconditionError, MonotonicityError, VerificationError
from optima.gegenbauer import GegenbauerExpansion, expand, gegenbauer
from optima.polynomial import Polynomial1D, isolate_roots_interval, nonneg_on_interval
from optima.potentials import (
    Gaussian,
    InversePower,
    PolyInT,
    Potential,
    energy_from_distribution,
    format_potential,
    parse_potential,
    surface_eval,
)
from optima.scalars import to_iv, to_mpf

DEFAULT_DIGITS = 120
_GUARD_DIGITS = 30
_WMIN_EXPONENT = -40  # minimum interval-cell width 10^-40
_FOLD_CAP = mpmath.mpf(10) ** -18  # largest tolerated ambiguous dip in g - h


def _lo(x) -> mpmath.mpf:
    """Lower endpoint at full stored precision (mpf(x.a) would round to nearest)."""
    return mpmath.mp.make_mpf(x._mpi_[0])


def _hi(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[1])


def _float_down(x) -> float:
    """Largest double <= x; keeps directed bounds sound through float()."""
    v = float(x)
    return v if mpmath.mpf(v) <= x else math.nextafter(v, -math.inf)


def _iv_point(x):
    return mpmath.iv.mpf(x)


def _horner_iv(coeffs, t):
    acc = mpmath.iv.mpf(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


# ----------------------------------------------------------------------
# Surface verification: delta(t) = g(t) - h(t) >= 0 on [-1, 1).


def _verify_surface_exact(f: PolyInT, h: Polynomial1D):
    """Exact Sturm check for polynomial potentials and rational h."""
    g_coeffs = [Fraction(c) / 2 for c in f.poly.coeffs]
    delta = Polynomial1D(g_coeffs) - Polynomial1D([Fraction(c) for c in h.coeffs])
    if delta.degree < 0:
        return True, Fraction(0), None
    ok = nonneg_on_interval(delta, Fraction(-1), Fraction(1), include_right=False)
    if ok:
        return True, Fraction(0), None
    witness = (-1.0, 1.0)
    try:
        roots = isolate_roots_interval(delta, Fraction(-1), Fraction(1))
        for a, b in roots:
            mid = (a + b) / 2
            if delta(mid) < 0:
                witness = (float(a), float(b))
                break
    except ValueError:
        pass
    return False, Fraction(0), witness


def _enclose_delta(f: Potential, h_coeffs, hp_coeffs, a, b):
    """Enclosure of the range of g - h on [a, b].

    Intersects the naive interval extension with a centered (mean value)
    form; the centered form resolves cells near interpolation nodes where
    the naive width decays only linearly, while the naive form survives the
    derivative blowup of singular potentials at t -> 1.
    """
    t = mpmath.iv.mpf((a, b))
    enc = surface_eval(f, t, 0) - _horner_iv(h_coeffs, t)
    lo, hi = _lo(enc), _hi(enc)
    dp = surface_eval(f, t, 1) - _horner_iv(hp_coeffs, t)
    if mpmath.isfinite(_lo(dp)) and mpmath.isfinite(_hi(dp)):
        c = (a + b) / 2
        tc = mpmath.iv.mpf(c)
        dc = surface_eval(f, tc, 0) - _horner_iv(h_coeffs, tc)
        half = (b - a) / 2
        centered = dc + dp * mpmath.iv.mpf((-half, half))
        lo = max(lo, _lo(centered))
        hi = min(hi, _hi(centered))
    return lo, hi


def _verify_surface_interval(f: Potential, h_iv_coeffs, prec_bits: int):
    """Adaptive interval check of g - h >= 0 on [-1, 1).

    Returns (definitely_nonneg_up_to_fold, certified_floor, violation).
    The floor is a number <= 0 such that g - h >= floor everywhere; cells
    whose enclosure is entirely negative are definite violations.
    """
    old_prec = mpmath.iv.prec
    mpmath.iv.prec = prec_bits
    try:
        # the cell endpoints live in the plain mpf context; without enough
        # working precision the midpoints stall at the double-precision ulp
        # and cells near a tangency split in place forever
        with mpmath.workprec(prec_bits):
            one = mpmath.mpf(1)
            wmin = mpmath.mpf(10) ** _WMIN_EXPONENT
            floor = mpmath.mpf(0)
            hp_coeffs = [k * c for k, c in enumerate(h_iv_coeffs)][1:]
            stack = [(-one, one)]
            max_cells = 200_000
            count = 0
            while stack:
                a, b = stack.pop()
                count += 1
                if count > max_cells:
                    raise VerificationError("interval verification exceeded cell budget")
                lo, hi = _enclose_delta(f, h_iv_coeffs, hp_coeffs, a, b)
                if lo >= 0:
                    continue
                if hi < 0:
                    return False, floor, (float(a), float(b))
                if b - a <= wmin:
                    if lo < floor:
                        floor = lo
                    continue
                mid = (a + b) / 2
                stack.append((a, mid))
                stack.append((mid, b))
            ok = floor >= -_FOLD_CAP
            return ok, floor, None
    finally:
        mpmath.iv.prec = old_prec


# ----------------------------------------------------------------------
# The bound itself.


def yudin_bound(
    n: int,
    f: Potential,
    h: Polynomial1D,
    N: int,
    digits: int = 60,
):
    """Energy lower bound alpha_0 N^2 - h(1) N with full validity checking.

    Returns (bound, valid, margins).  The bound is reported even when some
    condition fails; `valid` is the gate.  Margins record the minimum
    Gegenbauer coefficient for k >= 1 (and its index), the certified floor
    of g - h, and the violating t-interval when one is found.
    """
    report = _verified_bound(n, f, h, digits)
    bound = report["bound_quadratic"] * N * N + report["bound_linear"] * N
    margins = {
        k: report[k]
        for k in ("alpha_min", "alpha_argmin", "surface_floor", "dropped_alpha", "violation", "failed")
    }
    return float(bound), report["valid"], margins


def _verified_bound(n: int, f: Potential, h: Polynomial1D, digits: int) -> dict:
    """Shared verifier: Gegenbauer nonnegativity plus the surface inequality.

    Produces directed (sound) bound coefficients: ambiguous Gegenbauer terms
    are dropped from h and every residual dip of g - h is folded in as a
    constant shift, so bound_quadratic * N^2 + bound_linear * N is a true
    lower bound whenever `valid` is True.
    """
    if h.degree < 0:
        raise ValueError("h must be a nonzero polynomial")
    exact_path = h.exact and isinstance(f, PolyInT)
    if exact_path:
        alpha = expand(h, n).coeffs
        neg = [k for k in range(1, len(alpha)) if alpha[k] < 0]
        alpha_min = min((alpha[k] for k in range(1, len(alpha))), default=Fraction(0))
        argmin = None
        if len(alpha) > 1:
            argmin = min(range(1, len(alpha)), key=lambda k: alpha[k])
        if neg:
            return {
                "valid": False,
                "failed": f"alpha:{neg[0]}",
                "alpha_min": float(alpha_min),
                "alpha_argmin": argmin,
                "surface_floor": 0.0,
                "dropped_alpha": [],
                "violation": None,
                "bound_quadratic": float(alpha[0]),
                "bound_linear": -float(h(Fraction(1))),
                "alpha": [float(a) for a in alpha],
            }
        ok, _, witness = _verify_surface_exact(f, h)
        return {
            "valid": ok,
            "failed": None if ok else "surface",
            "alpha_min": float(alpha_min),
            "alpha_argmin": argmin,
            "surface_floor": 0.0,
            "dropped_alpha": [],
            "violation": witness,
            "bound_quadratic": float(alpha[0]),
            "bound_linear": -float(h(Fraction(1))),
            "alpha": [float(a) for a in alpha],
        }

    prec_bits = int((digits + _GUARD_DIGITS) * 3.33) + 64
    old_prec = mpmath.iv.prec
    mpmath.iv.prec = prec_bits
    try:
        h_iv = [to_iv(c) if isinstance(c, (int, Fraction)) else mpmath.iv.mpf(c) for c in h.coeffs]
        alpha_iv = _expand_iv(h_iv, n)
        dropped = []
        failed = None
        alpha_min = mpmath.mpf("inf")
        argmin = None
        for k in range(1, len(alpha_iv)):
            lo, hi = _lo(alpha_iv[k]), _hi(alpha_iv[k])
            if lo < alpha_min:
                alpha_min = lo
                argmin = k
            if hi < 0:
                failed = f"alpha:{k}"
            elif lo < 0:
                dropped.append(k)
        if failed is not None:
            h1 = _horner_iv(h_iv, _iv_point(1))
            return {
                "valid": False,
                "failed": failed,
                "alpha_min": float(alpha_min) if argmin is not None else 0.0,
                "alpha_argmin": argmin,
                "surface_floor": 0.0,
                "dropped_alpha": dropped,
                "violation": None,
                "bound_quadratic": float(_lo(alpha_iv[0])),
                "bound_linear": -float(_hi(h1)),
                "alpha": [float(mpmath.mpf(a.mid)) for a in alpha_iv],
            }
        # rebuild h without the ambiguous coefficients (their true value is
        # a tiny straddle of zero; removing them keeps alpha_k >= 0 exact)
        if dropped:
            for k in dropped:
                pk = gegenbauer(n, k)
                h_iv = [
                    c - alpha_iv[k] * to_iv(pc)
                    for c, pc in _zip_pad(h_iv, pk.coeffs)
                ]
                alpha_iv[k] = mpmath.iv.mpf(0)
        ok, floor, witness = _verify_surface_interval(f, h_iv, prec_bits)
        h1 = _horner_iv(h_iv, _iv_point(1))
        # fold the floor into a constant shift: h_tilde = h + floor <= g
        bq = _lo(alpha_iv[0] + mpmath.iv.mpf(floor))
        bl = -_hi(h1 + mpmath.iv.mpf(floor))
        return {
            "valid": ok,
            "failed": None if ok else "surface",
            "alpha_min": float(alpha_min) if argmin is not None else 0.0,
            "alpha_argmin": argmin,
            "surface_floor": float(floor),
            "dropped_alpha": dropped,
            "violation": witness,
            "bound_quadratic": _float_down(bq),
            "bound_linear": _float_down(bl),
            "alpha": [float(mpmath.mpf(a.mid)) for a in alpha_iv],
        }
    finally:
        mpmath.iv.prec = old_prec


def _zip_pad(long_list, short_list):
    out = []
    for i, c in enumerate(long_list):
        pc = short_list[i] if i < len(short_list) else 0
        out.append((c, pc))
    return out


def _expand_iv(h_iv_coeffs, n: int):
    """Gegenbauer coefficients of an interval-coefficient polynomial."""
    rem = list(h_iv_coeffs)
    alpha = [mpmath.iv.mpf(0)] * len(rem)
    for k in range(len(rem) - 1, -1, -1):
        a = rem[k]
        alpha[k] = a
        pk = gegenbauer(n, k)
        for j, c in enumerate(pk.coeffs):
            if c != 0:
                rem[j] = rem[j] - a * to_iv(c)
    return alpha


# ----------------------------------------------------------------------
# Hermite certificates.


@dataclass(frozen=True)
class SphericalCertificate:
    n: int
    potential: Potential
    nodes: tuple
    h: Polynomial1D
    expansion: GegenbauerExpansion
    slack: tuple
    bound_quadratic: float
    bound_linear: float
    energy: float
    gap: float
    margins: dict
    precision_digits: int
    valid: bool
    sharp: bool

    def bound(self, N: int) -> float:
        return self.bound_quadratic * N * N + self.bound_linear * N

    @property
    def size(self) -> int:
        """Size of the certified configuration."""
        return int(self.margins["N"])


def _hermite_newton(nodes, values, derivs):
    """Hermite interpolant coefficients (monomial, mpf) via Newton's form."""
    z = []
    for t in nodes:
        z.extend([t, t])
    m = len(z)
    # divided-difference table with derivative entries at repeated nodes
    col = []
    for t, v in zip(nodes, values):
        col.extend([v, v])
    table = [col]
    for order in range(1, m):
        prev = table[order - 1]
        row = []
        for i in range(m - order):
            lo_z, hi_z = z[i], z[i + order]
            if hi_z == lo_z:
                row.append(derivs[i // 2])
            else:
                row.append((prev[i + 1] - prev[i]) / (hi_z - lo_z))
        table.append(row)
    newton = [table[k][0] for k in range(m)]
    coeffs = [mpmath.mpf(0)] * m
    # Horner-style accumulation: p = (...((c_{m-1})(t - z_{m-2}) + c_{m-2})...)
    acc = [newton[m - 1]]
    for k in range(m - 2, -1, -1):
        nxt = [mpmath.mpf(0)] * (len(acc) + 1)
        for j, c in enumerate(acc):
            nxt[j + 1] += c
            nxt[j] -= z[k] * c
        nxt[0] += newton[k]
        acc = nxt
    for j, c in enumerate(acc):
        coeffs[j] = c
    return coeffs


def hermite_certificate(
    C: Configuration,
    f: Potential,
    digits: int = DEFAULT_DIGITS,
    eps_cert: float = 1e-9,
) -> SphericalCertificate:
    """Universal-optimality certificate for an m-distance (2m-1)-design.

    Builds the degree <= 2m-1 Hermite interpolant of g(t) = f(2-2t)/2 at the
    occurring inner products, verifies the two LP conditions, and compares
    the resulting bound with the configuration's energy.
    """
    if not isinstance(f, (InversePower, Gaussian)):
        raise MonotonicityError(
            "certificates need a completely monotonic potential kind "
            "(inverse-power or gaussian)"
        )
    dist = distance_distribution(C)
    nodes = [v for v, _ in dist.entries_below_one()]
    m = len(nodes)
    strength = design_strength(C, 2 * m - 1)
    if strength < 2 * m - 1:
        raise DesignPreconditionError(
            f"{m}-distance set needs design strength {2 * m - 1}, found {strength}"
        )
    dps = digits + _GUARD_DIGITS
    with mpmath.workdps(dps):
        t_mpf = [to_mpf(t) for t in nodes]
        vals = [surface_eval(f, t, 0) for t in t_mpf]
        ders = [surface_eval(f, t, 1) for t in t_mpf]
        coeffs = _hermite_newton(t_mpf, vals, ders)
        h = Polynomial1D(coeffs)
        report = _verified_bound(C.n, f, h, digits)
        N = C.size
        energy_hp = energy_from_distribution(dist, f, high_precision=True)
        bound_hp = (
            mpmath.mpf(report["bound_quadratic"]) * N * N
            + mpmath.mpf(report["bound_linear"]) * N
        )
        gap = energy_hp - bound_hp
        slack = tuple(float(v - _horner_mpf(coeffs, t)) for t, v in zip(t_mpf, vals))
        energy_f = float(energy_hp)
        gap_f = float(gap)
    margins = dict(report)
    for drop in ("bound_quadratic", "bound_linear", "valid", "alpha"):
        margins.pop(drop, None)
    margins["N"] = N
    margins["design_strength"] = strength
    sharp = report["valid"] and abs(gap_f) <= eps_cert * max(1.0, abs(energy_f))
    expansion = GegenbauerExpansion(C.n, tuple(report["alpha"]))
    return SphericalCertificate(
        n=C.n,
        potential=f,
        nodes=tuple(nodes),
        h=h,
        expansion=expansion,
        slack=slack,
        bound_quadratic=report["bound_quadratic"],
        bound_linear=report["bound_linear"],
        energy=energy_f,
        gap=gap_f,
        margins=margins,
        precision_digits=digits,
        valid=report["valid"],
        sharp=sharp,
    )


def _horner_mpf(coeffs, t):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def sharpness_gap(C: Configuration, f: Potential, h: Polynomial1D, digits: int = 60) -> float:
    """E_f(C) minus the verified Yudin bound for h; requires h to be valid."""
    bound, valid, margins = yudin_bound(C.n, f, h, C.size, digits=digits)
    if not valid:
        raise VerificationError(f"auxiliary polynomial failed verification: {margins}")
    dist = distance_distribution(C)
    with mpmath.workdps(digits + _GUARD_DIGITS):
        e = energy_from_distribution(dist, f, high_precision=True)
        return float(e - mpmath.mpf(bound))


# ----------------------------------------------------------------------
# Certificate JSON.


def certificate_payload(cert: SphericalCertificate) -> dict:
    return {
        "n": cert.n,
        "potential": format_potential(cert.potential),
        "nodes": [float(t) for t in cert.nodes],
        "h_monomial": [mpmath.nstr(mpmath.mpf(c), 40) for c in cert.h.coeffs],
        "alpha": list(cert.expansion.coeffs),
        "bound_coeffs": {
            "quadratic": cert.bound_quadratic,
            "linear": cert.bound_linear,
        },
        "energy": cert.energy,
        "gap": cert.gap,
        "margins": {
            k: v for k, v in cert.margins.items() if _jsonable(v)
        },
        "precision_digits": cert.precision_digits,
        "valid": cert.valid,
        "sharp": cert.sharp,
    }


def save_certificate(cert: SphericalCertificate, path) -> None:
    with open(path, "w") as fh:
        json.dump(certificate_payload(cert), fh, indent=2)
        fh.write("\n")


def _jsonable(v) -> bool:
    return isinstance(v, (int, float, str, bool, type(None), list, tuple))


def load_certificate(path) -> dict:
    """Certificates are re-verified on use, so loading returns the raw record."""
    with open(path) as fh:
        payload = json.load(fh)
    payload["potential_obj"] = parse_potential(payload["potential"])
    payload["h_obj"] = Polynomial1D([mpmath.mpf(c) for c in payload["h_monomial"]])
    return payload
