"""Euclidean lattices: catalog, enumeration, theta sums, and Poisson checks.

A lattice is given by basis rows; vectors are integer combinations x @ B.
Exact rational data (basis and Gram matrix) is kept alongside the float64
working copy so that boundary decisions (minimum, kissing number, vectors on
an enumeration sphere) can be made exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from optima.errors import BudgetError, FormatError, TruncationError, UnknownNameError

DEFAULT_BUDGET = 5_000_000


def ball_volume(n: int, r: float) -> float:
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * r**n


# ----------------------------------------------------------------------
# Exact rational linear algebra (small n).


def _frac_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def _frac_det(m) -> Fraction:
    a = [list(row) for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def _frac_inv(m) -> tuple:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _frac_solve(m, rhs) -> tuple:
    inv = _frac_inv(m)
    return tuple(sum(r * inv[i][j] for i, r in enumerate(rhs)) for j in range(len(rhs)))


# ----------------------------------------------------------------------
# Lattice type.


@dataclass(frozen=True, eq=False)
class Lattice:
    n: int
    basis: np.ndarray
    name: str | None = None
    exact_basis: tuple | None = None  # rows of Fractions, when representable
    exact_gram: tuple | None = None  # Gram matrix of Fractions, when available

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.shape != (self.n, self.n):
            raise ValueError(f"basis must be {self.n}x{self.n}")
        if abs(np.linalg.det(b)) < 1e-12:
            raise ValueError("basis rows must be linearly independent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        if self.exact_basis is not None and self.exact_gram is None:
            eb = self.exact_basis
            g = tuple(
                tuple(sum(eb[i][k] * eb[j][k] for k in range(self.n)) for j in range(self.n))
                for i in range(self.n)
            )
            object.__setattr__(self, "exact_gram", g)
        object.__setattr__(self, "_cache", {})

    def gram(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def det_gram_exact(self) -> Fraction | None:
        if self.exact_gram is None:
            return None
        return _frac_det(self.exact_gram)

    def covolume(self) -> float:
        d = self.det_gram_exact()
        if d is not None:
            return math.sqrt(float(d))
        return abs(float(np.linalg.det(self.basis)))


def dual(L: Lattice) -> Lattice:
    """Dual lattice, basis (B^{-1})^T; exact when the input is exact."""
    name = f"{L.name}*" if L.name else None
    if L.exact_basis is not None:
        inv = _frac_inv(L.exact_basis)
        rows = tuple(tuple(inv[i][j] for i in range(L.n)) for j in range(L.n))
        return Lattice(L.n, [[float(x) for x in r] for r in rows], name=name, exact_basis=rows)
    eg = None
    if L.exact_gram is not None:
        eg = _frac_inv(L.exact_gram)
    return Lattice(L.n, np.linalg.inv(L.basis).T, name=name, exact_gram=eg)


def scale_lattice(L: Lattice, factor2) -> Lattice:
    """Rescale so squared lengths multiply by factor2 (kept exact when rational)."""
    q = Fraction(factor2)
    if q <= 0:
        raise ValueError("factor2 must be positive")
    name = f"{L.name}~" if L.name else None
    root = _frac_sqrt(q)
    basis = L.basis * math.sqrt(float(q))
    if L.exact_basis is not None and root is not None:
        rows = tuple(tuple(x * root for x in r) for r in L.exact_basis)
        return Lattice(L.n, [[float(x) for x in r] for r in rows], name=name, exact_basis=rows)
    eg = None
    if L.exact_gram is not None:
        eg = tuple(tuple(x * q for x in row) for row in L.exact_gram)
    return Lattice(L.n, basis, name=name, exact_gram=eg)


def _frac_sqrt(q: Fraction) -> Fraction | None:
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


# ----------------------------------------------------------------------
# Catalog.


def _zn(n: int) -> Lattice:
    rows = _frac_matrix(np.eye(n, dtype=int).tolist())
    return Lattice(n, np.eye(n), name=f"zn:{n}", exact_basis=rows)


def _dn(n: int) -> Lattice:
    if n < 2:
        raise FormatError("dn requires n >= 2")
    b = []
    for i in range(n - 1):
        row = [0] * n
        row[i], row[i + 1] = 1, -1
        b.append(row)
    last = [0] * n
    last[n - 2], last[n - 1] = 1, 1
    b.append(last)
    return Lattice(n, np.array(b, dtype=float), name=f"dn:{n}", exact_basis=_frac_matrix(b))


def _e8() -> Lattice:
    b = [[2, 0, 0, 0, 0, 0, 0, 0]]
    for i in range(6):
        row = [0] * 8
        row[i], row[i + 1] = -1, 1
        b.append(row)
    b.append([Fraction(1, 2)] * 8)
    rows = _frac_matrix(b)
    return Lattice(8, [[float(x) for x in r] for r in rows], name="e8", exact_basis=rows)


def _hexagonal() -> Lattice:
    basis = np.array([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    gram = ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1)))
    return Lattice(2, basis, name="hexagonal", exact_gram=gram)


_LATTICE_DOC = {
    "zn": "integer lattice Z^n (parameter: n >= 1)",
    "dn": "checkerboard lattice D_n, even coordinate sums (parameter: n >= 3)",
    "e8": "the e8 root lattice, unimodular, minimum 2",
    "hexagonal": "hexagonal lattice in the plane, minimum 1",
}


def lattice_names() -> dict:
    return dict(_LATTICE_DOC)


def lattice_catalog(name: str, param: int | None = None) -> Lattice:
    base, _, tail = name.strip().partition(":")
    if tail:
        if param is not None:
            raise FormatError("parameter given both inline and as argument")
        try:
            param = int(tail)
        except ValueError as exc:
            raise FormatError(f"bad lattice parameter {tail!r}") from exc
    if base == "zn":
        if param is None or param < 1:
            raise FormatError("zn requires a dimension parameter n >= 1")
        return _zn(param)
    if base == "dn":
        if param is None:
            raise FormatError("dn requires a dimension parameter n >= 3")
        return _dn(param)
    if base == "e8":
        if param is not None:
            raise FormatError("e8 takes no parameter")
        return _e8()
    if base == "hexagonal":
        if param is not None:
            raise FormatError("hexagonal takes no parameter")
        return _hexagonal()
    raise UnknownNameError(f"unknown lattice {base!r}; known: {sorted(_LATTICE_DOC)}")


# ----------------------------------------------------------------------
# Enumeration (Fincke-Pohst with a vectorized innermost level).


def _leaf_batches(U: np.ndarray, y: np.ndarray, r2max: float):
    """Yield (x0s, norms, tail) for all integer x with |U (x - y)|^2 <= r2max.

    U is upper triangular with positive diagonal; tail holds x_1..x_{n-1}
    (fixed per batch) and x0s enumerates the innermost coordinate.
    """
    n = U.shape[0]
    diag = np.diag(U)
    x = np.zeros(n, dtype=np.int64)

    def rec(i: int, partial: float):
        rem = r2max - partial
        if rem < 0:
            return
        rho = math.sqrt(rem) / diag[i]
        s = float(U[i, i + 1 :] @ (x[i + 1 :] - y[i + 1 :])) if i + 1 < n else 0.0
        center = y[i] - s / diag[i]
        lo = math.ceil(center - rho - 1e-12)
        hi = math.floor(center + rho + 1e-12)
        if lo > hi:
            return
        if i == 0:
            x0s = np.arange(lo, hi + 1, dtype=np.int64)
            w0 = diag[0] * (x0s - y[0]) + s
            norms = partial + w0 * w0
            keep = norms <= r2max
            if np.any(keep):
                yield x0s[keep], norms[keep], tuple(x[1:])
            return
        for xi in range(lo, hi + 1):
            x[i] = xi
            w = diag[i] * (xi - y[i]) + s
            yield from rec(i - 1, partial + w * w)
        x[i] = 0

    yield from rec(n - 1, 0.0)


def _cholesky_upper(L: Lattice) -> np.ndarray:
    g = L.gram()
    return np.linalg.cholesky(g).T


def all_norms(L: Lattice, r2max: float, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Float squared norms of all lattice vectors with |v|^2 <= r2max, zero included."""
    cached = L._cache.get("norms")
    if cached is not None and cached[0] >= float(r2max) - 1e-12:
        arr = cached[1]
        return arr[arr <= r2max + 1e-9]
    U = _cholesky_upper(L)
    y = np.zeros(L.n)
    chunks = []
    total = 0
    for _, norms, _ in _leaf_batches(U, y, float(r2max) * (1 + 1e-12) + 1e-12):
        total += norms.size
        if total > budget:
            raise BudgetError(f"enumeration exceeded budget of {budget} vectors")
        chunks.append(norms)
    out = np.sort(np.concatenate(chunks)) if chunks else np.zeros(0)
    L._cache["norms"] = (float(r2max), out)
    return out


def shell_counts(L: Lattice, r2max: float, budget: int = DEFAULT_BUDGET):
    """(r2 values, counts) over nonzero vectors up to r2max, clustered at 1e-8."""
    norms = all_norms(L, r2max, budget)
    norms = norms[norms > 1e-12]
    vals, counts = np.unique(np.round(norms, 8), return_counts=True)
    return vals, counts


def enumerate_vectors(
    L: Lattice, r2max: float, budget: int = DEFAULT_BUDGET, include_zero: bool = False
):
    """All lattice vectors with |v|^2 <= r2max, sorted by (norm, coordinates).

    When an exact Gram matrix is available the radius filter is exact: r2max
    is interpreted at its exact rational value.
    """
    U = _cholesky_upper(L)
    y = np.zeros(L.n)
    coords = []
    total = 0
    slack = float(r2max) * (1 + 1e-9) + 1e-9
    for x0s, _, tail in _leaf_batches(U, y, slack):
        total += x0s.size
        if total > budget:
            raise BudgetError(f"enumeration exceeded budget of {budget} vectors")
        block = np.empty((x0s.size, L.n), dtype=np.int64)
        block[:, 0] = x0s
        block[:, 1:] = np.asarray(tail, dtype=np.int64)
        coords.append(block)
    if not coords:
        return np.zeros((0, L.n)), np.zeros(0)
    X = np.concatenate(coords)
    if L.exact_gram is not None:
        den = 1
        for row in L.exact_gram:
            for g in row:
                den = den * g.denominator // math.gcd(den, g.denominator)
        gint = np.array(
            [[int(g * den) for g in row] for row in L.exact_gram], dtype=np.int64
        )
        nq = np.einsum("ij,jk,ik->i", X, gint, X)
        bound = Fraction(r2max) * den
        keep = nq <= math.floor(bound)
        X = X[keep]
        norms = nq[keep] / float(den)
    else:
        v = X @ L.basis
        norms = np.einsum("ij,ij->i", v, v)
        keep = norms <= float(r2max) + 1e-9
        X, norms = X[keep], norms[keep]
    if not include_zero:
        nz = norms > 1e-12
        X, norms = X[nz], norms[nz]
    vecs = X @ L.basis
    order = np.lexsort(tuple(np.round(vecs[:, k], 12) for k in range(L.n - 1, -1, -1)))
    return vecs[order], norms[order]


def min_norm2(L: Lattice) -> float:
    cached = L._cache.get("min2")
    if cached is not None:
        return cached
    r2 = float(min(np.einsum("ij,ij->i", L.basis, L.basis)))
    while True:
        _, norms = enumerate_vectors(L, r2)
        if norms.size:
            out = float(norms.min())
            break
        r2 *= 2
    L._cache["min2"] = out
    return out


def minimal_vectors(L: Lattice) -> np.ndarray:
    m2 = min_norm2(L)
    vecs, norms = enumerate_vectors(L, m2 * (1 + 1e-9))
    return vecs[np.abs(norms - m2) <= 1e-9 * (1 + m2)]


def kissing_number(L: Lattice) -> int:
    return len(minimal_vectors(L))


def packing_density(L: Lattice) -> float:
    """Fraction of space covered by balls of radius half the minimum distance."""
    r = math.sqrt(min_norm2(L)) / 2
    return ball_volume(L.n, r) / L.covolume()


def closest_distance2(L: Lattice, point) -> float:
    """Squared distance from an arbitrary point to the nearest lattice vector."""
    p = np.asarray(point, dtype=float)
    y = np.linalg.solve(L.basis.T, p)
    x0 = np.round(y)
    d0 = x0 @ L.basis - p
    r2 = float(d0 @ d0) * (1 + 1e-9) + 1e-12
    U = _cholesky_upper(L)
    best = float(d0 @ d0)
    for _, norms, _ in _leaf_batches(U, y, r2):
        m = float(norms.min())
        if m < best:
            best = m
    return best


def contains(L: Lattice, vector) -> bool:
    """Exact membership test; requires an exact basis and a rational vector."""
    if L.exact_basis is None:
        raise ValueError("membership test needs an exact basis")
    rhs = tuple(Fraction(v) for v in vector)
    x = _frac_solve(L.exact_basis, rhs)
    return all(q.denominator == 1 for q in x)


# ----------------------------------------------------------------------
# Theta sums and the Poisson identity.


def gaussian_theta(L: Lattice, s: float, r2max: float, budget: int = DEFAULT_BUDGET) -> float:
    """Truncated theta sum: sum over |v|^2 <= r2max of exp(-pi s |v|^2), zero included.

    Sums over raw norms rather than merged shells: the shell merge rounds
    squared norms to 1e-8, which is visible at the 1e-9 level in the theta
    value for lattices with irrational norms.
    """
    if s <= 0:
        raise ValueError("width s must be positive")
    norms = all_norms(L, r2max, budget)
    norms = norms[norms > 1e-12]
    return 1.0 + float(np.sum(np.exp(-math.pi * s * norms)))


def _covering_bound(L: Lattice) -> float:
    """Upper bound on the covering radius: half the Gram-Schmidt box diagonal."""
    c = np.linalg.cholesky(L.gram())
    return 0.5 * math.sqrt(float(np.sum(np.diag(c) ** 2)))


def theta_tail_bound(L: Lattice, s: float, r2from: float) -> float:
    """Upper bound on the theta sum over |v|^2 > r2from.

    Voronoi cells of the vectors in a shell a <= |v| < b are disjoint and lie
    in the annulus a - mu <= |x| <= b + mu for any covering-radius bound mu,
    so the shell count is at most the annulus volume over the covolume.
    """
    covol = L.covolume()
    mu = _covering_bound(L)
    R = math.sqrt(max(r2from, 0.0))
    total = 0.0
    prev = math.inf
    j = 0
    while True:
        a, b = R + j, R + j + 1
        count = (ball_volume(L.n, b + mu) - ball_volume(L.n, max(a - mu, 0.0))) / covol
        term = count * math.exp(-math.pi * s * a * a)
        total += term
        if term < max(1e-32, 1e-17 * total) and term < prev / 2:
            # decay is now dominated by the Gaussian; close with a geometric tail
            return total + term
        prev = term
        j += 1
        if j > 10_000:
            raise RuntimeError("tail bound did not converge")


def _auto_radius(L: Lattice, s: float, target_rel: float = 1e-14) -> float:
    rough = max(1.0, s ** (-L.n / 2) / L.covolume())
    r2 = 4.0 / s
    while theta_tail_bound(L, s, r2) > target_rel * rough:
        r2 *= 1.15
        if r2 > 1e6:
            raise RuntimeError("could not find a workable truncation radius")
    return r2


@dataclass(frozen=True)
class PoissonReport:
    """Truncated two-sided theta comparison; discrepancy is relative to lhs."""

    s: float
    lhs: float
    rhs: float
    discrepancy: float
    trunc_r2: float
    dual_trunc_r2: float
    tail_primal: float
    tail_dual: float

    @property
    def absolute_discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)


def poisson_check(
    L: Lattice, s: float, trunc_r2: float | None = None, budget: int = DEFAULT_BUDGET
) -> PoissonReport:
    """Compare sum_L exp(-pi s |v|^2) with covol^-1 s^{-n/2} sum_{L*} exp(-pi |w|^2 / s).

    Truncation radii are chosen so the neglected tails are provably below
    1e-14 of the totals; passing trunc_r2 overrides the primal radius and
    raises TruncationError when the tail bound there is too large.
    """
    Ld = L._cache.setdefault("dual", dual(L))
    r2p = _auto_radius(L, s)
    if trunc_r2 is not None:
        tail = theta_tail_bound(L, s, trunc_r2)
        rough = max(1.0, s ** (-L.n / 2) / L.covolume())
        if tail > 1e-10 * rough:
            raise TruncationError(
                f"tail bound {tail:.3e} at r2={trunc_r2} too large; need r2 >= {r2p:.1f}"
            )
        r2p = trunc_r2
    r2d = _auto_radius(Ld, 1.0 / s)
    lhs = gaussian_theta(L, s, r2p, budget)
    rhs = gaussian_theta(Ld, 1.0 / s, r2d, budget) / (L.covolume() * s ** (L.n / 2))
    return PoissonReport(
        s=float(s),
        lhs=lhs,
        rhs=rhs,
        discrepancy=abs(lhs - rhs) / abs(lhs),
        trunc_r2=r2p,
        dual_trunc_r2=r2d,
        tail_primal=theta_tail_bound(L, s, r2p),
        tail_dual=theta_tail_bound(Ld, 1.0 / s, r2d) / (L.covolume() * s ** (L.n / 2)),
    )


# ----------------------------------------------------------------------
# Deep holes of dn.


@dataclass(frozen=True)
class DnDeepHoleReport:
    n: int
    min_norm2: float
    all_halves_distance2: Fraction
    integer_hole_distance2: Fraction
    covering_radius2: Fraction
    union_min_norm2: Fraction
    union_is_lattice: bool
    fills_to_e8: bool

    @property
    def distance(self) -> float:
        """Distance from the all-halves point to dn, sqrt(n)/2."""
        return math.sqrt(self.all_halves_distance2)


def deep_hole_check_dn(n: int) -> DnDeepHoleReport:
    """Distances from the two hole types of dn and what the half-integer glue does.

    The point h = (1/2, ..., 1/2) is at squared distance n/4 from dn; points
    like e_1 (odd coordinate sum) are at squared distance 1.  Adjoining the
    translate dn + h halves the covolume and keeps the minimum at 2 exactly
    when n >= 8; at n = 8 the result is the e8 lattice.
    """
    L = lattice_catalog("dn", n)
    h = np.full(n, 0.5)
    d2_h = closest_distance2(L, h)
    if abs(d2_h - n / 4) > 1e-9:
        raise RuntimeError(f"unexpected all-halves distance {d2_h}")
    e1 = np.zeros(n)
    e1[0] = 1.0
    d2_e1 = closest_distance2(L, e1)
    if abs(d2_e1 - 1.0) > 1e-9:
        raise RuntimeError(f"unexpected integer-hole distance {d2_e1}")
    halves = Fraction(n, 4)
    union_min = min(Fraction(2), halves)
    fills = False
    if n == 8:
        e8 = lattice_catalog("e8")
        fills = (
            union_min == 2
            and contains(e8, [Fraction(1, 2)] * 8)
            and all(contains(e8, row) for row in L.exact_basis)
            and _frac_det(e8.exact_gram) * 4 == _frac_det(L.exact_gram)
        )
    return DnDeepHoleReport(
        n=n,
        min_norm2=min_norm2(L),
        all_halves_distance2=halves,
        integer_hole_distance2=Fraction(1),
        covering_radius2=max(Fraction(1), halves),
        union_min_norm2=union_min,
        union_is_lattice=(n % 2 == 0),
        fills_to_e8=fills,
    )


# ----------------------------------------------------------------------
# File IO: first line n, then n basis rows (entries rational or decimal).


def save_lattice(L: Lattice, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{L.n}\n")
        if L.exact_basis is not None:
            for row in L.exact_basis:
                fh.write(" ".join(str(x) for x in row) + "\n")
        else:
            for row in L.basis:
                fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_lattice(path) -> Lattice:
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens:
        raise FormatError("empty lattice file")
    try:
        n = int(tokens[0])
    except ValueError as exc:
        raise FormatError("first token must be the dimension") from exc
    vals = tokens[1:]
    if len(vals) != n * n:
        raise FormatError(f"expected {n * n} basis entries, found {len(vals)}")
    try:
        rows = tuple(
            tuple(Fraction(vals[i * n + j]) for j in range(n)) for i in range(n)
        )
    except ValueError:
        try:
            floats = [[float(vals[i * n + j]) for j in range(n)] for i in range(n)]
        except ValueError as exc:
            raise FormatError(f"bad basis entry: {exc}") from exc
        return Lattice(n, np.array(floats))
    return Lattice(n, [[float(x) for x in r] for r in rows], exact_basis=rows)
