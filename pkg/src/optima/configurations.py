"""Finite point configurations on the unit sphere S^{n-1}.

A configuration stores float64 coordinates; the structured catalog entries
additionally carry their inner-product spectrum in exact form (rationals,
quadratic irrationals, rational-angle cosines) so that certificates can
re-evaluate node data at arbitrary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np

from optima import scalars
from optima.errors import ClusterAmbiguityError, FormatError, UnknownNameError
from optima.gegenbauer import eval_all
from optima.scalars import ExactScalar, cosine_angle, exact_fraction, quadratic, rational

_UNIT_TOL = 1e-12
_DISTINCT_R2 = 1e-12


@dataclass(frozen=True, eq=False)
class Configuration:
    """Points on S^{n-1}; exact_pairs, when present, lists (t, ordered-pair count) for t < 1."""

    n: int
    points: np.ndarray
    name: str | None = None
    exact_pairs: tuple | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.n:
            raise ValueError(f"points must have shape (N, {self.n})")
        norms = np.einsum("ij,ij->i", pts, pts)
        if np.any(np.abs(norms - 1.0) > _UNIT_TOL):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise ValueError(f"points must lie on the unit sphere (worst |r2-1| = {worst:.2e})")
        g = pts @ pts.T
        off = g[~np.eye(len(pts), dtype=bool)]
        if off.size and off.max() > 1.0 - _DISTINCT_R2 / 2:
            raise ValueError("configuration has (nearly) coincident points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.exact_pairs is not None:
            object.__setattr__(self, "exact_pairs", tuple(self.exact_pairs))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def gram(self) -> np.ndarray:
        return self.points @ self.points.T


@dataclass(frozen=True, eq=False)
class DistanceDistribution:
    """Counts A_t of ordered pairs at inner product t, including A_1 = N."""

    n: int
    size: int
    entries: tuple  # ((t, count), ...) ascending in t; t is float, Fraction, or ExactScalar

    def entries_below_one(self):
        return [(v, c) for v, c in self.entries if not _is_one(v)]

    @property
    def num_distances(self) -> int:
        return len(self.entries_below_one())

    @property
    def exact(self) -> bool:
        return all(not isinstance(v, float) for v, _ in self.entries)

    def total_pairs(self) -> int:
        return sum(c for _, c in self.entries)

    def mean_inner_product(self) -> float:
        return sum(c * float(v) for v, c in self.entries) / self.total_pairs()


def _is_one(v) -> bool:
    q = exact_fraction(v)
    if q is not None:
        return q == 1
    return float(v) == 1.0


def configuration(points, name: str | None = None, exact_pairs=None) -> Configuration:
    pts = np.asarray(points, dtype=float)
    return Configuration(pts.shape[1], pts, name=name, exact_pairs=exact_pairs)


# ----------------------------------------------------------------------
# Distance distributions.


def distance_distribution(C: Configuration, merge_tol: float = 1e-9) -> DistanceDistribution:
    """Distribution of inner products; single-linkage merge at merge_tol on the float path.

    Catalog configurations return their exact spectrum regardless of merge_tol.
    """
    if merge_tol < 0:
        raise ValueError("merge_tol must be nonnegative")
    N = C.size
    if C.exact_pairs is not None:
        entries = sorted(C.exact_pairs, key=lambda e: float(e[0]))
        entries.append((rational(1), N))
        dist = DistanceDistribution(C.n, N, tuple(entries))
    else:
        g = C.gram()
        off = np.sort(g[~np.eye(N, dtype=bool)].ravel())
        entries = []
        if off.size:
            breaks = np.nonzero(np.diff(off) > merge_tol)[0]
            start = 0
            for b in list(breaks) + [off.size - 1]:
                block = off[start : b + 1]
                entries.append((float(np.mean(block)), int(block.size)))
                start = b + 1
        means = [v for v, _ in entries]
        gaps = np.diff(means)
        if gaps.size and gaps.min() <= 10 * merge_tol:
            raise ClusterAmbiguityError(
                f"inner-product clusters separated by {gaps.min():.3e} "
                f"<= 10 * merge_tol = {10 * merge_tol:.3e}"
            )
        entries.append((1.0, N))
        dist = DistanceDistribution(C.n, N, tuple(entries))
    _validate_distribution(dist)
    return dist


def _validate_distribution(dist: DistanceDistribution) -> None:
    if dist.total_pairs() != dist.size**2:
        raise ValueError("pair counts must sum to N^2")
    one = [c for v, c in dist.entries if _is_one(v)]
    if len(one) != 1 or one[0] != dist.size:
        raise ValueError("diagonal entry A_1 must equal N")
    mean = dist.mean_inner_product()
    if mean < -1e-9:
        raise ValueError(f"sum of A_t * t must be nonnegative, got {mean * dist.size**2:.3e}")


def inner_product_spectrum(C: Configuration, merge_tol: float = 1e-9) -> list:
    """Distinct inner products strictly below 1, ascending."""
    return [v for v, _ in distance_distribution(C, merge_tol).entries_below_one()]


def design_strength(C: Configuration, k_max: int | None = None, tol: float = 1e-9) -> int:
    """Largest k <= k_max with sum_{x,y} P_j(<x,y>) = 0 for all 1 <= j <= k.

    Exact-spectrum configurations are decided in exact or 60-digit arithmetic;
    float configurations use kernel sums with threshold tol * N^2.
    """
    dist = distance_distribution(C)
    if k_max is None:
        k_max = 2 * dist.num_distances
    if k_max < 1:
        return 0
    N2 = C.size**2
    fracs = [(exact_fraction(v), c) for v, c in dist.entries]
    if all(q is not None for q, _ in fracs):
        sums = _kernel_sums_exact(C.n, k_max, fracs)
        ok = [s == 0 for s in sums]
    elif dist.exact:
        with mpmath.workdps(60):
            vals = [(scalars.to_mpf(v), c) for v, c in dist.entries]
            sums = _kernel_sums_generic(C.n, k_max, vals, mpmath.mpf)
            ok = [abs(s) < mpmath.mpf(10) ** (-40) * N2 for s in sums]
    else:
        vals = [(float(v), c) for v, c in dist.entries]
        sums = _kernel_sums_generic(C.n, k_max, vals, float)
        ok = [abs(s) < tol * N2 for s in sums]
    strength = 0
    for j in range(k_max):
        if not ok[j]:
            break
        strength = j + 1
    return strength


def _kernel_sums_exact(n: int, k_max: int, entries) -> list:
    sums = [Fraction(0)] * k_max
    for q, c in entries:
        vals = eval_all(n, k_max, q, conv=Fraction)
        for j in range(1, k_max + 1):
            sums[j - 1] += c * vals[j]
    return sums


def _kernel_sums_generic(n: int, k_max: int, entries, conv) -> list:
    sums = [conv(0)] * k_max
    for v, c in entries:
        vals = eval_all(n, k_max, v, conv=conv)
        for j in range(1, k_max + 1):
            sums[j - 1] = sums[j - 1] + c * vals[j]
    return sums


# ----------------------------------------------------------------------
# Catalog.


def _simplex(n: int) -> Configuration:
    eye = np.eye(n + 1)
    c = np.full(n + 1, 1.0 / (n + 1))
    raw = eye - c
    # orthonormal basis of the hyperplane sum x_i = 0
    q, _ = np.linalg.qr(raw.T[:, :n])
    pts = raw @ q
    pts /= np.sqrt(np.einsum("ij,ij->i", pts, pts))[:, None]
    pairs = ((rational(Fraction(-1, n)), (n + 1) * n),)
    return Configuration(n, pts, name=f"simplex:{n}", exact_pairs=pairs)


def _cross_polytope(n: int) -> Configuration:
    pts = np.vstack([np.eye(n), -np.eye(n)])
    pairs = []
    if n > 1:
        pairs.append((rational(0), 2 * n * (2 * n - 2)))
    pairs.append((rational(-1), 2 * n))
    return Configuration(n, pts, name=f"cross-polytope:{n}", exact_pairs=tuple(pairs))


def _icosahedron() -> Configuration:
    phi = (1 + math.sqrt(5)) / 2
    scale = 1.0 / math.sqrt(1 + phi * phi)
    pts = []
    for a, b in [(1.0, phi), (1.0, -phi), (-1.0, phi), (-1.0, -phi)]:
        pts.append((0.0, a * scale, b * scale))
        pts.append((a * scale, b * scale, 0.0))
        pts.append((b * scale, 0.0, a * scale))
    pairs = (
        (rational(-1), 12),
        (quadratic(0, Fraction(-1, 5), 5), 60),
        (quadratic(0, Fraction(1, 5), 5), 60),
    )
    return Configuration(3, np.array(pts), name="icosahedron", exact_pairs=pairs)


def _e8_roots() -> Configuration:
    vecs = []
    for i, j in combinations(range(8), 2):
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                v = np.zeros(8)
                v[i], v[j] = si, sj
                vecs.append(v)
    for bits in range(256):
        signs = [(-1.0) ** ((bits >> k) & 1) for k in range(8)]
        if signs.count(-1.0) % 2 == 0:
            vecs.append(np.array(signs) / 2)
    pts = np.array(vecs) / math.sqrt(2)
    pairs = (
        (rational(-1), 240),
        (rational(Fraction(-1, 2)), 13440),
        (rational(0), 30240),
        (rational(Fraction(1, 2)), 13440),
    )
    return Configuration(8, pts, name="e8-roots", exact_pairs=pairs)


def _ngon(N: int) -> Configuration:
    angles = 2 * np.pi * np.arange(N) / N
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    pairs = []
    for k in range(1, N // 2 + 1):
        count = N if 2 * k == N else 2 * N
        pairs.append((cosine_angle(k, N), count))
    pairs.sort(key=lambda e: float(e[0]))
    return Configuration(2, pts, name=f"ngon:{N}", exact_pairs=tuple(pairs))


_CATALOG_DOC = {
    "simplex": "regular simplex, N = n + 1 (parameter: n >= 1)",
    "cross-polytope": "coordinate cross polytope, N = 2n (parameter: n >= 1)",
    "icosahedron": "regular icosahedron on S^2, N = 12",
    "e8-roots": "240 minimal vectors of the e8 lattice, rescaled to S^7",
    "ngon": "regular N-gon on the circle (parameter: N >= 2)",
}


def catalog_names() -> dict:
    return dict(_CATALOG_DOC)


def catalog(name: str, param: int | None = None) -> Configuration:
    """Construct a catalog configuration; `name` may carry the parameter, e.g. 'simplex:4'."""
    base, _, tail = name.strip().replace("_", "-").partition(":")
    if tail:
        if param is not None:
            raise FormatError("parameter given both inline and as argument")
        try:
            param = int(tail)
        except ValueError as exc:
            raise FormatError(f"bad catalog parameter {tail!r}") from exc
    if base == "simplex":
        if param is None or param < 1:
            raise FormatError("simplex requires a dimension parameter n >= 1")
        return _simplex(param)
    if base == "cross-polytope":
        if param is None or param < 1:
            raise FormatError("cross-polytope requires a dimension parameter n >= 1")
        return _cross_polytope(param)
    if base == "icosahedron":
        if param is not None:
            raise FormatError("icosahedron takes no parameter")
        return _icosahedron()
    if base == "e8-roots":
        if param is not None:
            raise FormatError("e8-roots takes no parameter")
        return _e8_roots()
    if base == "ngon":
        if param is None or param < 2:
            raise FormatError("ngon requires a size parameter N >= 2")
        return _ngon(param)
    raise UnknownNameError(f"unknown configuration {base!r}; known: {sorted(_CATALOG_DOC)}")


# ----------------------------------------------------------------------
# Random starts and file IO.


def random_configuration(n: int, N: int, rng: np.random.Generator) -> Configuration:
    for _ in range(64):
        pts = rng.standard_normal((N, n))
        pts /= np.sqrt(np.einsum("ij,ij->i", pts, pts))[:, None]
        g = pts @ pts.T
        off = g[~np.eye(N, dtype=bool)]
        if not off.size or off.max() < 1.0 - 1e-6:
            return Configuration(n, pts)
    raise RuntimeError("could not draw distinct random points")


def save_points(C: Configuration, path) -> None:
    """Write the points-file format: header 'N n', one point per line."""
    with open(path, "w") as fh:
        fh.write(f"{C.size} {C.n}\n")
        for row in C.points:
            fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_points(path, renormalize: bool = False) -> Configuration:
    """Read a points file ('#' starts a comment line); rows must be unit vectors.

    Norm deviations up to 1e-9 are accepted and projected back to the sphere;
    larger deviations are an error unless renormalize=True.
    """
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.lstrip().startswith("#")]
    tokens = " ".join(lines).split()
    if len(tokens) < 2:
        raise FormatError("points file needs a 'N n' header")
    try:
        N, n = int(tokens[0]), int(tokens[1])
        vals = [float(x) for x in tokens[2:]]
    except ValueError as exc:
        raise FormatError(f"bad token in points file: {exc}") from exc
    if len(vals) != N * n:
        raise FormatError(f"expected {N * n} coordinates, found {len(vals)}")
    pts = np.array(vals).reshape(N, n)
    norms = np.sqrt(np.einsum("ij,ij->i", pts, pts))
    if np.any(norms == 0):
        raise FormatError("zero row in points file")
    if not renormalize and np.any(np.abs(norms - 1.0) > 1e-9):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise FormatError(
            f"rows must have unit norm within 1e-9 (worst {worst:.2e}); "
            "pass renormalize=True to rescale"
        )
    pts /= norms[:, None]
    return Configuration(n, pts)
