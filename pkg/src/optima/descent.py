"""Local energy minimization on the product of unit spheres.

Projected gradient descent with Armijo backtracking over multiple random
restarts.  The gradient of E = (1/2) sum_{x != y} f(|x - y|^2) at point x_i is
2 sum_j f'(r2_ij) (x_i - x_j); steps move along the tangential component and
renormalize.  Deterministic for a fixed seed: restart index and retry count
are folded into the RNG stream, and the best restart is selected by lowest
energy with ties going to the lowest index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from optima.configurations import Configuration
from optima.errors import DegeneratePairError
from optima.potentials import Potential, energy, radial_derivative, value

_ARMIJO = 1e-4
_SHRINK = 0.5
_COLLAPSE_R2 = 1e-14
_MAX_COLLAPSE_RETRIES = 5


@dataclass(frozen=True)
class RestartStats:
    index: int
    energy: float
    iterations: int
    grad_norm: float
    converged: bool


@dataclass(frozen=True)
class DescentResult:
    best: Configuration
    energy: float
    restarts: int
    per_restart: tuple[RestartStats, ...]
    seed: int

    @property
    def best_index(self) -> int:
        return min(self.per_restart, key=lambda r: (r.energy, r.index)).index


def _energy_grad(pts: np.ndarray, f: Potential):
    diff = pts[:, None, :] - pts[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    iu = np.triu_indices(len(pts), 1)
    pair_r2 = r2[iu]
    if pair_r2.min() < _COLLAPSE_R2:
        raise DegeneratePairError("points collapsed during descent")
    e = float(np.sum(value(f, pair_r2)))
    safe = np.where(r2 > 0, r2, 1.0)
    fp = np.asarray(radial_derivative(f, safe, 1))
    np.fill_diagonal(fp, 0.0)
    grad = 2.0 * np.einsum("ij,ijk->ik", fp, diff)
    return e, grad


def _renormalize(pts: np.ndarray) -> np.ndarray:
    return pts / np.sqrt(np.einsum("ij,ij->i", pts, pts))[:, None]


def _descend(pts: np.ndarray, f: Potential, max_iters: int, grad_tol: float):
    e, g = _energy_grad(pts, f)
    step = 0.1
    iterations = 0
    grad_norm = math.inf
    converged = False
    for iterations in range(1, max_iters + 1):
        rg = g - np.einsum("ij,ij->i", g, pts)[:, None] * pts
        gn2 = float(np.einsum("ij,ij->", rg, rg))
        grad_norm = math.sqrt(gn2)
        if grad_norm <= grad_tol:
            converged = True
            break
        t = step
        accepted = False
        for _ in range(64):
            cand = _renormalize(pts - t * rg)
            try:
                e_new, g_new = _energy_grad(cand, f)
            except DegeneratePairError:
                t *= _SHRINK
                continue
            if e_new <= e - _ARMIJO * t * gn2:
                pts, e, g = cand, e_new, g_new
                step = min(t * 2.0, 1.0)
                accepted = True
                break
            t *= _SHRINK
        if not accepted:
            # line search exhausted: stationary to working precision
            break
    return pts, e, grad_norm, iterations, converged


def minimize_energy(
    n: int,
    N: int,
    f: Potential,
    restarts: int = 10,
    seed: int = 0,
    max_iters: int = 5000,
    grad_tol: float = 1e-10,
) -> DescentResult:
    """Best of `restarts` projected-gradient runs from uniform random starts."""
    if N < 2 or n < 2:
        raise ValueError("need N >= 2 points in dimension n >= 2")
    best_pts = None
    best_energy = math.inf
    stats = []
    for idx in range(restarts):
        out = None
        for attempt in range(_MAX_COLLAPSE_RETRIES):
            rng = np.random.default_rng((seed, idx, attempt))
            pts = _renormalize(rng.standard_normal((N, n)))
            try:
                out = _descend(pts, f, max_iters, grad_tol)
                break
            except DegeneratePairError:
                continue
        if out is None:
            stats.append(RestartStats(idx, math.inf, 0, math.inf, False))
            continue
        pts, e, gn, iters, conv = out
        stats.append(RestartStats(idx, e, iters, gn, conv))
        if e < best_energy:
            best_energy = e
            best_pts = pts
    if best_pts is None:
        raise DegeneratePairError("every restart collapsed; potential may be attractive")
    best = Configuration(n, best_pts)
    # report the canonical pair-sum energy of the returned configuration
    best_energy = energy(best, f)
    return DescentResult(
        best=best,
        energy=best_energy,
        restarts=restarts,
        per_restart=tuple(stats),
        seed=seed,
    )


# ----------------------------------------------------------------------
# Five-point classification (n = 3, N = 5).

TRIANGULAR_BIPYRAMID = "triangular_bipyramid"
SQUARE_PYRAMID = "square_pyramid"
OTHER = "other"

_SPECTRUM_TOL = 1e-6
_APEX_SPREAD_TOL = 1e-4


def _ordered_products(pts: np.ndarray) -> np.ndarray:
    g = pts @ pts.T
    return np.sort(g[~np.eye(len(pts), dtype=bool)])


def classify_five_points(result) -> str:
    """Match a 5-point configuration on S^2 against the two conjectured optima.

    The triangular bipyramid has the fixed ordered-pair spectrum
    {-1: 2, -1/2: 6, 0: 12}; a square pyramid with apex-base inner product h
    has {h: 8, h^2: 8, 2h^2 - 1: 4}, so h is fitted from the apex row before
    comparing.  Anything that misses both within 1e-6 is 'other'.
    """
    C = result.best if isinstance(result, DescentResult) else result
    if C.n != 3 or C.size != 5:
        raise ValueError("classification needs 5 points on S^2")
    pts = np.asarray(C.points, dtype=float)
    vals = _ordered_products(pts)

    bipyramid = np.sort(np.array([-1.0] * 2 + [-0.5] * 6 + [0.0] * 12))
    if np.max(np.abs(vals - bipyramid)) <= _SPECTRUM_TOL:
        return TRIANGULAR_BIPYRAMID

    g = pts @ pts.T
    for apex in range(5):
        others = np.delete(g[apex], apex)
        if others.max() - others.min() > _APEX_SPREAD_TOL:
            continue
        h = float(others.mean())
        if not -1.0 < h < 1.0:
            continue
        model = np.sort(np.array([h] * 8 + [h * h] * 8 + [2 * h * h - 1] * 4))
        if np.max(np.abs(vals - model)) <= _SPECTRUM_TOL:
            return SQUARE_PYRAMID
    return OTHER
