"""Saturated random packings on small tori.

A packing of balls of radius r on the torus (R/LZ)^n is saturated when no
further ball fits, i.e. every point of the torus is within 2r of some
center.  Saturation is certified on a probe grid of spacing delta: if every
grid point is within 2r of a center then every torus point is within
2r + sqrt(n) delta, so balls of that radius cover the torus and

    density >= 2^{-n} (2r / (2r + sqrt(n) delta))^n.

Construction is random sequential insertion until proposals stop landing,
then a systematic sweep that inserts uncovered grid points (deepest holes
first) until the grid is covered.  Periodic distances use a KD-tree with
box topology.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from optima.errors import BudgetError, FormatError
from optima.lattices import ball_volume

_RSA_BATCH = 512
_RSA_IDLE_BATCHES = 3
_MAX_ROUNDS = 500


@dataclass(frozen=True)
class TorusPacking:
    """Centers of disjoint open balls of radius r on (R/LZ)^n."""

    n: int
    box: float
    radius: float
    centers: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.centers, dtype=float)) % self.box
        object.__setattr__(self, "centers", pts)
        if pts.shape[1] != self.n:
            raise ValueError(f"centers have dimension {pts.shape[1]}, expected {self.n}")

    @property
    def size(self) -> int:
        return self.centers.shape[0]

    @property
    def density(self) -> float:
        return self.size * ball_volume(self.n, self.radius) / self.box**self.n


@dataclass(frozen=True)
class SaturationReport:
    packing: TorusPacking
    saturated: bool
    density: float
    certified_lower_bound: float
    max_probe_distance: float
    probe_resolution: float
    rsa_accepted: int
    refill_added: int
    rounds: int


def _min_image(diff: np.ndarray, box: float) -> np.ndarray:
    return (diff + box / 2) % box - box / 2


def _mutually_separated(cands: np.ndarray, box: float, gap: float) -> np.ndarray:
    """Greedy filter keeping candidates pairwise >= gap apart (periodic).

    Takes candidates in the given order; each accepted point eliminates the
    remaining ones within gap of it, so the scan is vectorized over the
    shrinking remainder.
    """
    kept: list[np.ndarray] = []
    remaining = cands
    while remaining.shape[0]:
        p = remaining[0]
        kept.append(p)
        diff = _min_image(remaining - p, box)
        remaining = remaining[np.einsum("ij,ij->i", diff, diff) >= gap * gap]
    return np.asarray(kept) if kept else np.zeros((0, cands.shape[1]))


def _probe_grid(n: int, box: float, delta: float) -> tuple[np.ndarray, float]:
    m = int(math.ceil(box / delta))
    step = box / m
    axis = np.arange(m) * step
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    grid = np.stack([g.ravel() for g in mesh], axis=1)
    return grid, step


def certified_bound(n: int, radius: float, delta: float) -> float:
    """Density lower bound implied by grid coverage at spacing delta."""
    return 2.0**-n * (2 * radius / (2 * radius + math.sqrt(n) * delta)) ** n


def coverage_check(packing: TorusPacking, probe_resolution: float) -> tuple[bool, float]:
    """Re-verify saturation: max probe-grid distance to the centers vs 2r."""
    grid, _ = _probe_grid(packing.n, packing.box, probe_resolution)
    tree = cKDTree(packing.centers, boxsize=packing.box)
    dist, _ = tree.query(grid, k=1, workers=-1)
    dmax = float(dist.max())
    return dmax <= 2 * packing.radius, dmax


def saturate(
    n: int,
    box: float,
    radius: float,
    seed: int = 0,
    probe_resolution: float | None = None,
) -> SaturationReport:
    """Build a saturated packing on (R/LZ)^n and certify its density.

    Requires n in {1, 2, 3}, box >= 8 radius, and probe resolution at most
    radius / 4 (default radius / 4).  Deterministic for fixed seed.
    """
    if n not in (1, 2, 3):
        raise ValueError("torus dimension must be 1, 2, or 3")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if box < 8 * radius:
        raise ValueError("box must be at least 8 radius")
    if probe_resolution is None:
        probe_resolution = radius / 4
    if not 0 < probe_resolution <= radius / 4:
        raise ValueError("probe resolution must lie in (0, radius / 4]")
    rng = np.random.default_rng(seed)
    gap = 2 * radius
    centers = np.zeros((0, n))

    rsa_accepted = 0
    idle = 0
    for _ in range(400):
        if idle >= _RSA_IDLE_BATCHES:
            break
        cands = rng.uniform(0.0, box, size=(_RSA_BATCH, n))
        if centers.shape[0]:
            tree = cKDTree(centers, boxsize=box)
            dist, _ = tree.query(cands, k=1, workers=-1)
            cands = cands[dist >= gap]
        cands = _mutually_separated(cands, box, gap)
        if cands.shape[0] == 0:
            idle += 1
            continue
        idle = 0
        centers = np.vstack([centers, cands])
        rsa_accepted += cands.shape[0]

    grid, step = _probe_grid(n, box, probe_resolution)
    refill_added = 0
    rounds = 0
    while True:
        rounds += 1
        if rounds > _MAX_ROUNDS:
            raise BudgetError("grid refill did not converge")
        tree = cKDTree(centers, boxsize=box)
        dist, _ = tree.query(grid, k=1, workers=-1)
        uncovered = dist > gap
        if not uncovered.any():
            dmax = float(dist.max())
            break
        holes = grid[uncovered]
        order = np.argsort(dist[uncovered])[::-1]
        new = _mutually_separated(holes[order], box, gap)
        centers = np.vstack([centers, new])
        refill_added += new.shape[0]

    packing = TorusPacking(n, box, radius, centers, seed)
    return SaturationReport(
        packing=packing,
        saturated=True,
        density=packing.density,
        certified_lower_bound=certified_bound(n, radius, step),
        max_probe_distance=dmax,
        probe_resolution=step,
        rsa_accepted=rsa_accepted,
        refill_added=refill_added,
        rounds=rounds,
    )


def save_torus_packing(packing: TorusPacking, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{packing.size} {packing.n} {packing.box} {packing.radius}\n")
        for row in packing.centers:
            fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_torus_packing(path) -> TorusPacking:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty packing file")
    head = lines[0].split()
    if len(head) != 4:
        raise FormatError("header must be 'N n L r'")
    count, n = int(head[0]), int(head[1])
    box, radius = float(head[2]), float(head[3])
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != count:
        raise FormatError(f"expected {count} rows, found {len(rows)}")
    pts = np.asarray(rows, dtype=float) if rows else np.zeros((0, n))
    return TorusPacking(n, box, radius, pts)


def report_summary(report: SaturationReport) -> dict:
    return {
        "n": report.packing.n,
        "box": report.packing.box,
        "radius": report.packing.radius,
        "count": report.packing.size,
        "seed": report.packing.seed,
        "density": report.density,
        "certified_lower_bound": report.certified_lower_bound,
        "max_probe_distance": report.max_probe_distance,
        "probe_resolution": report.probe_resolution,
        "rsa_accepted": report.rsa_accepted,
        "refill_added": report.refill_added,
        "rounds": report.rounds,
        "saturated": report.saturated,
    }


def save_report(report: SaturationReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report_summary(report), fh, indent=2)
        fh.write("\n")
