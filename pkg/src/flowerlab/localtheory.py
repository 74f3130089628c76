"""Local theory of flowers: geometric distance, projections/sections,
the stability bound, Dvoretzky-type projection search, and global averaging.

Projection and rotation act on the petal representation whenever one is
available (exact at any direction); flowers built without petals can have a
canonical petal list synthesized from the core boundary at the grid nodes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ._sampleops import EPS_FLOOR
from .bodies import Flower, StarBody, convex_hull_radial, flower_from_petals
from .errors import (
    ParameterError,
    RepresentationRequiredError,
    SymmetryError,
    UnboundedBodyError,
    UnsupportedDimensionError,
)
from .spherecore import (
    DirectionGrid,
    SubspaceBasis,
    child_seed,
    random_rotation,
    random_subspace,
    sampled_sphere_grid,
    uniform_angle_grid,
)


@dataclass(eq=False)
class DistanceReport:
    """Geometric distance to the ball with witness directions."""

    value: float
    argmax_direction: np.ndarray
    argmin_direction: np.ndarray


@dataclass(eq=False)
class ExperimentReport:
    """Deterministic tabular output for CSV emission."""

    header: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.header):
            raise ParameterError("row length does not match header")
        self.rows.append(tuple(values))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)


def _radial_of(a: StarBody | Flower) -> tuple[DirectionGrid, np.ndarray]:
    if isinstance(a, Flower):
        return a.grid, a.radial
    return a.grid, a.radial


def distance_to_ball(a: StarBody | Flower, symmetry_tol: float = 1e-6) -> DistanceReport:
    """d(A, B) for origin-symmetric A: max radial over min radial."""
    grid, r = _radial_of(a)
    anti = grid.antipode_index()
    rel_asym = np.abs(r - r[anti]) / np.maximum(r, r[anti])
    if rel_asym.max() > symmetry_tol:
        raise SymmetryError(f"body is not origin-symmetric (relative gap {rel_asym.max():.2e})")
    if r.min() <= EPS_FLOOR:
        raise UnboundedBodyError("degenerate body: distance to the ball is unbounded")
    i, j = int(np.argmax(r)), int(np.argmin(r))
    return DistanceReport(float(r[i] / r[j]), grid.directions[i].copy(), grid.directions[j].copy())


def canonical_petals(f: Flower) -> np.ndarray:
    """Canonical petal list: core boundary points along the grid rays."""
    if f.petals is not None:
        return f.petals
    from ._sampleops import radial_of_halfspaces

    w = radial_of_halfspaces(f.grid, f.radial)
    return w[:, None] * f.grid.directions


def default_subgrid(k: int, size: int = 720, seed: int = 0) -> DirectionGrid:
    """Working grid inside a k-dimensional subspace (k >= 2)."""
    if k == 2:
        return uniform_angle_grid(size)
    n = max(64, size)
    return sampled_sphere_grid(k, n + (n % 2), seed, symmetric=True)


def projected_radial(f: Flower, e: SubspaceBasis, directions_k: np.ndarray) -> np.ndarray:
    """Radial samples of P_E F at unit directions given in frame coordinates.

    Each petal B_x projects to the ball with center P_E x / 2 and radius
    |x| / 2 inside E; the projected flower is the union of those balls.
    """
    if f.petals is None:
        raise RepresentationRequiredError("projection needs a petal representation")
    if e.ambient_dim != f.grid.dim:
        raise ParameterError("subspace lives in a different ambient dimension")
    dk = np.atleast_2d(np.asarray(directions_k, dtype=float))
    cents = (f.petals @ e.frame.T) / 2.0  # (M, k)
    rho = np.linalg.norm(f.petals, axis=1) / 2.0  # (M,)
    ip = dk @ cents.T  # (Q, M)
    disc = np.maximum(rho[None, :] ** 2 - (cents ** 2).sum(axis=1)[None, :] + ip ** 2, 0.0)
    rad = (ip + np.sqrt(disc)).max(axis=1)
    return np.maximum(rad, EPS_FLOOR)


def project_flower(f: Flower, e: SubspaceBasis, grid: DirectionGrid | None = None) -> Flower:
    """P_E F as a flower on a grid inside E (k >= 2)."""
    if e.k < 2:
        raise UnsupportedDimensionError("project_flower needs k >= 2; use projected_radial for k = 1")
    if grid is None:
        grid = default_subgrid(e.k)
    r = projected_radial(f, e, grid.directions)
    return Flower(StarBody(grid, r))


def section_radial(f: Flower, e: SubspaceBasis, directions_k: np.ndarray) -> np.ndarray:
    """Radial samples of F cap E at frame-coordinate directions.

    With petals the values are exact (r_F(u) = max_x <x, u>_+); otherwise the
    parent radial is resampled by nearest grid direction.
    """
    dk = np.atleast_2d(np.asarray(directions_k, dtype=float))
    lifted = dk @ e.frame  # (Q, ambient)
    if f.petals is not None:
        r = np.maximum(f.petals @ lifted.T, 0.0).max(axis=0)
        return np.maximum(r, EPS_FLOOR)
    near = np.argmax(lifted @ f.grid.directions.T, axis=1)
    return f.radial[near]


def section_flower(f: Flower, e: SubspaceBasis, grid: DirectionGrid | None = None) -> Flower:
    """F cap E as a flower on a grid inside E (k >= 2)."""
    if e.k < 2:
        raise UnsupportedDimensionError("section_flower needs k >= 2")
    if grid is None:
        grid = default_subgrid(e.k)
    return Flower(StarBody(grid, section_radial(f, e, grid.directions)))


@dataclass(eq=False)
class StabilityReport:
    eps: float
    hull_distance: float
    flower_distance: float
    bound_applies: bool
    bound_holds: bool | None


def stability_check(f: Flower, symmetry_tol: float = 1e-6) -> StabilityReport:
    """Check d(F, B) <= 1 + 3 sqrt(eps) where 1 + eps = d(conv F, B).

    The bound is asserted only in its regime eps < 1/10; both distances are
    reported regardless.  Scaling is immaterial: both distances are
    max/min radial ratios.
    """
    hull = convex_hull_radial(f)
    d_hull = distance_to_ball(hull, symmetry_tol).value
    d_flower = distance_to_ball(f.body, symmetry_tol).value
    eps = d_hull - 1.0
    applies = eps < 0.1
    holds = (d_flower <= 1.0 + 3.0 * np.sqrt(max(eps, 0.0))) if applies else None
    return StabilityReport(eps, d_hull, d_flower, applies, holds)


def random_symmetric_flower(
    grid: DirectionGrid,
    seed: int,
    num_pairs: int = 48,
    radius_lo: float = 0.9,
    radius_hi: float = 1.0,
) -> Flower:
    """Union of symmetric petal pairs with endpoints near the unit sphere."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(num_pairs, grid.dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    x *= rng.uniform(radius_lo, radius_hi, size=(num_pairs, 1))
    return flower_from_petals(np.vstack([x, -x]), grid)


@dataclass(eq=False)
class DvoretzkyResult:
    k: int
    trials: int
    best_distance: float
    best_subspace: SubspaceBasis
    distances: np.ndarray
    section_distances: np.ndarray | None

    def quantiles(self, qs=(0.1, 0.5, 0.9)) -> dict[float, float]:
        return {q: float(np.quantile(self.distances, q)) for q in qs}


def dvoretzky_search(
    f: Flower,
    k: int,
    trials: int,
    seed: int,
    subgrid: DirectionGrid | None = None,
    include_sections: bool = False,
) -> DvoretzkyResult:
    """Search random k-subspaces for the roundest projection of the flower.

    Distances are measured on a common working grid inside the subspace, so
    projection and section values are directly comparable per trial.
    """
    if trials < 1:
        raise ParameterError("need at least one trial")
    if not 1 <= k <= f.grid.dim:
        raise ParameterError("k out of range")
    if f.petals is None:
        raise RepresentationRequiredError("dvoretzky_search needs a petal representation")
    if k >= 2:
        if subgrid is None:
            subgrid = default_subgrid(k, seed=child_seed(seed, 2 ** 20))
        kdirs = subgrid.directions
    else:
        kdirs = np.array([[1.0], [-1.0]])
    dists = np.empty(trials)
    sects = np.empty(trials) if include_sections else None
    best = (np.inf, None)
    for i in range(trials):
        e = random_subspace(f.grid.dim, k, child_seed(seed, i))
        rp = projected_radial(f, e, kdirs)
        d = float(rp.max() / rp.min())
        dists[i] = d
        if include_sections:
            rs = section_radial(f, e, kdirs)
            sects[i] = float(rs.max() / rs.min())
        if d < best[0]:
            best = (d, e)
    return DvoretzkyResult(k, trials, best[0], best[1], dists, sects)


def _rotated_petal_radial(petals: np.ndarray, rot: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    return np.maximum(dirs @ (petals @ rot.T).T, 0.0).max(axis=1)


def global_average(f: Flower, n_rotations: int, seed: int) -> float:
    """Oscillation ratio max/min of the average of N rotated radial functions.

    Rotations are drawn from a per-index derived stream, so averages over
    prefixes (N = 16 vs 256 with the same seed) share their rotations.
    """
    if n_rotations < 1:
        raise ParameterError("need at least one rotation")
    if f.petals is None:
        raise RepresentationRequiredError("global_average needs a petal representation")
    grid = f.grid
    acc = np.zeros(grid.size)
    for i in range(n_rotations):
        u = random_rotation(grid.dim, child_seed(seed, i)).matrix
        acc += _rotated_petal_radial(f.petals, u, grid.directions)
    acc /= n_rotations
    lo = acc.min()
    if lo <= 0.0:
        return float("inf")
    return float(acc.max() / lo)


def kashin_petals(n: int, seed: int, num_petals: int | None = None, grid: DirectionGrid | None = None) -> float:
    """Oscillation ratio of the average of randomly rotated unit petals in R^n.

    Defaults to 2n petals (the Kashin count); returns inf when the average
    vanishes somewhere (too few petals to surround the sphere).
    """
    if n < 2:
        raise ParameterError("need dimension n >= 2")
    m = 2 * n if num_petals is None else num_petals
    if m < 1:
        raise ParameterError("need at least one petal")
    if grid is None:
        grid = uniform_angle_grid(720) if n == 2 else sampled_sphere_grid(n, 2048, child_seed(seed, 2 ** 20), symmetric=True)
    rng = np.random.default_rng(seed)
    dirs = rng.normal(size=(m, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    acc = np.maximum(grid.directions @ dirs.T, 0.0).sum(axis=1) / m
    lo = acc.min()
    if lo <= 0.0:
        return float("inf")
    return float(acc.max() / lo)
