"""Direction grids, spherical quadrature, and seeded random rotations/subspaces.

A DirectionGrid is the discrete stand-in for the unit sphere carrying the
uniform probability measure: quadrature_mean(grid, f) approximates the
spherical average of f.  Two regimes are used throughout the package:

* dim == 2: deterministic uniform angle grids (trapezoid rule on the circle,
  exact for trigonometric polynomials of degree < N),
* dim >= 3: seeded Monte Carlo grids of normalized Gaussian directions.

All random constructors are pure functions of (parameters, seed).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, InvalidGridError, ParameterError

UNIT_NORM_TOL = 1e-12
ORTHO_TOL = 1e-10


def _read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, order="C", copy=True)
    a.flags.writeable = False
    return a


@dataclass(eq=False)
class DirectionGrid:
    """Finite set of unit directions with probability quadrature weights."""

    dim: int
    directions: np.ndarray  # (N, dim), unit rows
    weights: np.ndarray  # (N,), nonnegative, sums to 1
    uniform_n: int | None = None  # set for 2D uniform angle grids
    _gram_plus: np.ndarray | None = field(default=None, repr=False, compare=False)
    _angles: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.directions = _read_only(np.atleast_2d(self.directions))
        self.weights = _read_only(np.atleast_1d(self.weights))
        if self.dim < 2:
            raise InvalidGridError(f"grid dimension must be >= 2, got {self.dim}")
        if self.directions.shape != (len(self.weights), self.dim):
            raise InvalidGridError("directions/weights shape mismatch")
        norms = np.linalg.norm(self.directions, axis=1)
        if np.abs(norms - 1.0).max() > UNIT_NORM_TOL:
            raise InvalidGridError("directions must be unit vectors")
        if (self.weights < 0).any():
            raise InvalidGridError("weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > UNIT_NORM_TOL:
            raise InvalidGridError("weights must sum to 1")

    @property
    def size(self) -> int:
        return len(self.weights)

    def gram_plus(self) -> np.ndarray:
        """Clipped Gram matrix max(<theta_i, theta_j>, 0), cached."""
        if self._gram_plus is None:
            g = self.directions @ self.directions.T
            self._gram_plus = _read_only(np.maximum(g, 0.0))
        return self._gram_plus

    def angles(self) -> np.ndarray:
        """Angles of the 2D grid nodes in [0, 2pi), cached."""
        if self.dim != 2:
            raise InvalidGridError("angles only defined for 2D grids")
        if self._angles is None:
            a = np.arctan2(self.directions[:, 1], self.directions[:, 0])
            self._angles = _read_only(np.mod(a, 2 * np.pi))
        return self._angles

    def antipode_index(self) -> np.ndarray:
        """Index map i -> j with theta_j == -theta_i (exact pairing required)."""
        n = self.size
        if self.uniform_n is not None and n % 2 == 0:
            return (np.arange(n) + n // 2) % n
        half = n // 2
        if n % 2 == 0 and np.array_equal(self.directions[half:], -self.directions[:half]):
            return (np.arange(n) + half) % n
        raise InvalidGridError("grid has no exact antipodal pairing")


@dataclass(eq=False)
class Rotation:
    """Proper rotation of R^dim (orthogonal, det +1)."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = _read_only(np.atleast_2d(self.matrix))
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            raise ParameterError("rotation matrix must be square")
        if np.abs(m.T @ m - np.eye(m.shape[0])).max() > ORTHO_TOL:
            raise ParameterError("rotation matrix is not orthogonal")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.matrix.T


@dataclass(eq=False)
class SubspaceBasis:
    """Orthonormal frame spanning a k-dimensional subspace of R^ambient_dim."""

    ambient_dim: int
    k: int
    frame: np.ndarray  # (k, ambient_dim), orthonormal rows

    def __post_init__(self):
        self.frame = _read_only(np.atleast_2d(self.frame))
        if not 1 <= self.k <= self.ambient_dim:
            raise ParameterError(f"k={self.k} out of range for ambient dim {self.ambient_dim}")
        if self.frame.shape != (self.k, self.ambient_dim):
            raise ParameterError("frame shape mismatch")
        gram = self.frame @ self.frame.T
        if np.abs(gram - np.eye(self.k)).max() > ORTHO_TOL:
            raise ParameterError("frame is not orthonormal")

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace, as an ambient matrix."""
        return self.frame.T @ self.frame

    def to_subspace(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of the projection of x in the frame basis."""
        return np.asarray(x, dtype=float) @ self.frame.T


def uniform_angle_grid(n: int) -> DirectionGrid:
    """2D grid of n equally spaced angles with equal weights 1/n."""
    if n < 8:
        raise InvalidGridError(f"uniform angle grid needs n >= 8, got {n}")
    th = 2 * np.pi * np.arange(n) / n
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    return DirectionGrid(2, dirs, np.full(n, 1.0 / n), uniform_n=n)


def sampled_sphere_grid(dim: int, n: int, seed: int, symmetric: bool = False) -> DirectionGrid:
    """Monte Carlo grid: n normalized Gaussian directions, equal weights.

    With symmetric=True, n must be even and the grid is n/2 draws plus their
    negations, giving an exact antipodal pairing for symmetry-sensitive
    operations.
    """
    if dim < 3:
        raise InvalidGridError("sampled grids are for dim >= 3; use uniform_angle_grid in 2D")
    if n < 32:
        raise InvalidGridError(f"sampled sphere grid needs n >= 32, got {n}")
    rng = np.random.default_rng(seed)
    if symmetric:
        if n % 2:
            raise InvalidGridError("symmetric grid needs even n")
        g = rng.normal(size=(n // 2, dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        dirs = np.vstack([g, -g])
    else:
        g = rng.normal(size=(n, dim))
        dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    return DirectionGrid(dim, dirs, np.full(n, 1.0 / n))


def quadrature_mean(grid: DirectionGrid, values: np.ndarray) -> float:
    """Spherical average: sum of w_i * values_i."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.size,):
        raise GridMismatchError(f"expected {grid.size} values, got {values.shape}")
    return float(grid.weights @ values)


def random_rotation(dim: int, seed: int) -> Rotation:
    """Haar rotation: QR of a seeded Gaussian matrix, sign-fixed, det +1."""
    if dim < 2:
        raise ParameterError("rotation needs dim >= 2")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] *= -1.0
    return Rotation(q)


def random_subspace(dim: int, k: int, seed: int) -> SubspaceBasis:
    """Uniformly random k-dimensional subspace (orthonormalized Gaussians)."""
    if not 1 <= k <= dim:
        raise ParameterError(f"k={k} out of range 1..{dim}")
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(dim, k)))
    return SubspaceBasis(dim, k, q.T)


def child_seed(master: int, index: int) -> int:
    """Derived per-trial seed; stable and collision-free across trials."""
    ss = np.random.SeedSequence(entropy=master, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
