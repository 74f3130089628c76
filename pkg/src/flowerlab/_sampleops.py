"""Sample-level support/radial operators shared by the body calculus.

Everything below works on plain positive sample vectors over a DirectionGrid.
The two workhorses form a Galois pair:

* support_of_cloud (C):  C(w)_j = max_i w_i <theta_i, theta_j>_+
  is the support function of the point cloud {w_i theta_i} (plus the origin),
  sampled on the grid.  Its image is exactly the set of support vectors the
  discrete engine can certify.

* radial_of_halfspaces (D):  D(g)_j = min over i with <theta_i,theta_j> > 0
  of g_i / <theta_i, theta_j>, the radial function of the intersection of the
  half-spaces {x : <x, theta_i> <= g_i}.  Identically D(g) = 1 / C(1/g).

C(w) <= g holds iff w <= D(g), hence C(D(C(w))) == C(w) exactly: outputs of C
pass the support-consistency certificate at float precision.

hull_radial is the inner companion: radial samples of conv(cloud), used by the
power-map iteration.  For 2D grids it runs a vectorized convexity peel with a
qhull fallback; sample points of an already-convex cloud pass through
unchanged, which keeps fixed-point families (regime polygons) exact.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from .errors import UnboundedBodyError
from .spherecore import DirectionGrid

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap

# radial floor for bodies that touch the origin (segments, petals); keeps
# reciprocals finite while staying far below every certificate tolerance
EPS_FLOOR = 1e-9

_PEEL_PASS_CAP = 60


def support_of_cloud(grid: DirectionGrid, w: np.ndarray) -> np.ndarray:
    """C(w): support samples of conv({w_i theta_i} + {0})."""
    gp = grid.gram_plus()
    return (np.asarray(w, dtype=float)[:, None] * gp).max(axis=0)


def radial_of_halfspaces(grid: DirectionGrid, g: np.ndarray) -> np.ndarray:
    """D(g): radial samples of the half-space intersection of the bounds g."""
    g = np.asarray(g, dtype=float)
    c = support_of_cloud(grid, 1.0 / g)
    if (c <= 0).any():
        raise UnboundedBodyError("some direction sees no constraint")
    return 1.0 / c


def closure(grid: DirectionGrid, g: np.ndarray) -> np.ndarray:
    """C(D(g)): the largest certified support vector below g."""
    return support_of_cloud(grid, radial_of_halfspaces(grid, g))


def certificate_violation(grid: DirectionGrid, g: np.ndarray) -> float:
    """Max gap g - C(D(g)); zero (to float noise) iff g is support-consistent."""
    return float(np.abs(np.asarray(g, dtype=float) - closure(grid, g)).max())


def is_convex_position(pts: np.ndarray) -> bool:
    """True if the angularly sorted cloud is in convex position (all left turns)."""
    a = np.roll(pts, 1, axis=0)
    b = np.roll(pts, -1, axis=0)
    cross = (pts[:, 0] - a[:, 0]) * (b[:, 1] - pts[:, 1]) - (pts[:, 1] - a[:, 1]) * (b[:, 0] - pts[:, 0])
    return bool((cross >= 0.0).all())


def _hull_radial_qhull(dirs: np.ndarray, pts: np.ndarray) -> np.ndarray:
    hull = ConvexHull(pts)
    a, b = hull.equations[:, :-1], hull.equations[:, -1]
    ad = a @ dirs.T
    with np.errstate(divide="ignore"):
        tt = np.where(ad > 1e-15, -b[:, None] / ad, np.inf)
    return tt.min(axis=0)


def _hull_radial_peel(grid: DirectionGrid, w: np.ndarray, pts: np.ndarray) -> np.ndarray | None:
    """Vectorized multi-stride peeling for angularly sorted 2D clouds.

    A point lying inside conv{0, p_{i-s}, p_{i+s}} for any stride s is never a
    hull vertex (the stride test is valid whenever the bracketing pair spans
    less than pi, which cross(a, b) > 0 certifies).  Testing doubling strides
    each pass removes deep pockets in logarithmically many passes.  Returns
    None if the peel does not settle within the pass cap.
    """
    n = len(w)
    keep = np.arange(n)
    p = pts
    for _ in range(_PEEL_PASS_CAP):
        m = len(p)
        if m < 3:
            return None
        idx = np.arange(m)
        bad = np.zeros(m, dtype=bool)
        s = 1
        while True:
            a = p[(idx - s) % m]
            b = p[(idx + s) % m]
            span_ok = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0] > 0.0
            turn = (p[:, 0] - a[:, 0]) * (b[:, 1] - p[:, 1]) - (p[:, 1] - a[:, 1]) * (b[:, 0] - p[:, 0])
            bad |= span_ok & (turn < 0.0)
            if s >= m // 4:
                break
            s *= 2
        if not bad.any():
            break
        mask = ~bad
        keep = keep[mask]
        p = p[mask]
    else:
        return None
    # radial along every grid ray by intersecting with the bracketing hull edge
    m = len(keep)
    edge = (np.searchsorted(keep, np.arange(n), side="right") - 1) % m
    pa = p[edge]
    pb = p[(edge + 1) % m]
    d = grid.directions
    denom = d[:, 0] * (pb[:, 1] - pa[:, 1]) - d[:, 1] * (pb[:, 0] - pa[:, 0])
    num = pa[:, 0] * pb[:, 1] - pa[:, 1] * pb[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(np.abs(denom) > 1e-300, num / denom, np.hypot(pa[:, 0], pa[:, 1]))
    return r


@njit(cache=True)
def _graham_radial(px, py, dx, dy):  # pragma: no cover - exercised via hull_radial
    """Graham scan around the interior origin for angularly sorted points,
    then the hull radial along each ray by edge intersection.

    Points are indexed by the grid nodes in increasing angle; the scan starts
    from the farthest point, which is always a hull vertex.
    """
    n = px.shape[0]
    s0 = 0
    best = px[0] * px[0] + py[0] * py[0]
    for i in range(1, n):
        q = px[i] * px[i] + py[i] * py[i]
        if q > best:
            best = q
            s0 = i
    stack = np.empty(n + 1, np.int64)
    top = -1
    for k in range(n + 1):
        i = (s0 + k) % n
        while top >= 1:
            a = stack[top - 1]
            b = stack[top]
            crx = (px[b] - px[a]) * (py[i] - py[a]) - (py[b] - py[a]) * (px[i] - px[a])
            if crx <= 0.0:
                top -= 1
            else:
                break
        top += 1
        stack[top] = i
    m = top  # stack[m] duplicates stack[0] == s0
    r = np.empty(n)
    for j in range(m):
        a = stack[j]
        b = stack[j + 1]
        ax, ay = px[a], py[a]
        bx, by = px[b], py[b]
        ex, ey = bx - ax, by - ay
        num = ax * by - ay * bx
        span = b - a if b > a else b - a + n
        for step in range(span + 1):
            i = a + step
            if i >= n:
                i -= n
            den = dx[i] * ey - dy[i] * ex
            if den != 0.0:
                r[i] = num / den
            else:
                r[i] = np.hypot(ax, ay)
    return r


def hull_radial(grid: DirectionGrid, w: np.ndarray) -> np.ndarray:
    """Radial samples of conv({w_i theta_i}) along the grid rays.

    Exact pass-through for convex-position clouds.  The hull contains every
    cloud point, so the result never dips below w.
    """
    w = np.asarray(w, dtype=float)
    pts = w[:, None] * grid.directions
    if grid.dim == 2 and grid.uniform_n is not None:
        if is_convex_position(pts):
            return w
        if _HAVE_NUMBA:
            d = grid.directions
            r = _graham_radial(
                np.ascontiguousarray(pts[:, 0]),
                np.ascontiguousarray(pts[:, 1]),
                np.ascontiguousarray(d[:, 0]),
                np.ascontiguousarray(d[:, 1]),
            )
        else:
            r = _hull_radial_peel(grid, w, pts)
            if r is None:
                r = _hull_radial_qhull(grid.directions, pts)
    else:
        r = _hull_radial_qhull(grid.directions, pts)
    return np.maximum(r, w)
