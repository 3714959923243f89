"""Independent finite-difference eigensolver for the radial equation.

Discretizes f'' + [2 eps + alpha/r - l(l+1)/r^2 - beta r - k r^2] f = 0 with
the standard second-order central stencil on a uniform grid and Dirichlet
boundaries. Eigenvalues come from bisection on the Sturm sequence of the
symmetric tridiagonal matrix, eigenvectors from inverse iteration (LAPACK
stebz/stein via scipy). The operator eigenvalue lambda maps to eps = lambda/2.

This module never touches the Heun machinery; it exists to confirm (or
refute) quasi-exact energies and wavefunctions independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import PhysicalSystem, turning_points

DEFAULT_POINTS = 6000

# K^2 rmax^2 / 2 >= 27 puts the Gaussian tail below 1e-12.
_GAUSSIAN_TAIL_EXPONENT = 27.0


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_i = r_min + i*h with Dirichlet ends.

    Auto-sized grids put the first node at r_min = h so that the implicit
    left boundary sits exactly at r = 0 (where f = 0 for every l); this
    keeps the stencil second-order accurate.
    """

    r_min: float
    r_max: float
    points: int

    def __post_init__(self) -> None:
        if not (0 < self.r_min < self.r_max):
            raise ValueError(f"need 0 < r_min < r_max (got {self.r_min}, {self.r_max})")
        if self.points < 16:
            raise ValueError(f"points must be >= 16 (got {self.points})")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.points)

    @classmethod
    def auto(
        cls,
        sys: PhysicalSystem,
        epsilon_hint: float | None = None,
        points: int = DEFAULT_POINTS,
    ) -> "RadialGrid":
        """Turning-point-aware domain: r_max covers 1.5x the outer turning
        point and the radius where the Gaussian envelope drops below 1e-12."""
        K = sys.K
        r_gauss = (2.0 * _GAUSSIAN_TAIL_EXPONENT) ** 0.5 / K
        if epsilon_hint is None:
            epsilon_hint = K * K * (sys.l + 1.5)
        tp = turning_points(sys, epsilon_hint)
        r_outer = max((z.real for z in tp.roots if abs(z.imag) == 0.0), default=0.0)
        r_edge = max(1.5 * r_outer, r_gauss)
        h = r_edge / (points + 1)
        return cls(r_min=h, r_max=points * h, points=points)

    def refined(self) -> "RadialGrid":
        """Grid with exactly halved spacing covering the same domain."""
        h2 = self.spacing / 2.0
        if abs(self.r_min - self.spacing) < 1e-12 * self.spacing:
            # aligned grid: keep the implicit boundaries at 0 and r_max + h
            n = 2 * self.points + 1
            return RadialGrid(r_min=h2, r_max=n * h2, points=n)
        return RadialGrid(r_min=self.r_min, r_max=self.r_max, points=2 * self.points - 1)


@dataclass(frozen=True)
class EigenSolveResult:
    """Lowest eigenpairs of the discretized radial operator.

    ``vectors[i]`` samples f(r) = r R(r) on the grid nodes, L2-normalized
    (sum f^2 h = 1) with positive leading sign.
    """

    energies: np.ndarray
    vectors: np.ndarray  # shape (count, points)
    node_counts: tuple[int, ...]
    grid: RadialGrid


def fd_eigensolve(
    sys: PhysicalSystem, grid: RadialGrid, count: int
) -> EigenSolveResult:
    """Lowest ``count`` eigenvalues/eigenvectors of the radial problem on grid."""
    if count < 1:
        raise ValueError(f"count must be >= 1 (got {count})")
    if count > grid.points - 2:
        raise ValueError(f"count={count} exceeds points-2={grid.points - 2}")
    r = grid.nodes()
    h = grid.spacing
    v = -sys.alpha / r + sys.beta * r + sys.k * r * r + sys.l * (sys.l + 1) / (r * r)
    diag = 2.0 / (h * h) + v
    off = np.full(grid.points - 1, -1.0 / (h * h))
    lam, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    vec = vec.T / h**0.5  # columns to rows; sum f^2 h = 1
    for i in range(len(vec)):
        nz = np.nonzero(np.abs(vec[i]) > 1e-10 * np.max(np.abs(vec[i])))[0]
        if len(nz) and vec[i][nz[0]] < 0:
            vec[i] = -vec[i]
    nodes = tuple(node_count(f) for f in vec)
    return EigenSolveResult(
        energies=lam / 2.0, vectors=vec, node_counts=nodes, grid=grid
    )


def fd_eigenvalues_richardson(
    sys: PhysicalSystem, grid: RadialGrid, count: int
) -> np.ndarray:
    """One Richardson step: (4 E_{h/2} - E_h) / 3, cancelling the h^2 error."""
    coarse = fd_eigensolve(sys, grid, count).energies
    fine = fd_eigensolve(sys, grid.refined(), count).energies
    return (4.0 * fine - coarse) / 3.0


def match_energy(
    result: EigenSolveResult, epsilon: float, rel_tol: float
) -> tuple[int, float] | None:
    """Index and gap of the closest eigenvalue, or None if outside tolerance."""
    if len(result.energies) == 0:
        raise ValueError("empty eigensolve result")
    gaps = np.abs(result.energies - epsilon)
    i = int(np.argmin(gaps))
    gap = float(gaps[i])
    if gap <= rel_tol * max(1.0, abs(epsilon)):
        return i, gap
    return None


def node_count(vector: np.ndarray, floor: float = 1e-10) -> int:
    """Strict sign changes between consecutive interior samples with |f| > floor."""
    v = np.asarray(vector)
    scale = np.max(np.abs(v)) if len(v) else 0.0
    if scale == 0:
        return 0
    interior = v[1:-1]
    significant = interior[np.abs(interior) > floor * scale]
    signs = np.sign(significant)
    return int(np.sum(signs[1:] * signs[:-1] < 0))
