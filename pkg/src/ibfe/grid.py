"""Uniform staggered (MAC) grid containers and discrete vector-calculus operators.

Layout for ``cells = (nx, ny)`` on ``[lx0, lx1] x [ly0, ly1]`` with square
spacing ``h`` (arrays are indexed ``[i, j]`` with ``i`` along x)::

    pressure / scalars   p[i, j]    at (lx0 + (i+0.5)h, ly0 + (j+0.5)h)   (nx, ny)
    x velocity           ux[i, j]   at (lx0 + i h,      ly0 + (j+0.5)h)   (nx+1, ny)
    y velocity           uy[i, j]   at (lx0 + (i+0.5)h, ly0 + j h)        (nx, ny+1)

On this layout the divergence (faces -> cells) and the interior gradient
(cells -> faces) are exact negative adjoints under the h^2-weighted inner
products, provided the wall-normal velocity components vanish.  That identity
is what makes the pressure projection exact, so it is covered by tests.

Operators here are pure stencils.  Boundary-closed variants (wall ghosts,
traction ghosts) live in :mod:`ibfe.fluid`, which assembles them as sparse
matrices for its own time stepping; ``face_laplacian`` exposes the simple
homogeneous-Dirichlet closure used by the operator-level tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a uniform square-cell MAC grid.

    Lengths are in mm.  ``upper > lower`` componentwise, the spacing must be
    identical along both axes to 1e-12 relative, and each axis needs at least
    4 cells.
    """

    lower: tuple[float, float]
    upper: tuple[float, float]
    cells: tuple[int, int]

    def __post_init__(self):
        lx, ly = self.upper[0] - self.lower[0], self.upper[1] - self.lower[1]
        if lx <= 0 or ly <= 0:
            raise ValueError("grid upper corner must exceed lower corner")
        nx, ny = self.cells
        if nx < 4 or ny < 4:
            raise ValueError("grid needs at least 4 cells per axis")
        hx, hy = lx / nx, ly / ny
        if abs(hx - hy) > 1e-12 * max(abs(hx), abs(hy)):
            raise ValueError(f"cells must be square: hx={hx!r} hy={hy!r}")

    @property
    def nx(self) -> int:
        return self.cells[0]

    @property
    def ny(self) -> int:
        return self.cells[1]

    @property
    def h(self) -> float:
        return (self.upper[0] - self.lower[0]) / self.cells[0]

    # coordinate helpers -------------------------------------------------
    def x_centers(self):
        return self.lower[0] + (np.arange(self.nx) + 0.5) * self.h

    def y_centers(self):
        return self.lower[1] + (np.arange(self.ny) + 0.5) * self.h

    def cell_center_mesh(self):
        return np.meshgrid(self.x_centers(), self.y_centers(), indexing="ij")

    def xface_mesh(self):
        x = self.lower[0] + np.arange(self.nx + 1) * self.h
        return np.meshgrid(x, self.y_centers(), indexing="ij")

    def yface_mesh(self):
        y = self.lower[1] + np.arange(self.ny + 1) * self.h
        return np.meshgrid(self.x_centers(), y, indexing="ij")


def _check_values(name, arr, shape):
    arr = np.asarray(arr, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


@dataclass
class CellScalarField:
    """Scalar samples at cell centers (pressure-like or dimensionless)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = _check_values("cell values", self.values, self.grid.cells)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.cells))

    @classmethod
    def from_function(cls, grid, f):
        X, Y = grid.cell_center_mesh()
        return cls(grid, f(X, Y))

    def copy(self):
        return CellScalarField(self.grid, self.values.copy())


@dataclass
class FaceVectorField:
    """Vector samples on faces: x component on x faces, y component on y faces."""

    grid: GridSpec
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        nx, ny = self.grid.cells
        self.x = _check_values("x-face values", self.x, (nx + 1, ny))
        self.y = _check_values("y-face values", self.y, (nx, ny + 1))

    @classmethod
    def zeros(cls, grid):
        nx, ny = grid.cells
        return cls(grid, np.zeros((nx + 1, ny)), np.zeros((nx, ny + 1)))

    @classmethod
    def from_functions(cls, grid, fx, fy):
        XU, YU = grid.xface_mesh()
        XV, YV = grid.yface_mesh()
        return cls(grid, fx(XU, YU), fy(XV, YV))

    def copy(self):
        return FaceVectorField(self.grid, self.x.copy(), self.y.copy())

    def max_abs(self) -> float:
        return max(np.abs(self.x).max(), np.abs(self.y).max())


# ---------------------------------------------------------------------------
# operators


def divergence(u: FaceVectorField) -> CellScalarField:
    """Two-point face difference per cell; exact for linear fields."""
    h = u.grid.h
    div = (u.x[1:, :] - u.x[:-1, :]) / h + (u.y[:, 1:] - u.y[:, :-1]) / h
    return CellScalarField(u.grid, div)


def gradient(p: CellScalarField) -> FaceVectorField:
    """Cell-difference gradient on interior faces; boundary faces are zero.

    Boundary faces follow the active boundary-condition convention of the
    fluid solver, which assembles its own closed operator; the pure stencil
    here is the one entering the adjointness identity with ``divergence``.
    """
    g = FaceVectorField.zeros(p.grid)
    h = p.grid.h
    g.x[1:-1, :] = (p.values[1:, :] - p.values[:-1, :]) / h
    g.y[:, 1:-1] = (p.values[:, 1:] - p.values[:, :-1]) / h
    return g


def _component_laplacian(vals, h):
    """5-point Laplacian of one velocity component at its own face positions.

    Along axis 0 the component is wall-normal: the first/last planes lie on
    the wall and are treated as known boundary values (rows returned zero).
    Along axis 1 the component is wall-tangential: ghosts use the linear
    reflection ghost = -interior for a zero wall value.
    """
    lap = np.zeros_like(vals)
    c = vals[1:-1, :]
    lap_in = vals[2:, :] + vals[:-2, :] - 2.0 * c
    tan = np.empty((vals.shape[0] - 2, vals.shape[1] + 2))
    tan[:, 1:-1] = c
    tan[:, 0] = -c[:, 0]
    tan[:, -1] = -c[:, -1]
    lap_in = lap_in + tan[:, 2:] + tan[:, :-2] - 2.0 * c
    lap[1:-1, :] = lap_in / (h * h)
    return lap


def face_laplacian(u: FaceVectorField) -> FaceVectorField:
    """5-point Laplacian per component with homogeneous Dirichlet wall closure.

    Wall-normal faces (which lie on the boundary) are returned as zero; the
    fluid solver treats them as constrained values, not unknowns.
    """
    h = u.grid.h
    lx = _component_laplacian(u.x, h)
    ly = _component_laplacian(u.y.T, h).T
    return FaceVectorField(u.grid, lx, ly)


def face_laplacian_interior(u: FaceVectorField) -> FaceVectorField:
    """Pure 5-point stencil; entries without a complete stencil are zero."""
    h = u.grid.h
    out = FaceVectorField.zeros(u.grid)
    out.x[1:-1, 1:-1] = (
        u.x[2:, 1:-1] + u.x[:-2, 1:-1] + u.x[1:-1, 2:] + u.x[1:-1, :-2]
        - 4.0 * u.x[1:-1, 1:-1]
    ) / (h * h)
    out.y[1:-1, 1:-1] = (
        u.y[2:, 1:-1] + u.y[:-2, 1:-1] + u.y[1:-1, 2:] + u.y[1:-1, :-2]
        - 4.0 * u.y[1:-1, 1:-1]
    ) / (h * h)
    return out


def mean_zero_normalize(p: CellScalarField) -> CellScalarField:
    """Subtract the cell mean so the field averages to zero over the domain."""
    return CellScalarField(p.grid, p.values - p.values.mean())


# ---------------------------------------------------------------------------
# inner products (h^2-weighted) used by the adjointness and energy tests


def cell_inner(a: CellScalarField, b: CellScalarField) -> float:
    return float(a.grid.h ** 2 * np.sum(a.values * b.values))


def face_inner(u: FaceVectorField, v: FaceVectorField) -> float:
    h2 = u.grid.h ** 2
    return float(h2 * (np.sum(u.x * v.x) + np.sum(u.y * v.y)))
