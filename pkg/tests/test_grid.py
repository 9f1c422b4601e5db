import numpy as np
import pytest

from ibfe.grid import (
    CellScalarField,
    FaceVectorField,
    GridSpec,
    cell_inner,
    divergence,
    face_inner,
    face_laplacian,
    face_laplacian_interior,
    gradient,
    mean_zero_normalize,
)


def unit_grid(n=8):
    return GridSpec((0.0, 0.0), (1.0, 1.0), (n, n))


class TestGridSpec:
    def test_square_cells_enforced(self):
        with pytest.raises(ValueError):
            GridSpec((0.0, 0.0), (1.0, 2.0), (8, 8))

    def test_minimum_cells(self):
        with pytest.raises(ValueError):
            GridSpec((0.0, 0.0), (1.0, 1.0), (2, 2))

    def test_ordering(self):
        with pytest.raises(ValueError):
            GridSpec((0.0, 0.0), (-1.0, 1.0), (8, 8))

    def test_h(self):
        g = GridSpec((0.0, 0.0), (2.0, 2.0), (16, 16))
        assert g.h == pytest.approx(0.125, abs=0)

    def test_rectangular_domain_square_cells(self):
        g = GridSpec((0.0, 0.0), (2.0, 1.0), (16, 8))
        assert g.h == pytest.approx(0.125, abs=0)


class TestDivergence:
    def test_constant_field(self):
        g = unit_grid()
        u = FaceVectorField.from_functions(g, lambda x, y: 1.0 + 0 * x, lambda x, y: 2.0 + 0 * x)
        assert np.abs(divergence(u).values).max() == 0.0

    def test_linear_divergence_free(self):
        g = unit_grid(16)
        u = FaceVectorField.from_functions(g, lambda x, y: x, lambda x, y: -y)
        assert np.abs(divergence(u).values).max() < 1e-14

    def test_quadratic_exact(self):
        # centered difference of x^2 across face midpoints is exactly 2x
        g = GridSpec((0.0, 0.0), (1.0, 1.0), (32, 32))
        u = FaceVectorField.from_functions(g, lambda x, y: x ** 2, lambda x, y: 0 * x)
        X, _ = g.cell_center_mesh()
        err = np.abs(divergence(u).values - 2 * X).max()
        assert err < 1e-12


class TestGradient:
    def test_constant(self):
        g = unit_grid()
        p = CellScalarField.from_function(g, lambda x, y: 7.0 + 0 * x)
        gr = gradient(p)
        assert gr.max_abs() == 0.0

    def test_linear_x(self):
        g = unit_grid()
        p = CellScalarField.from_function(g, lambda x, y: x)
        gr = gradient(p)
        assert np.abs(gr.x[1:-1, :] - 1.0).max() < 1e-14
        assert np.abs(gr.y).max() < 1e-14

    def test_adjointness_random(self):
        # <grad p, u>_faces = -<p, div u>_cells for u with zero normal faces
        g = unit_grid(8)
        rng = np.random.default_rng(7)
        p = CellScalarField(g, rng.standard_normal(g.cells))
        u = FaceVectorField(g, rng.standard_normal((9, 8)), rng.standard_normal((8, 9)))
        u.x[0, :] = u.x[-1, :] = 0.0
        u.y[:, 0] = u.y[:, -1] = 0.0
        lhs = face_inner(gradient(p), u)
        rhs = -cell_inner(p, divergence(u))
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


class TestFaceLaplacian:
    def test_constant_interior(self):
        g = unit_grid()
        u = FaceVectorField.from_functions(g, lambda x, y: 3.0 + 0 * x, lambda x, y: -1.0 + 0 * x)
        lap = face_laplacian_interior(u)
        assert lap.max_abs() == 0.0

    def test_quadratic(self):
        g = GridSpec((0.0, 0.0), (1.0, 1.0), (16, 16))
        u = FaceVectorField.from_functions(g, lambda x, y: x ** 2 + y ** 2, lambda x, y: 0 * x)
        lap = face_laplacian_interior(u)
        assert np.abs(lap.x[1:-1, 1:-1] - 4.0).max() < 1e-10

    def test_symmetry_dense_assembly(self):
        # assemble the closed operator densely over the active (interior-face)
        # unknowns on N=8 and check transpose; wall faces are constrained data
        g = unit_grid(8)
        nx, ny = g.cells
        cols = []
        for i in range(1, nx):
            for j in range(ny):
                u = FaceVectorField.zeros(g)
                u.x[i, j] = 1.0
                cols.append(face_laplacian(u).x[1:-1, :].ravel())
        A = np.array(cols).T
        assert np.abs(A - A.T).max() < 1e-12


class TestMeanZero:
    def test_all_fives(self):
        g = unit_grid()
        p = CellScalarField(g, np.full(g.cells, 5.0))
        assert np.abs(mean_zero_normalize(p).values).max() == 0.0

    def test_known_values(self):
        g = GridSpec((0.0, 0.0), (1.0, 1.0), (4, 4))
        vals = np.zeros((4, 4))
        vals.flat[:4] = [1.0, 2.0, 3.0, 6.0]
        out = mean_zero_normalize(CellScalarField(g, vals))
        # mean over all 16 cells is 12/16
        assert out.values.flat[0] == pytest.approx(1.0 - 0.75)
        assert out.values.flat[3] == pytest.approx(6.0 - 0.75)

    def test_spec_quartet_mean(self):
        # {1, 2, 3, 6} has mean 3 -> {-2, -1, 0, 3}
        vals = np.array([1.0, 2.0, 3.0, 6.0])
        shifted = vals - vals.mean()
        assert np.allclose(shifted, [-2.0, -1.0, 0.0, 3.0])

    def test_idempotent(self):
        g = unit_grid()
        rng = np.random.default_rng(3)
        p = CellScalarField(g, rng.standard_normal(g.cells))
        once = mean_zero_normalize(p)
        twice = mean_zero_normalize(once)
        assert np.abs(twice.values - once.values).max() < 1e-15 * np.abs(p.values).max()
        assert abs(once.values.mean()) < 1e-13 * np.abs(p.values).max()


class TestStructure:
    def test_div_grad_is_five_point_laplacian(self):
        # dense assembly on N=8: divergence(gradient(.)) == 5-point cell Laplacian
        g = unit_grid(8)
        n = g.nx * g.ny
        A = np.zeros((n, n))
        for k in range(n):
            p = CellScalarField.zeros(g)
            p.values.flat[k] = 1.0
            A[:, k] = divergence(gradient(p)).values.ravel()
        h2 = g.h ** 2
        B = np.zeros((n, n))
        nx, ny = g.cells
        for i in range(nx):
            for j in range(ny):
                k = i * ny + j
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    ii, jj = i + di, j + dj
                    if 0 <= ii < nx and 0 <= jj < ny:
                        B[k, ii * ny + jj] += 1.0 / h2
                        B[k, k] -= 1.0 / h2
        assert np.abs(A - B).max() < 1e-11

    def test_linearity(self):
        g = unit_grid(8)
        rng = np.random.default_rng(11)
        p1 = CellScalarField(g, rng.standard_normal(g.cells))
        p2 = CellScalarField(g, rng.standard_normal(g.cells))
        a, b = 2.5, -1.25
        combo = CellScalarField(g, a * p1.values + b * p2.values)
        lhs = gradient(combo)
        rhs_x = a * gradient(p1).x + b * gradient(p2).x
        assert np.abs(lhs.x - rhs_x).max() < 1e-13
