"""Q1 quadrilateral finite elements on the Lagrangian parameter domain.

The mesh lives in reference (or curvilinear parameter) coordinates ``X``;
the motion is carried by the nodal current positions ``chi``.  Reference
geometry quantities (shape gradients, quadrature weights, mass and stiffness
matrices) depend only on the mesh and are cached; everything driven by
``chi`` (deformation gradients, internal forces) is recomputed per call,
vectorized over elements.

Local node order is counterclockwise: (-1,-1), (1,-1), (1,1), (-1,1).
Local edge ``e`` joins local nodes ``e`` and ``(e+1) % 4``; for
counterclockwise elements the outward edge normal is the tangent rotated by
-90 degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DegenerateElement, InvertedElement, SolverDiverged

_CORNERS = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])

# 1D Gauss-Legendre nodes/weights on [-1, 1]
_GAUSS_1D = {
    2: (np.array([-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)]), np.array([1.0, 1.0])),
    3: (
        np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)]),
        np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]),
    ),
}


def shape_values(local):
    """Q1 shape functions at points ``local`` of shape (m, 2) -> (m, 4)."""
    local = np.atleast_2d(local)
    xi, eta = local[:, 0:1], local[:, 1:2]
    return 0.25 * (1.0 + _CORNERS[:, 0] * xi) * (1.0 + _CORNERS[:, 1] * eta)

def shape_gradients(local):
    """Gradients w.r.t. local coords: (m, 4, 2)."""
    local = np.atleast_2d(local)
    m = local.shape[0]
    out = np.empty((m, 4, 2))
    for a in range(4):
        xa, ea = _CORNERS[a]
        out[:, a, 0] = 0.25 * xa * (1.0 + ea * local[:, 1])
        out[:, a, 1] = 0.25 * ea * (1.0 + xa * local[:, 0])
    return out


def gauss_points(order):
    """Tensor-product Gauss rule: (points (nq, 2), weights (nq,))."""
    x, w = _GAUSS_1D[order]
    P, Q = np.meshgrid(x, x, indexing="ij")
    WX, WY = np.meshgrid(w, w, indexing="ij")
    pts = np.column_stack([P.ravel(), Q.ravel()])
    return pts, (WX * WY).ravel()


def det2(a):
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def inv2(a):
    d = det2(a)
    out = np.empty_like(a)
    out[..., 0, 0] = a[..., 1, 1]
    out[..., 0, 1] = -a[..., 0, 1]
    out[..., 1, 0] = -a[..., 1, 0]
    out[..., 1, 1] = a[..., 0, 0]
    return out / d[..., None, None]


@dataclass
class SolidMesh:
    """Q1 quadrilateral mesh: reference nodes, connectivity, current positions.

    ``boundary_groups`` maps a side name (e.g. "inner", "top") to an integer
    array of (element, local_edge) pairs.  Periodic meshes identify seam
    nodes once at build time, so connectivity simply wraps.
    """

    nodes: np.ndarray
    elements: np.ndarray
    chi: np.ndarray
    quad_order: int = 2
    boundary_groups: dict = field(default_factory=dict)
    periodic: tuple = (False, False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.elements = np.asarray(self.elements, dtype=np.int64)
        self.chi = np.asarray(self.chi, dtype=float)
        if not np.all(np.isfinite(self.chi)):
            raise ValueError("current positions must be finite")
        self._ref = None
        self._mass_lu = None
        self._mass = None

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_elements(self):
        return self.elements.shape[0]

    def with_chi(self, chi):
        m = SolidMesh(self.nodes, self.elements, chi, self.quad_order,
                      self.boundary_groups, self.periodic)
        # reference caches are chi-independent, share them
        m._ref = self.reference_data()
        m._mass = self._mass
        m._mass_lu = self._mass_lu
        return m

    # ------------------------------------------------------------------
    # reference-configuration cache
    def reference_data(self):
        """Per-quadrature-point reference geometry, cached.

        Returns a dict with: local quadrature points/weights, shape values
        ``N`` (nq, 4), physical shape gradients ``gradN`` (ne, nq, 4, 2),
        quadrature weights ``w`` (ne, nq) including the parameter-to-reference
        Jacobian, inverse reference Jacobians (ne, nq, 2, 2), and reference
        positions of the quadrature points (ne, nq, 2).
        """
        if self._ref is not None:
            return self._ref
        pts, wts = gauss_points(self.quad_order)
        N = shape_values(pts)                       # (nq, 4)
        dN = shape_gradients(pts)                   # (nq, 4, 2)
        Xe = self.nodes[self.elements]              # (ne, 4, 2)
        # dX/dxi at each qp: (ne, nq, 2, 2)
        dXdxi = np.einsum("eai,qaj->eqij", Xe, dN)
        detp = det2(dXdxi)
        if np.any(detp <= 0.0):
            raise DegenerateElement("non-positive parameter-map Jacobian")
        inv_dXdxi = inv2(dXdxi)
        gradN = np.einsum("qaj,eqji->eqai", dN, inv_dXdxi)
        w = wts[None, :] * detp
        Xq = np.einsum("qa,eai->eqi", N, Xe)
        self._ref = {
            "pts": pts, "wts": wts, "N": N, "dN": dN,
            "gradN": gradN, "w": w, "inv_dXdxi": inv_dXdxi, "Xq": Xq,
        }
        return self._ref

    # ------------------------------------------------------------------
    def boundary_edges(self, groups=None):
        """Flattened (element, local_edge, node0, node1) rows for the groups."""
        names = groups if groups is not None else sorted(self.boundary_groups)
        rows = []
        for name in names:
            for e, le in self.boundary_groups[name]:
                n0 = self.elements[e, le]
                n1 = self.elements[e, (le + 1) % 4]
                rows.append((e, le, n0, n1))
        return np.array(rows, dtype=np.int64).reshape(-1, 4)

    def boundary_node_ids(self, groups=None):
        edges = self.boundary_edges(groups)
        return np.unique(edges[:, 2:4])


@dataclass
class Kinematics:
    """Deformation gradient data at evaluation points.

    ``F`` has shape (..., 2, 2); ``J = det F`` is positive (the producing
    call raises :class:`InvertedElement` otherwise); ``Finv_T`` is the
    explicit 2x2 inverse transpose.
    """

    F: np.ndarray
    J: np.ndarray
    Finv_T: np.ndarray


def _kinematics_from_F(F, where="element"):
    J = det2(F)
    if np.any(J <= 0.0):
        raise InvertedElement(f"J <= 0 at {where} (min J = {J.min():.3e})")
    Finv_T = np.swapaxes(inv2(F), -1, -2)
    return Kinematics(F=F, J=J, Finv_T=Finv_T)


def deformation_gradient(mesh: SolidMesh, element: int, local_coords) -> Kinematics:
    """F = (dchi/dxi)(dX/dxi)^-1 at the given local coordinates of one element.

    Raises :class:`DegenerateElement` if the parameter map is non-positive
    and :class:`InvertedElement` if J <= 0.
    """
    local = np.atleast_2d(np.asarray(local_coords, dtype=float))
    dN = shape_gradients(local)                       # (m, 4, 2)
    Xe = mesh.nodes[mesh.elements[element]]           # (4, 2)
    Ce = mesh.chi[mesh.elements[element]]
    dXdxi = np.einsum("ai,qaj->qij", Xe, dN)
    detp = det2(dXdxi)
    if np.any(detp <= 0.0):
        raise DegenerateElement(f"element {element}: parameter Jacobian <= 0")
    F = np.einsum("ai,qaj->qij", Ce, dN) @ inv2(dXdxi)
    return _kinematics_from_F(F, where=f"element {element}")


def element_kinematics(mesh: SolidMesh) -> Kinematics:
    """Kinematics at every volume quadrature point, (ne, nq, 2, 2) layout."""
    ref = mesh.reference_data()
    Ce = mesh.chi[mesh.elements]
    dchidxi = np.einsum("eai,qaj->eqij", Ce, ref["dN"])
    F = dchidxi @ ref["inv_dXdxi"]
    return _kinematics_from_F(F, where="volume quadrature point")


def quadrature_positions(mesh: SolidMesh):
    """Current positions of the volume quadrature points, (ne, nq, 2)."""
    ref = mesh.reference_data()
    Ce = mesh.chi[mesh.elements]
    return np.einsum("qa,eai->eqi", ref["N"], Ce)


# ---------------------------------------------------------------------------
# matrices


def mass_matrix(mesh: SolidMesh, lumped=False) -> sp.csr_matrix:
    """Consistent (or lumped) Q1 mass matrix over the reference domain."""
    ref = mesh.reference_data()
    N, w = ref["N"], ref["w"]
    Me = np.einsum("qa,qb,eq->eab", N, N, w)
    if lumped:
        Me = np.einsum("eab->ea", Me)
        rows = mesh.elements.ravel()
        M = sp.coo_matrix((Me.ravel(), (rows, rows)),
                          shape=(mesh.n_nodes, mesh.n_nodes))
        return M.tocsr()
    rows = np.repeat(mesh.elements, 4, axis=1).ravel()
    cols = np.tile(mesh.elements, (1, 4)).ravel()
    M = sp.coo_matrix((Me.ravel(), (rows, cols)),
                      shape=(mesh.n_nodes, mesh.n_nodes))
    return M.tocsr()


def stiffness_matrix(mesh: SolidMesh) -> sp.csr_matrix:
    """Q1 stiffness (grad-grad) matrix in reference coordinates."""
    ref = mesh.reference_data()
    g, w = ref["gradN"], ref["w"]
    Ke = np.einsum("eqai,eqbi,eq->eab", g, g, w)
    rows = np.repeat(mesh.elements, 4, axis=1).ravel()
    cols = np.tile(mesh.elements, (1, 4)).ravel()
    K = sp.coo_matrix((Ke.ravel(), (rows, cols)),
                      shape=(mesh.n_nodes, mesh.n_nodes))
    return K.tocsr()


def _mass_solve(mesh: SolidMesh, rhs):
    """Solve the consistent-mass system to relative residual 1e-12."""
    if mesh._mass is None:
        mesh._mass = mass_matrix(mesh)
        mesh._mass_lu = spla.splu(mesh._mass.tocsc())
    out = np.empty_like(rhs)
    for k in range(rhs.shape[1] if rhs.ndim == 2 else 1):
        b = rhs[:, k] if rhs.ndim == 2 else rhs
        x = mesh._mass_lu.solve(b)
        nb = np.linalg.norm(b)
        if nb > 0.0:
            res = np.linalg.norm(mesh._mass * x - b) / nb
            if res > 1e-12:
                raise SolverDiverged("mass solve", residual=res)
        if rhs.ndim == 2:
            out[:, k] = x
        else:
            out = x
    return out


def project_to_nodes(mesh: SolidMesh, point_values) -> np.ndarray:
    """L2-project values sampled at the volume quadrature points onto Q1 nodes.

    ``point_values`` has shape (ne, nq) or (ne, nq, d).
    """
    ref = mesh.reference_data()
    N, w = ref["N"], ref["w"]
    vals = np.asarray(point_values, dtype=float)
    scalar = vals.ndim == 2
    if scalar:
        vals = vals[..., None]
    rhs = np.zeros((mesh.n_nodes, vals.shape[-1]))
    contrib = np.einsum("qa,eqd,eq->ead", N, vals, w)
    np.add.at(rhs, mesh.elements.ravel(),
              contrib.reshape(-1, vals.shape[-1]))
    out = _mass_solve(mesh, rhs)
    return out[:, 0] if scalar else out


def sample_nodal_at_quadrature(mesh: SolidMesh, nodal):
    """Evaluate a nodal field at the volume quadrature points, (ne, nq[, d])."""
    ref = mesh.reference_data()
    nodal = np.asarray(nodal, dtype=float)
    Ve = nodal[mesh.elements]
    if nodal.ndim == 1:
        return np.einsum("qa,ea->eq", ref["N"], Ve)
    return np.einsum("qa,ead->eqd", ref["N"], Ve)


# ---------------------------------------------------------------------------
# force assembly


def _edge_quadrature(mesh, edges):
    """1D 2-point Gauss data for boundary edges.

    Returns reference positions Xq (ne, 2, 2), current positions xq,
    shape weights for the two edge nodes (2, 2), reference arc weights
    wq (ne, 2), and outward unit normals per edge (ne, 2).
    """
    s, w1 = _GAUSS_1D[2]
    X0 = mesh.nodes[edges[:, 2]]
    X1 = mesh.nodes[edges[:, 3]]
    c0 = mesh.chi[edges[:, 2]]
    c1 = mesh.chi[edges[:, 3]]
    N0 = 0.5 * (1.0 - s)
    N1 = 0.5 * (1.0 + s)
    Xq = X0[:, None, :] * N0[None, :, None] + X1[:, None, :] * N1[None, :, None]
    xq = c0[:, None, :] * N0[None, :, None] + c1[:, None, :] * N1[None, :, None]
    t = X1 - X0
    length = np.linalg.norm(t, axis=1)
    n = np.column_stack([t[:, 1], -t[:, 0]]) / length[:, None]
    wq = 0.5 * length[:, None] * w1[None, :]
    return Xq, xq, np.column_stack([N0, N1]), wq, n


def surface_load_rhs(mesh: SolidMesh, load, t: float) -> np.ndarray:
    """Weak-form contribution of one surface load: rhs_a = sum N_a f w."""
    edges = mesh.boundary_edges([load.group])
    rhs = np.zeros((mesh.n_nodes, 2))
    if edges.shape[0] == 0:
        return rhs
    Xq, xq, Nq, wq, _ = _edge_quadrature(mesh, edges)
    f = load.force(Xq.reshape(-1, 2), xq.reshape(-1, 2), t).reshape(Xq.shape)
    for a, col in ((0, 2), (1, 3)):
        contrib = np.einsum("q,eqd,eq->ed", Nq[:, a], f, wq)
        np.add.at(rhs, edges[:, col], contrib)
    return rhs


def internal_force_density(mesh: SolidMesh, stress_qp, loads=(), t=0.0) -> np.ndarray:
    """Unified weak-form force density G: solve M G = -int P : grad V + loads.

    ``stress_qp`` is the first Piola-Kirchhoff stress at the volume
    quadrature points, shape (ne, nq, 2, 2).  The single volumetric term is
    variationally equivalent to the volumetric-plus-surface Lagrangian force
    split, which is the point of projecting onto the Q1 space.
    """
    ref = mesh.reference_data()
    g, w = ref["gradN"], ref["w"]
    contrib = -np.einsum("eqij,eqaj,eq->eai", stress_qp, g, w)
    rhs = np.zeros((mesh.n_nodes, 2))
    np.add.at(rhs, mesh.elements.ravel(), contrib.reshape(-1, 2))
    for load in loads:
        rhs += surface_load_rhs(mesh, load, t)
    return _mass_solve(mesh, rhs)
