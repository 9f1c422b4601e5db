"""Constitutive models and surface force densities for the 2D test solids.

All ``first_piola`` implementations are batched: ``F`` has shape (m, 2, 2)
and the reference / current positions of the evaluation points (needed by
the polar model) have shape (m, 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvertedElement
from .fem import det2, inv2

_I2 = np.eye(2)


def _invT(F):
    return np.swapaxes(inv2(F), -1, -2)


def _rot(theta):
    """Givens rotation matrices, batched: (m, 2, 2)."""
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty(theta.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


@dataclass(frozen=True)
class CurvilinearRing:
    """Pre-stressed thick-ring model, P = (mu_e / w) F.

    The Lagrangian coordinates are curvilinear (arc length x thickness), so
    F carries the geometric stretch of the annulus map and the model is in
    equilibrium at the initial configuration.  mu_e in N/mm, w in mm.
    """

    mu_e: float
    w: float

    def first_piola(self, F, X=None, x=None):
        return (self.mu_e / self.w) * F


@dataclass(frozen=True)
class PolarNeoHookeanRing:
    """Incompressible neo-Hookean model written in polar components.

    The stress is mu_e (F_polar - F_polar^{-T}) with F_polar the polar
    deformation gradient obtained by the chain rule from the Cartesian one,
    dp/dx . F . dX/dP, where P = (R, Theta) and p = (r, theta) are the polar
    labels of the reference and current positions.  The Cartesian stress is
    recovered with Givens rotations at the current and reference angles.
    """

    mu_e: float
    center: tuple = (0.0, 0.0)

    def polar_gradient(self, F, X, x):
        cX = np.asarray(self.center)
        dX = np.asarray(X, dtype=float) - cX
        dx = np.asarray(x, dtype=float) - cX
        R = np.linalg.norm(dX, axis=-1)
        r = np.linalg.norm(dx, axis=-1)
        Theta = np.arctan2(dX[..., 1], dX[..., 0])
        theta = np.arctan2(dx[..., 1], dx[..., 0])
        A = _rot(theta)
        A = np.swapaxes(A, -1, -2)     # Rot(theta)^T
        A[..., 1, :] /= r[..., None]   # diag(1, 1/r) Rot(theta)^T
        B = _rot(Theta).copy()
        B[..., :, 1] *= R[..., None]   # Rot(Theta) diag(1, R)
        return A @ F @ B, theta, Theta

    def first_piola(self, F, X, x):
        Fp, theta, Theta = self.polar_gradient(F, X, x)
        if np.any(det2(Fp) <= 0.0):
            raise InvertedElement("polar deformation gradient not invertible")
        Pp = self.mu_e * (Fp - _invT(Fp))
        return _rot(theta) @ Pp @ np.swapaxes(_rot(Theta), -1, -2)


@dataclass(frozen=True)
class StabilizedNeoHookeanBlock:
    """Isochoric/dilational split neo-Hookean block model.

    P = mu_e J^(-2/3) (F - (I1/3) F^{-T}) + lambda(nu) log(J) F^{-T}, with
    I1 = tr(F^T F).  The 3D-form exponents (-2/3, I1/3, the "-3" in the
    energy) are kept verbatim in 2D, so the reference state F = I carries a
    residual stress (mu_e/3) I rather than zero.
    """

    mu_e: float
    nu: float

    @property
    def lam(self):
        return 2.0 * self.mu_e * (1.0 + self.nu) / (3.0 * (1.0 - 2.0 * self.nu))

    def first_piola(self, F, X=None, x=None):
        J = det2(F)
        if np.any(J <= 0.0):
            raise InvertedElement("block model needs J > 0")
        FiT = _invT(F)
        I1 = np.einsum("...ij,...ij->...", F, F)
        iso = self.mu_e * J[..., None, None] ** (-2.0 / 3.0) * (
            F - (I1[..., None, None] / 3.0) * FiT
        )
        dil = self.lam * np.log(J)[..., None, None] * FiT
        return iso + dil

    def energy_density(self, F):
        """W = (mu_e/2)(Ibar1 - 3) + (lambda/2)(log J)^2, Ibar1 = J^(-2/3) I1."""
        J = det2(F)
        I1 = np.einsum("...ij,...ij->...", F, F)
        return 0.5 * self.mu_e * (J ** (-2.0 / 3.0) * I1 - 3.0) \
            + 0.5 * self.lam * np.log(J) ** 2


def model_stress_at_quadrature(model, mesh, kin):
    """First PK stress at every volume quadrature point of the mesh."""
    from .fem import quadrature_positions

    ref = mesh.reference_data()
    Xq = ref["Xq"]
    xq = quadrature_positions(mesh)
    shape = kin.F.shape[:-2]
    P = model.first_piola(kin.F.reshape(-1, 2, 2),
                          Xq.reshape(-1, 2), xq.reshape(-1, 2))
    return P.reshape(shape + (2, 2))


# ---------------------------------------------------------------------------
# surface loads


def pressure_ramp(t, t_load, p_max):
    """Linear ramp t/t_load * P_max capped at P_max."""
    return p_max * min(t / t_load, 1.0)


def smooth_bump(x1, a, b):
    """C-infinity bump on (a, b): exp((b-a)^2 / ((2 x1 - a - b)^2 - (b-a)^2) + 1).

    Takes the value 1 at the midpoint and decays smoothly to 0 at a and b.
    """
    x1 = np.asarray(x1, dtype=float)
    out = np.zeros_like(x1)
    inside = (x1 > a) & (x1 < b)
    d2 = (b - a) ** 2
    q = (2.0 * x1[inside] - a - b) ** 2 - d2
    out[inside] = np.exp(d2 / q + 1.0)
    return out


@dataclass(frozen=True)
class TetherTop:
    """kappa (X - chi) with the e2 component removed: the top can move down."""

    kappa: float
    group: str = "top"

    def force(self, X, chi, t):
        f = self.kappa * (X - chi)
        f[:, 1] = 0.0
        return f


@dataclass(frozen=True)
class TetherBottom:
    """kappa (X - chi) with the e1 component removed: the bottom can slide."""

    kappa: float
    group: str = "bottom"

    def force(self, X, chi, t):
        f = self.kappa * (X - chi)
        f[:, 0] = 0.0
        return f


@dataclass(frozen=True)
class LoadPressureSmooth:
    """Mollified loading pressure applied as downward traction on the top."""

    p_max: float
    t_load: float
    a: float
    b: float
    x_offset: float = 0.0
    group: str = "top"

    def profile(self, x1_block, t):
        return pressure_ramp(t, self.t_load, self.p_max) * smooth_bump(
            x1_block, self.a, self.b)

    def force(self, X, chi, t):
        f = np.zeros_like(X)
        f[:, 1] = -self.profile(X[:, 0] - self.x_offset, t)
        return f


@dataclass(frozen=True)
class LoadPressureDiscontinuous:
    """Top-hat loading pressure applied as downward traction on the top."""

    p_max: float
    t_load: float
    a: float
    b: float
    x_offset: float = 0.0
    group: str = "top"

    def profile(self, x1_block, t):
        x1 = np.asarray(x1_block, dtype=float)
        inside = (x1 > self.a) & (x1 < self.b)
        return pressure_ramp(t, self.t_load, self.p_max) * inside.astype(float)

    def force(self, X, chi, t):
        f = np.zeros_like(X)
        f[:, 1] = -self.profile(X[:, 0] - self.x_offset, t)
        return f


def tether_strength(h, dt):
    """kappa = 0.1 h / dt^2, the penalty spring scale of the block test."""
    return 0.1 * h / dt ** 2
