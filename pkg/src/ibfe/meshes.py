"""Structured Q1 mesh builders for the three test solids.

All builders return meshes whose parameter-to-reference maps have positive
Jacobians and whose elements are counterclockwise, so outward boundary
normals follow from rotating edge tangents by -90 degrees.
"""

from __future__ import annotations

import numpy as np

from .fem import SolidMesh


def ring_strip_mesh(R, w, center, n_s1, n_s2, quad_order=2):
    """Pre-stressed ring: parameter strip [0, 2 pi R] x [0, w], periodic in s1.

    The initial positions map the strip onto the annulus of inner radius R
    and thickness w about ``center``.  The angle is traversed clockwise so
    the deformation gradient of the map has positive determinant
    J = (R + s2)/R; the image is the same annulus either way.
    """
    if n_s1 < 3 or n_s2 < 1:
        raise ValueError("ring strip needs n_s1 >= 3, n_s2 >= 1")
    s1 = np.arange(n_s1) * (2.0 * np.pi * R / n_s1)
    s2 = np.linspace(0.0, w, n_s2 + 1)
    S1, S2 = np.meshgrid(s1, s2, indexing="ij")
    nodes = np.column_stack([S1.ravel(), S2.ravel()])

    theta = S1 / R
    cx, cy = center
    chi = np.column_stack([
        (cx + (R + S2) * np.cos(theta)).ravel(),
        (cy - (R + S2) * np.sin(theta)).ravel(),
    ])

    def nid(i, j):
        return (i % n_s1) * (n_s2 + 1) + j

    elements = []
    inner, outer = [], []
    for i in range(n_s1):
        for j in range(n_s2):
            e = len(elements)
            elements.append([nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)])
            if j == 0:
                inner.append((e, 0))
            if j == n_s2 - 1:
                outer.append((e, 2))
    return SolidMesh(
        nodes, np.array(elements), chi, quad_order,
        boundary_groups={"inner": np.array(inner), "outer": np.array(outer)},
        periodic=(True, False),
    )


def annulus_mesh(R_in, R_out, center, n_r, n_theta, quad_order=2,
                 deformed_radius=None):
    """Annulus meshed directly in Cartesian reference coordinates.

    Reference coordinates are the initial coordinates.  ``deformed_radius``
    optionally maps reference radius to current radius to build an exactly
    deformed configuration (used by oracle tests).
    """
    if n_r < 1 or n_theta < 3:
        raise ValueError("annulus needs n_r >= 1, n_theta >= 3")
    radii = np.linspace(R_in, R_out, n_r + 1)
    thetas = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    TH, RR = np.meshgrid(thetas, radii, indexing="ij")
    cx, cy = center
    nodes = np.column_stack([
        (cx + RR * np.cos(TH)).ravel(), (cy + RR * np.sin(TH)).ravel()])
    if deformed_radius is None:
        chi = nodes.copy()
    else:
        rr = deformed_radius(RR)
        chi = np.column_stack([
            (cx + rr * np.cos(TH)).ravel(), (cy + rr * np.sin(TH)).ravel()])

    def nid(m, k):
        return (m % n_theta) * (n_r + 1) + k

    elements = []
    inner, outer = [], []
    for m in range(n_theta):
        for k in range(n_r):
            e = len(elements)
            elements.append([nid(m, k), nid(m, k + 1), nid(m + 1, k + 1), nid(m + 1, k)])
            if k == 0:
                inner.append((e, 3))
            if k == n_r - 1:
                outer.append((e, 1))
    return SolidMesh(
        nodes, np.array(elements), chi, quad_order,
        boundary_groups={"inner": np.array(inner), "outer": np.array(outer)},
        periodic=(False, True),
    )


def block_mesh(origin, lengths, n1, n2, quad_order=2):
    """Axis-aligned rectangular block with side groups top/bottom/left/right."""
    x0, y0 = origin
    lx, ly = lengths
    xs = np.linspace(x0, x0 + lx, n1 + 1)
    ys = np.linspace(y0, y0 + ly, n2 + 1)
    XX, YY = np.meshgrid(xs, ys, indexing="ij")
    nodes = np.column_stack([XX.ravel(), YY.ravel()])

    def nid(i, j):
        return i * (n2 + 1) + j

    elements = []
    groups = {"bottom": [], "right": [], "top": [], "left": []}
    for i in range(n1):
        for j in range(n2):
            e = len(elements)
            elements.append([nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)])
            if j == 0:
                groups["bottom"].append((e, 0))
            if j == n2 - 1:
                groups["top"].append((e, 2))
            if i == 0:
                groups["left"].append((e, 3))
            if i == n1 - 1:
                groups["right"].append((e, 1))
    return SolidMesh(
        nodes, np.array(elements), nodes.copy(), quad_order,
        boundary_groups={k: np.array(v) for k, v in groups.items()},
    )


def ring_initial_map(R, w, center):
    """Closed-form initial motion map of the pre-stressed ring strip.

    Returns chi(s1, s2) and its analytic deformation gradient, matching the
    clockwise orientation used by :func:`ring_strip_mesh`.
    """
    cx, cy = center

    def chi(s1, s2):
        th = s1 / R
        return np.stack([cx + (R + s2) * np.cos(th),
                         cy - (R + s2) * np.sin(th)], axis=-1)

    def F(s1, s2):
        th = np.asarray(s1, dtype=float) / R
        kap = (R + np.asarray(s2, dtype=float)) / R
        out = np.empty(np.shape(th) + (2, 2))
        out[..., 0, 0] = -np.sin(th) * kap
        out[..., 0, 1] = np.cos(th)
        out[..., 1, 0] = -np.cos(th) * kap
        out[..., 1, 1] = -np.sin(th)
        return out

    return chi, F
