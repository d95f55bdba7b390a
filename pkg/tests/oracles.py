"""Independent brute-force oracles for cross-checking library results.

Everything here avoids the library's own computational paths: vertex sets
come from direct constraint intersection, volumes and shadow areas from
scipy's convex hull, gradients from central differences, and support minima
from plain sphere sampling.  Keep dimensions at 6 or below — qhull becomes
unreliable past that at these point counts.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.spatial import ConvexHull


def hull_volume(points: np.ndarray) -> float:
    """Volume of the convex hull of a point cloud (d >= 2)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[1] == 1:
        return float(pts.max() - pts.min())
    return float(ConvexHull(pts).volume)


def hull_surface_area(points: np.ndarray) -> float:
    """Surface area ((d-1)-measure of the boundary) of the hull."""
    return float(ConvexHull(np.asarray(points, dtype=float)).area)


def intersection_vertices(directions: np.ndarray, offsets: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vertices of ``{x : |<u_i, x>| <= t_i}`` by brute-force subsystem solves.

    Every n-subset of rows with every sign pattern is solved; solutions
    feasible for all constraints are kept and deduplicated.
    """
    u = np.asarray(directions, dtype=float)
    t = np.asarray(offsets, dtype=float)
    m, n = u.shape
    found: list[np.ndarray] = []
    for rows in itertools.combinations(range(m), n):
        sub = u[list(rows)]
        if abs(np.linalg.det(sub)) <= 1e-12:
            continue
        for signs in itertools.product((-1.0, 1.0), repeat=n):
            rhs = np.array(signs) * t[list(rows)]
            x = np.linalg.solve(sub, rhs)
            if np.all(np.abs(u @ x) <= t + tol):
                found.append(x)
    pts = np.array(found)
    # dedup within tolerance
    keep: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= 1e-8 for q in keep):
            keep.append(p)
    return np.array(keep)


def body_volume_oracle(directions: np.ndarray, offsets: np.ndarray) -> float:
    """Full-dimensional volume via intersection vertices + qhull."""
    return hull_volume(intersection_vertices(directions, offsets))


def complement_chart(theta: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the hyperplane orthogonal to theta."""
    v = np.asarray(theta, dtype=float)
    v = v / np.linalg.norm(v)
    _, _, vt = np.linalg.svd(v[None, :])
    return vt[1:].T


def shadow_area_oracle(vertices: np.ndarray, theta: np.ndarray) -> float:
    """(n-1)-volume of the projection of a vertex cloud onto theta's hyperplane."""
    chart = complement_chart(theta)
    projected = np.asarray(vertices, dtype=float) @ chart
    if projected.shape[1] == 1:
        return float(projected.max() - projected.min())
    return hull_volume(projected)


def zonotope_vertex_cloud(generators: np.ndarray) -> np.ndarray:
    """All sign combinations of the generators (2^m points, m <= 14)."""
    g = np.asarray(generators, dtype=float)
    m = len(g)
    if m > 14:
        raise ValueError("vertex cloud oracle capped at 14 generators")
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=m)))
    return signs @ g


def zonotope_volume_oracle(generators: np.ndarray) -> float:
    """Zonotope volume via the hull of its sign-pattern point cloud."""
    return hull_volume(zonotope_vertex_cloud(generators))


def monte_carlo_volume(
    directions: np.ndarray,
    offsets: np.ndarray,
    gen: np.random.Generator,
    samples: int = 200_000,
) -> tuple[float, float]:
    """(estimate, standard error) of the body volume by box sampling."""
    verts = intersection_vertices(directions, offsets)
    lo = verts.min(axis=0)
    hi = verts.max(axis=0)
    box = float(np.prod(hi - lo))
    pts = gen.uniform(lo, hi, size=(samples, len(lo)))
    inside = np.all(np.abs(pts @ np.asarray(directions, dtype=float).T) <= offsets + 1e-12, axis=1)
    p = float(np.mean(inside))
    err = box * math.sqrt(max(p * (1.0 - p), 1e-12) / samples)
    return box * p, err


def fd_gradient(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        step = np.zeros_like(x)
        step[i] = h
        g[i] = (f(x + step) - f(x - step)) / (2.0 * h)
    return g


def support_minimum_sampled(generators: np.ndarray, gen: np.random.Generator, samples: int = 200_000) -> float:
    """Plain sampled minimum of the zonotope support function on the sphere."""
    g = np.asarray(generators, dtype=float)
    n = g.shape[1]
    thetas = gen.standard_normal((samples, n))
    thetas /= np.linalg.norm(thetas, axis=1)[:, None]
    return float(np.min(np.sum(np.abs(thetas @ g.T), axis=1)))
