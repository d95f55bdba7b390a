"""Deterministic numeric kernel shared by the geometry modules.

Everything here is a pure function of its inputs.  The only object carrying
state is :class:`RandomSource`, which owns a seed and hands out freshly
seeded generators, so any computation that received the same source replays
bit-identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CapacityError",
    "RandomSource",
    "canonical_sign",
    "dedup_rows",
    "hyperplane_basis",
    "isotropy_residuals",
    "jacobi_eigh",
    "nullspace_basis",
    "psd_sqrt",
    "random_orthogonal",
    "sample_unit_sphere",
    "unit_ball_volume",
]

_UINT64_MAX = 2**64 - 1


class CapacityError(RuntimeError):
    """A desk-scale guard was exceeded (combinatorial size or iteration cap).

    When an iterative solver hits its cap, ``best`` carries the best iterate
    found so far; for combinatorial guards it stays ``None``.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class RandomSource:
    """Explicit randomness: the same (seed, algorithm) always yields the same stream."""

    seed: int
    algorithm: str = "pcg64"

    def __post_init__(self):
        if not (0 <= int(self.seed) <= _UINT64_MAX):
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.algorithm != "pcg64":
            raise ValueError(f"unsupported rng algorithm: {self.algorithm!r}")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this source's stream."""
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))

    def fork(self, key: int) -> "RandomSource":
        """Derive an independent child source.  Distinct keys give decorrelated streams."""
        state = np.random.SeedSequence(self.seed, spawn_key=(int(key),)).generate_state(1, np.uint64)
        return RandomSource(int(state[0]), self.algorithm)


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-14, max_sweeps: int = 100):
    """Symmetric eigendecomposition by cyclic Jacobi rotations.

    Returns ``(w, V)`` with ``matrix = V @ diag(w) @ V.T``, eigenvalues
    ascending.  Jacobi is slower than LAPACK but simple, unconditionally
    stable on the small dense matrices used here, and easy to keep
    bit-deterministic.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v
    for _ in range(max_sweeps):
        # sum the off-diagonal entries directly: the difference-of-squares
        # form cancels catastrophically once off ~ ||A||*sqrt(eps)
        strict = a - np.diag(np.diag(a))
        off = float(np.linalg.norm(strict))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                # smaller-magnitude root => rotation angle <= pi/4
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root: R with R @ R = matrix.

    Rejects non-symmetric or indefinite input.  Eigenvalues within round-off
    of zero are clamped to zero before the root is formed.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 1.0)
    if float(np.abs(m - m.T).max()) > 1e-10 * scale:
        raise ValueError("matrix is not symmetric")
    sym = 0.5 * (m + m.T)
    w, v = jacobi_eigh(sym)
    wscale = max(float(np.abs(w).max()), 1e-300)
    if w[0] < -1e-10 * wscale:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (root + root.T)


def sample_unit_sphere(n: int, rng: RandomSource, count: int | None = None) -> np.ndarray:
    """Uniform points on the unit sphere in R^n (Gaussian direction method).

    Returns shape ``(n,)`` for ``count is None``, else ``(count, n)``.
    """
    if n < 1:
        raise ValueError("sphere dimension must be at least 1")
    gen = rng.generator()
    k = 1 if count is None else int(count)
    if k < 1:
        raise ValueError("count must be positive")
    out = np.empty((k, n))
    need = np.arange(k)
    while len(need):
        g = gen.standard_normal((len(need), n))
        norms = np.linalg.norm(g, axis=1)
        ok = norms > 1e-12
        out[need[ok]] = g[ok] / norms[ok, None]
        need = need[~ok]
    return out[0] if count is None else out


def unit_ball_volume(n: int) -> float:
    """Volume of the Euclidean unit ball in R^n, computed in log space."""
    if not (1 <= int(n) <= 200):
        raise ValueError("dimension must lie in [1, 200]")
    n = int(n)
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


def random_orthogonal(n: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix via sign-fixed QR of a Gaussian matrix."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    g = gen.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def hyperplane_basis(direction: np.ndarray) -> np.ndarray:
    """Orthonormal ``n x (n-1)`` basis of the hyperplane orthogonal to `direction`.

    Built from the Householder reflector that sends e_1 to the direction, so
    the chart is a deterministic function of the input.
    """
    u = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(u))
    if norm <= 1e-12:
        raise ValueError("direction is numerically zero")
    u = u / norm
    n = u.shape[0]
    if n == 1:
        return np.zeros((1, 0))
    w = u.copy()
    w[0] += math.copysign(1.0, u[0]) if u[0] != 0.0 else 1.0
    h = np.eye(n) - 2.0 * np.outer(w, w) / float(w @ w)
    return h[:, 1:]


def nullspace_basis(rows: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of the given row vectors."""
    a = np.atleast_2d(np.asarray(rows, dtype=float))
    n = a.shape[1]
    _, sv, vt = np.linalg.svd(a)
    rank = int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 0.0)))
    return vt[rank:].T.copy() if rank < n else np.zeros((n, 0))


def canonical_sign(vector: np.ndarray, tol: float = 1e-12) -> float:
    """Sign that makes the first non-negligible coordinate positive (+1.0 / -1.0)."""
    for x in np.asarray(vector, dtype=float):
        if abs(x) > tol:
            return 1.0 if x > 0 else -1.0
    return 1.0


def dedup_rows(points: np.ndarray, tol: float) -> np.ndarray:
    """Merge rows closer than `tol`, keeping the first occurrence in input order.

    Two passes: a conservative grid hash collapses exact-ish duplicates in
    O(V), then an explicit distance check handles grid-straddling pairs.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) == 0:
        return pts.copy()
    grid = np.round(pts / (tol / 16.0)).astype(np.int64)
    first = {}
    order = []
    for i, key in enumerate(map(bytes, grid)):
        if key not in first:
            first[key] = i
            order.append(i)
    survivors = pts[order]
    kept: list[np.ndarray] = []
    kept_arr = np.empty((0, pts.shape[1]))
    for row in survivors:
        if len(kept) and float(np.min(np.sum((kept_arr - row) ** 2, axis=1))) <= tol * tol:
            continue
        kept.append(row)
        kept_arr = np.vstack([kept_arr, row[None, :]])
    return kept_arr


def isotropy_residuals(directions: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    """Diagnostics for a weighted direction set resolving the identity.

    Returns ``(frobenius, trace_gap)``: the Frobenius norm of
    ``sum_i c_i u_i u_i^T - I`` and the signed gap ``sum_i c_i - n``.
    """
    u = np.asarray(directions, dtype=float)
    c = np.asarray(weights, dtype=float)
    n = u.shape[1]
    outer = (u * c[:, None]).T @ u
    return float(np.linalg.norm(outer - np.eye(n))), float(c.sum() - n)
