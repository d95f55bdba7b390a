"""Minimum-volume enclosing ellipsoids of symmetric point sets.

The MVEE of a symmetric set is origin-centered, so the problem is the
D-optimal design: maximize ``log det sum_k lambda_k v_k v_k^T`` over the
probability simplex.  It is solved by Frank-Wolfe ascent with Wolfe-Atwood
away steps (linear convergence, and the iterate doubles as an optimality
certificate).  The ellipsoid is ``{x : x^T (n M)^{-1} x <= 1}``.

From an optimal design the contact-point decomposition is extracted: after
mapping by ``(n M)^{-1/2}`` the support points become unit vectors ``u_i``
with weights ``c_i`` satisfying ``sum c_i u_i (x) u_i = I`` and
``sum c_i = n`` — recomputed from the support-only design so the identities
hold to machine precision rather than to the solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import CapacityError, canonical_sign, dedup_rows, isotropy_residuals, jacobi_eigh, unit_ball_volume

__all__ = [
    "Ellipsoid",
    "JohnDecomposition",
    "JohnResidualReport",
    "MveeResult",
    "extract_john_decomposition",
    "john_residual",
    "mvee_symmetric",
]

MAX_MVEE_ITERATIONS = 1_000_000
DEFAULT_EPS = 1e-8


@dataclass(frozen=True)
class Ellipsoid:
    """Origin-centered ellipsoid ``{x : x^T H x <= 1}`` with H symmetric PD."""

    shape: np.ndarray

    def __post_init__(self):
        h = np.array(self.shape, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("shape matrix must be square")
        if not np.allclose(h, h.T, atol=1e-10 * max(1.0, float(np.abs(h).max()))):
            raise ValueError("shape matrix must be symmetric")
        try:
            np.linalg.cholesky(h)
        except np.linalg.LinAlgError as exc:
            raise ValueError("shape matrix must be positive definite") from exc
        h = 0.5 * (h + h.T)
        h.setflags(write=False)
        object.__setattr__(self, "shape", h)

    @property
    def dim(self) -> int:
        return self.shape.shape[0]

    @property
    def volume(self) -> float:
        sign, logdet = np.linalg.slogdet(self.shape)
        if sign <= 0:
            raise ValueError("shape matrix is not positive definite")
        return unit_ball_volume(self.dim) * float(np.exp(-0.5 * logdet))

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.einsum("ij,jk,ik->i", pts, self.shape, pts) <= 1.0 + tol


@dataclass(frozen=True)
class MveeResult:
    """Solved design: the ellipsoid, canonical points, weights, and certificate data."""

    ellipsoid: Ellipsoid
    points: np.ndarray
    weights: np.ndarray
    iterations: int
    kappa_max: float
    kappa_min: float
    eps: float


def _canonicalize_symmetric(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array (m, n)")
    norms = np.linalg.norm(pts, axis=1)
    keep = pts[norms > 1e-12]
    if len(keep) == 0:
        raise ValueError("no nonzero points given")
    signs = np.array([canonical_sign(p) for p in keep])
    return dedup_rows(keep * signs[:, None], 1e-12)


def mvee_symmetric(points: np.ndarray, eps: float = DEFAULT_EPS) -> MveeResult:
    """MVEE of the symmetric set ``{+/- v_k}`` via the D-optimal design problem.

    Antipodal pairs are collapsed to canonical representatives first (the
    design is even).  Terminates when every point satisfies
    ``v^T (nM)^{-1} v <= 1 + eps`` and every support point satisfies
    ``>= 1 - eps``; raises :class:`CapacityError` with the best iterate
    attached after 10^6 steps.
    """
    if not (1e-10 <= eps <= 1e-2):
        raise ValueError("eps must lie in [1e-10, 1e-2]")
    v = _canonicalize_symmetric(points)
    m, n = v.shape
    if np.linalg.matrix_rank(v, tol=1e-10) < n:
        raise ValueError("points do not span R^n: the MVEE is degenerate")
    lam = np.full(m, 1.0 / m)
    outer = v[:, :, None] * v[:, None, :]  # (m, n, n)
    iterations = 0
    while True:
        mat = np.tensordot(lam, outer, axes=1)
        inv = np.linalg.inv(mat)
        g = np.einsum("ij,jk,ik->i", v, inv, v)
        sup = lam > 0.0
        k_max = float(np.max(g))
        k_min = float(np.min(g[sup]))
        if (k_max <= n * (1.0 + eps) and k_min >= n * (1.0 - eps)) or iterations >= MAX_MVEE_ITERATIONS:
            break
        if k_max - n >= n - k_min:
            j = int(np.argmax(g))
            kappa = k_max
            beta = (kappa - n) / (n * (kappa - 1.0))
        else:
            masked = np.where(sup, g, np.inf)
            j = int(np.argmin(masked))
            kappa = k_min
            drop = -lam[j] / (1.0 - lam[j])
            if kappa <= 1.0 + 1e-12:
                beta = drop  # unconstrained optimum is past removal: drop the point
            else:
                beta = max((kappa - n) / (n * (kappa - 1.0)), drop)
        lam *= 1.0 - beta
        lam[j] += beta
        lam = np.maximum(lam, 0.0)
        lam /= lam.sum()
        iterations += 1
    shape = np.linalg.inv(n * mat)
    shape = 0.5 * (shape + shape.T)
    result = MveeResult(Ellipsoid(shape), v, lam, iterations, k_max, k_min, eps)
    if iterations >= MAX_MVEE_ITERATIONS and not (k_max <= n * (1.0 + eps) and k_min >= n * (1.0 - eps)):
        err = CapacityError(f"MVEE did not converge in {MAX_MVEE_ITERATIONS} iterations (kappa range [{k_min:.6g}, {k_max:.6g}], target n={n})")
        err.best = result
        raise err
    return result


@dataclass(frozen=True)
class JohnDecomposition:
    """Contact unit vectors with weights resolving the identity matrix.

    Invariants (checked by :meth:`validate`, not at construction):
    ``sum c_i u_i (x) u_i = I`` within Frobenius 1e-6, ``sum c_i = n`` within
    1e-8, unit contacts within 1e-8.
    """

    contacts: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        u = np.array(self.contacts, dtype=float)
        c = np.array(self.weights, dtype=float)
        if u.ndim != 2 or c.ndim != 1 or len(u) != len(c):
            raise ValueError("need matching contact rows and weight entries")
        u.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "contacts", u)
        object.__setattr__(self, "weights", c)

    @property
    def directions(self) -> np.ndarray:
        return self.contacts

    @property
    def dim(self) -> int:
        return self.contacts.shape[1]

    def residuals(self) -> tuple[float, float]:
        return isotropy_residuals(self.contacts, self.weights)

    def validate(self, frobenius_tol: float = 1e-6, trace_tol: float = 1e-8) -> None:
        norms = np.linalg.norm(self.contacts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("contacts must be unit vectors (within 1e-8)")
        if np.any(self.weights <= 0.0):
            raise ValueError("weights must be strictly positive")
        frob, gap = self.residuals()
        if frob > frobenius_tol:
            raise ValueError(f"contacts do not resolve the identity: residual {frob:.3e} > {frobenius_tol:.1e}")
        if abs(gap) > trace_tol:
            raise ValueError(f"weights do not sum to the dimension: gap {gap:.3e} > {trace_tol:.1e}")


def extract_john_decomposition(result: MveeResult) -> JohnDecomposition:
    """Contact decomposition from a solved design.

    Support points are those with design weight above ``max(eps, 1e-9)``.
    The support weights are renormalized and the whitening map recomputed
    from the support-only design, so the output satisfies the identity
    resolution to machine precision regardless of the solver tolerance.
    """
    lam = result.weights
    v = result.points
    n = v.shape[1]
    threshold = max(result.eps, 1e-9)
    idx = np.flatnonzero(lam > threshold)
    if len(idx) < n:
        raise ValueError(f"only {len(idx)} support points for dimension {n}: MVEE did not converge to a spanning design")
    lam_hat = lam[idx] / lam[idx].sum()
    vs = v[idx]
    design = n * (vs.T * lam_hat) @ vs
    w, q = jacobi_eigh(design)
    if w[0] <= 0:
        raise ValueError("support design is rank-deficient")
    whiten = q @ np.diag(w**-0.5) @ q.T
    tv = vs @ whiten
    lengths = np.linalg.norm(tv, axis=1)
    contacts = tv / lengths[:, None]
    weights = n * lam_hat * lengths**2
    return JohnDecomposition(contacts, weights)


@dataclass(frozen=True)
class JohnResidualReport:
    """Diagnostics of a contact decomposition."""

    frobenius: float
    trace_gap: float
    quadratic_max_relative: float


def john_residual(decomposition: JohnDecomposition, check_points: int = 20) -> JohnResidualReport:
    """Frobenius and trace residuals plus the quadratic identity spot-check.

    The identity ``|x|^2 = sum c_i <u_i, x>^2`` is evaluated at a fixed set
    of deterministic pseudo-random points; the worst relative error is
    reported.
    """
    frob, gap = decomposition.residuals()
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(0x5EED_1DE4)))
    xs = gen.standard_normal((check_points, decomposition.dim))
    sq = np.sum((xs @ decomposition.contacts.T) ** 2 * decomposition.weights, axis=1)
    norms = np.sum(xs**2, axis=1)
    quad = float(np.max(np.abs(sq - norms) / norms))
    return JohnResidualReport(frob, gap, quad)
