"""Origin-symmetric polytopes given as slab intersections.

A body is the set ``{x : |<x, u_i>| <= t_i, i = 1..m}`` for unit directions
``u_i`` and positive offsets ``t_i``.  All derived data (vertices, facets,
volume, shadows) is computed by explicit brute-force geometry:

* vertices by solving every invertible ``n``-subset of the signed constraint
  hyperplanes and filtering by feasibility;
* facet measures by a recursive cone decomposition inside each face's own
  orthonormal chart, bottoming out at polygon area, with faces memoised by
  their vertex sets so ridges shared between facets are measured once;
* volume as ``sum(offset * facet measure) / n`` over the facet fan;
* shadow area in direction theta as ``0.5 * sum |<theta, n_F>| * |F|``.

The enumeration cost is combinatorial, so hard desk-scale guards reject
``m > 24`` slabs or dimension ``n > 7``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .kernel import CapacityError, RandomSource, dedup_rows, hyperplane_basis, sample_unit_sphere

__all__ = [
    "FacetData",
    "SymmetricHPolytope",
    "VertexSet",
    "cauchy_surface_check",
    "random_symmetric_polytope",
]

MAX_SLABS = 24
MAX_DIM = 7
FEASIBILITY_TOL = 1e-9
VERTEX_MERGE_TOL = 1e-8
MEASURE_FLOOR = 1e-12
_DET_TOL = 1e-12
_SUBSET_CHUNK = 4096


@dataclass(frozen=True)
class VertexSet:
    """Vertices of a symmetric polytope, closed under negation, in canonical order."""

    points: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class FacetData:
    """One geometric facet: outward unit normal, offset, (n-1)-measure, vertex indices.

    ``owners`` lists the (slab index, sign) pairs whose constraint hyperplane
    supports this facet; it has more than one entry only when slabs coincide.
    """

    normal: np.ndarray
    offset: float
    measure: float
    vertex_indices: tuple[int, ...]
    owners: tuple[tuple[int, int], ...]


def _polygon_area(coords: np.ndarray) -> float:
    # vertices of a 2-face are in convex position: angular sort + shoelace
    d = coords - coords.mean(axis=0)
    order = np.argsort(np.arctan2(d[:, 1], d[:, 0]), kind="stable")
    x, y = d[order, 0], d[order, 1]
    xn, yn = np.empty_like(x), np.empty_like(y)
    xn[:-1], xn[-1] = x[1:], x[0]
    yn[:-1], yn[-1] = y[1:], y[0]
    return 0.5 * abs(float(x @ yn - y @ xn))


class SymmetricHPolytope:
    """Intersection of symmetric slabs ``|<x, u_i>| <= t_i``.

    Directions must be unit vectors (within 1e-12) spanning R^n — otherwise
    the body would be unbounded and construction is rejected.  Offsets must
    be strictly positive.  Instances are immutable; vertices and facets are
    computed on first use and cached.
    """

    def __init__(self, directions: np.ndarray, offsets: np.ndarray):
        u = np.array(directions, dtype=float)
        t = np.array(offsets, dtype=float)
        if u.ndim != 2:
            raise ValueError("directions must be a 2-d array (m, n)")
        m, n = u.shape
        if n < 1:
            raise ValueError("dimension must be at least 1")
        if t.shape != (m,):
            raise ValueError("offsets must have one entry per direction")
        if m < n:
            raise ValueError(f"need at least n={n} slabs to bound the body, got {m}")
        norms = np.linalg.norm(u, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("directions must be unit vectors (within 1e-12)")
        if np.any(t <= 0.0):
            raise ValueError("offsets must be strictly positive")
        if np.linalg.matrix_rank(u, tol=1e-10) < n:
            raise ValueError("directions do not span R^n: the body is unbounded")
        u.setflags(write=False)
        t.setflags(write=False)
        self._directions = u
        self._offsets = t

    # -- basic accessors -------------------------------------------------

    @property
    def directions(self) -> np.ndarray:
        return self._directions

    @property
    def offsets(self) -> np.ndarray:
        return self._offsets

    @property
    def dim(self) -> int:
        return self._directions.shape[1]

    @property
    def num_slabs(self) -> int:
        return self._directions.shape[0]

    def __repr__(self) -> str:
        return f"SymmetricHPolytope(n={self.dim}, m={self.num_slabs})"

    def _guard(self) -> None:
        if self.num_slabs > MAX_SLABS or self.dim > MAX_DIM:
            raise CapacityError(
                f"enumeration guard exceeded: m={self.num_slabs} (max {MAX_SLABS}), "
                f"n={self.dim} (max {MAX_DIM})"
            )

    # -- membership / support --------------------------------------------

    def contains(self, points: np.ndarray, tol: float = FEASIBILITY_TOL) -> np.ndarray:
        """Boolean mask: which of the given points satisfy every slab constraint."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(np.abs(pts @ self._directions.T) <= self._offsets + tol, axis=1)

    def support(self, theta: np.ndarray) -> float:
        """Support function ``max_{x in P} <x, theta>`` (via the vertex set)."""
        return float(np.max(self.vertices.points @ np.asarray(theta, dtype=float)))

    # -- vertex enumeration ----------------------------------------------

    @cached_property
    def vertices(self) -> VertexSet:
        """All vertices, by brute force over invertible n-subsets of the slab normals.

        For each subset the 2^(n-1) sign patterns with the first sign fixed
        positive are solved in one batched call; mirrored solutions are added
        afterwards, so the set is exactly closed under negation.
        """
        self._guard()
        u, t = self._directions, self._offsets
        m, n = u.shape
        patterns = np.array(list(itertools.product([1.0, -1.0], repeat=n - 1)))
        patterns = np.hstack([np.ones((len(patterns), 1)), patterns])  # (P, n)
        subsets = np.array(list(itertools.combinations(range(m), n)), dtype=np.intp)
        found: list[np.ndarray] = []
        for lo in range(0, len(subsets), _SUBSET_CHUNK):
            block = subsets[lo : lo + _SUBSET_CHUNK]
            mats = u[block]  # (B, n, n)
            keep = np.abs(np.linalg.det(mats)) > _DET_TOL
            if not np.any(keep):
                continue
            mats = mats[keep]
            toff = t[block[keep]]  # (B, n)
            rhs = patterns[None, :, :] * toff[:, None, :]  # (B, P, n)
            sols = np.linalg.solve(mats, rhs.transpose(0, 2, 1))  # (B, n, P)
            cand = sols.transpose(0, 2, 1).reshape(-1, n)
            feas = np.all(np.abs(cand @ u.T) <= t + FEASIBILITY_TOL, axis=1)
            if np.any(feas):
                found.append(cand[feas])
        if not found:
            raise ValueError("no vertices found; body is numerically degenerate")
        raw = np.vstack(found)
        # canonicalise sign so each antipodal pair is represented once
        flip = np.ones(len(raw))
        for j in range(n):
            undecided = flip == 1.0
            sig = np.abs(raw[:, j]) > 1e-9
            neg = undecided & sig & (raw[:, j] < 0)
            flip[neg] = -1.0
            undecided &= ~sig
            if not np.any(undecided):
                break
        canon = dedup_rows(raw * np.where(flip < 0, -1.0, 1.0)[:, None], VERTEX_MERGE_TOL)
        both = np.vstack([canon, -canon])
        order = np.lexsort(both.T[::-1])
        pts = both[order]
        pts.setflags(write=False)
        # negation pairing is exact by construction: row i <-> row i +/- len(canon)
        k = len(canon)
        pair = np.concatenate([np.arange(k) + k, np.arange(k)])
        inv = np.argsort(order, kind="stable")
        self._negation_index = inv[pair[order]]
        return VertexSet(pts)

    # -- facet fan ---------------------------------------------------------

    @cached_property
    def facets(self) -> tuple[FacetData, ...]:
        """Geometric facets with their (n-1)-measures.

        Faces are measured by recursive cone decomposition in their own
        orthonormal charts (polygon area at dimension two, segment length at
        one), memoised by vertex set.  Facets of negligible measure
        (< 1e-12) are omitted.  Coinciding slabs share one facet entry whose
        ``owners`` field lists all of them.
        """
        verts = self.vertices.points
        neg_index = self._negation_index
        u, t = self._directions, self._offsets
        m, n = u.shape
        dots = verts @ u.T
        active = np.stack([np.abs(dots - t) <= FEASIBILITY_TOL, np.abs(dots + t) <= FEASIBILITY_TOL], axis=2)
        # a face and its mirror image have equal measure: memoise with a
        # sign-canonical key, tagged by the face dimension
        memo: dict[tuple[int, bytes], float] = {}

        def face_key(d: int, vidx: np.ndarray) -> tuple[int, bytes]:
            a = vidx.tobytes()
            b = np.sort(neg_index[vidx]).tobytes()
            return (d, a if a <= b else b)

        def measure_of(vidx: np.ndarray, chart: np.ndarray) -> float:
            # chart: orthonormal basis (n x d) of the face's affine hull direction
            d = chart.shape[1]
            key = face_key(d, vidx)
            hit = memo.get(key)
            if hit is not None:
                return hit
            val = 0.0
            if len(vidx) >= d + 1:
                pts = verts[vidx]
                centroid = pts.mean(axis=0)
                coords = (pts - centroid) @ chart
                if d == 1:
                    val = float(coords[:, 0].max() - coords[:, 0].min())
                elif d == 2:
                    val = _polygon_area(coords)
                else:
                    sub_active = active[vidx]
                    seen: set[bytes] = set()
                    # chart-projected slab normals and boundary-vertex counts
                    # for the whole cut search at once
                    projected = chart.T @ u.T
                    gns = np.linalg.norm(projected, axis=0)
                    counts = sub_active.sum(axis=0)
                    bases = centroid @ u.T
                    for j in range(m):
                        gn = float(gns[j])
                        if gn <= 1e-12:
                            continue  # slab parallel to the face: no cut
                        for s_idx, sgn in ((0, 1.0), (1, -1.0)):
                            cnt = int(counts[j, s_idx])
                            if cnt < d or cnt == len(vidx):
                                continue
                            sub = vidx[sub_active[:, j, s_idx]]
                            skey = sub.tobytes()
                            if skey in seen:
                                continue
                            seen.add(skey)
                            sub_measure = memo.get(face_key(d - 1, sub))
                            if sub_measure is None:
                                sub_chart = chart @ hyperplane_basis(sgn / gn * projected[:, j])
                                sub_measure = measure_of(sub, sub_chart)
                            if sub_measure <= 0.0:
                                continue
                            dist = abs(float(t[j]) - sgn * float(bases[j])) / gn
                            val += dist * sub_measure / d
            memo[key] = val
            return val

        entries: dict[bytes, list] = {}
        order: list[bytes] = []
        for j in range(m):
            vpos = np.flatnonzero(active[:, j, 0])
            if len(vpos) < n:
                continue
            meas = measure_of(vpos, hyperplane_basis(u[j]))
            if meas < MEASURE_FLOOR:
                continue
            vneg = np.sort(neg_index[vpos])
            for vidx, sgn in ((vpos, 1), (vneg, -1)):
                key = vidx.tobytes()
                if key in entries:
                    entries[key][3].append((j, sgn))
                else:
                    entries[key] = [sgn * u[j], float(t[j]), meas, [(j, sgn)], vidx]
                    order.append(key)
        out = []
        for key in order:
            normal, offset, meas, owners, vidx = entries[key]
            normal = normal.copy()
            normal.setflags(write=False)
            out.append(FacetData(normal, offset, meas, tuple(int(i) for i in vidx), tuple(owners)))
        return tuple(out)

    # -- measures ----------------------------------------------------------

    @cached_property
    def volume(self) -> float:
        """Lebesgue volume via the cone decomposition over the facet fan."""
        return float(sum(f.offset * f.measure for f in self.facets)) / self.dim

    @cached_property
    def surface_area(self) -> float:
        return float(sum(f.measure for f in self.facets))

    @cached_property
    def _facet_normal_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        facets = self.facets
        if not facets:
            return np.zeros((0, self.dim)), np.zeros(0)
        return np.array([f.normal for f in facets]), np.array([f.measure for f in facets])

    def shadow_area(self, theta: np.ndarray) -> float:
        """(n-1)-volume of the orthogonal projection onto the hyperplane theta^perp."""
        th = np.asarray(theta, dtype=float)
        if th.shape != (self.dim,):
            raise ValueError("direction has wrong shape")
        if abs(float(np.linalg.norm(th)) - 1.0) > 1e-9:
            raise ValueError("projection direction must be a unit vector")
        normals, measures = self._facet_normal_matrix
        return 0.5 * float(np.abs(normals @ th) @ measures)

    def shadow_areas(self, thetas: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`shadow_area` over rows of unit directions."""
        th = np.atleast_2d(np.asarray(thetas, dtype=float))
        if np.any(np.abs(np.linalg.norm(th, axis=1) - 1.0) > 1e-9):
            raise ValueError("projection directions must be unit vectors")
        normals, measures = self._facet_normal_matrix
        return 0.5 * (np.abs(th @ normals.T) @ measures)

    # -- transforms ---------------------------------------------------------

    def affine_image(self, matrix: np.ndarray) -> "SymmetricHPolytope":
        """The body ``A P`` for an invertible matrix A.

        Slab normals map by the inverse transpose and are re-normalised;
        offsets are rescaled accordingly.
        """
        a = np.asarray(matrix, dtype=float)
        if a.shape != (self.dim, self.dim):
            raise ValueError("transform has wrong shape")
        if abs(float(np.linalg.det(a))) <= 1e-12:
            raise ValueError("transform is numerically singular")
        w = np.linalg.solve(a.T, self._directions.T).T  # rows A^{-T} u_i
        norms = np.linalg.norm(w, axis=1)
        return SymmetricHPolytope(w / norms[:, None], self._offsets / norms)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.dim,
            "directions": self._directions.tolist(),
            "offsets": self._offsets.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SymmetricHPolytope":
        if not isinstance(data, dict):
            raise ValueError("body document must be a JSON object")
        missing = {"n", "directions", "offsets"} - set(data)
        if missing:
            raise ValueError(f"body document is missing keys: {sorted(missing)}")
        extra = set(data) - {"n", "directions", "offsets"}
        if extra:
            raise ValueError(f"body document has unknown keys: {sorted(extra)}")
        n = data["n"]
        if not isinstance(n, int) or n < 1:
            raise ValueError("'n' must be a positive integer")
        u = np.asarray(data["directions"], dtype=float)
        t = np.asarray(data["offsets"], dtype=float)
        if u.ndim != 2 or u.shape[1] != n:
            raise ValueError(f"'directions' must be a list of length-{n} vectors")
        norms = np.linalg.norm(u, axis=1)
        if np.any(norms <= 1e-12):
            raise ValueError("'directions' contains a zero vector")
        if np.any(np.abs(norms - 1.0) > 1e-6):
            bad = int(np.argmax(np.abs(norms - 1.0)))
            raise ValueError(f"direction {bad} has norm {norms[bad]:.8f}; expected unit within 1e-6")
        return cls(u / norms[:, None], t)


def random_symmetric_polytope(
    n: int,
    m: int,
    rng: RandomSource,
    offset_range: tuple[float, float] = (0.5, 1.5),
) -> SymmetricHPolytope:
    """Random spanning slab body: uniform sphere directions, uniform offsets."""
    if m < n:
        raise ValueError("need m >= n slabs")
    lo, hi = offset_range
    for attempt in range(16):
        src = rng.fork(attempt) if attempt else rng
        gen = src.generator()
        u = gen.standard_normal((m, n))
        u /= np.linalg.norm(u, axis=1)[:, None]
        t = gen.uniform(lo, hi, size=m)
        if np.linalg.matrix_rank(u, tol=1e-10) == n:
            return SymmetricHPolytope(u, t)
    raise ValueError("failed to draw spanning directions")


@dataclass(frozen=True)
class CauchySurfaceCheck:
    surface_area: float
    estimate: float
    relative_error: float
    constant: float
    samples: int


def cauchy_surface_check(body: SymmetricHPolytope, rng: RandomSource, samples: int = 100_000) -> CauchySurfaceCheck:
    """Monte Carlo cross-check of the surface area against averaged shadows.

    The mean shadow area over uniform directions, scaled by
    ``n * v_n / v_{n-1}``, reproduces the surface area.  Returns the measured
    relative error; no assertion is made here.
    """
    from .kernel import unit_ball_volume

    n = body.dim
    if samples < 1:
        raise ValueError("need at least one sample")
    thetas = sample_unit_sphere(n, rng, count=samples)
    mean_shadow = float(np.mean(body.shadow_areas(thetas)))
    constant = n * unit_ball_volume(n) / unit_ball_volume(n - 1) if n > 1 else 2.0
    estimate = constant * mean_shadow
    exact = body.surface_area
    return CauchySurfaceCheck(exact, estimate, abs(estimate - exact) / exact, constant, samples)
