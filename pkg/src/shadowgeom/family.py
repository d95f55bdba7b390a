"""Volume maximization over slab families with a shared offset budget.

A slab family fixes m unit directions u_i spanning R^n and positive budget
weights g_i; its members are the symmetric bodies {x : |<x, u_i>| <= t_i}
with positive offsets constrained by sum_i g_i t_i = 1.  Because the
n-th root of the volume is concave in the offsets (Brunn-Minkowski applied
to the Minkowski-additive slab description), projected gradient ascent on
the budget slice certifies a global maximum.  At that maximum each facet
measure is proportional to its budget weight, which makes every shadow of
the optimal body a fixed multiple of a weighted direction sum; the
verifiers below check the stationarity certificate and that projection
identity directly.

On top of the solver this module builds the large-shadow construction: with
2n random directions and uniform budget weights, the optimal body has
volume^(1/n) at least sqrt(2) while every shadow is bounded below by an
explicit multiple of the direction spread, so its minimal shadow exceeds
the isoperimetric baseline by a dimension-dependent factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import CapacityError, RandomSource, hyperplane_basis, sample_unit_sphere, unit_ball_volume
from .polytope import SymmetricHPolytope
from .shadow import ball_shadow_ratio, min_shadow_direction, minimize_support
from .zonotope import Zonotope

__all__ = [
    "DirectionSpreadReport",
    "FamilyOptimumReport",
    "FloorViolationError",
    "KKTReport",
    "PathologicalReport",
    "ProjectionIdentityReport",
    "ShephardReport",
    "SlabFamilySpec",
    "SlabVolumeFloorReport",
    "construct_pathological",
    "direction_spread",
    "kkt_report",
    "maximize_volume_details",
    "maximize_volume_in_family",
    "shephard_demonstration",
    "unit_body_volume_floor",
    "verify_projection_identity",
]

OFFSET_FLOOR = 1e-9
MAX_ASCENT_ITERATIONS = 600
_LINE_SEARCH_SHRINK = 0.5
_ARMIJO_SLOPE = 0.5
_MAX_BACKTRACKS = 45
_START_SEED = 0xFA417_0001
_IDENTITY_SEED = 0xFA417_0002
_PATHOLOGY_SEED = 0xFA7A_0001
_MIN_TOL = 1e-10
_MAX_TOL = 1e-3


class FloorViolationError(RuntimeError):
    """A theorem-backed lower bound failed numerically; never ignorable."""


@dataclass(frozen=True)
class SlabFamilySpec:
    """Directions and budget weights defining a family of slab bodies.

    ``directions`` holds m unit rows spanning R^n; ``weights`` holds the m
    positive budget weights.  Family members are the bodies with offsets t
    satisfying ``weights @ t = 1`` and ``t > 0``.
    """

    directions: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        u = np.array(self.directions, dtype=float)
        w = np.array(self.weights, dtype=float)
        if u.ndim != 2:
            raise ValueError("directions must be a 2-d array (m, n)")
        m, n = u.shape
        if w.shape != (m,):
            raise ValueError("weights must be a vector of length m")
        if not np.all(np.isfinite(u)) or not np.all(np.isfinite(w)):
            raise ValueError("directions and weights must be finite")
        if np.any(w <= 0.0):
            raise ValueError("budget weights must be positive")
        norms = np.linalg.norm(u, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ValueError("directions must be unit vectors")
        if np.linalg.matrix_rank(u, tol=1e-10) < n:
            raise ValueError("directions must span the ambient space")
        if float(w.sum()) * OFFSET_FLOOR >= 1.0:
            raise ValueError("budget weights leave no room above the offset floor")
        u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "directions", u)
        object.__setattr__(self, "weights", w)

    @property
    def count(self) -> int:
        return self.directions.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def body(self, offsets: np.ndarray) -> SymmetricHPolytope:
        """The family member with the given positive offsets."""
        return SymmetricHPolytope(self.directions, np.asarray(offsets, dtype=float))

    def uniform_offsets(self) -> np.ndarray:
        """The budget-feasible point with all offsets equal."""
        return np.full(self.count, 1.0 / float(self.weights.sum()))

    def project_to_budget(self, offsets: np.ndarray) -> np.ndarray:
        """Euclidean projection onto {t : weights @ t = 1, t >= floor}.

        Active-set water-filling: coordinates clipped at the floor by the
        unconstrained slice projection stay clipped in the solution, so the
        active set only grows and the loop ends after at most m rounds.
        """
        t = np.asarray(offsets, dtype=float)
        w = self.weights
        active = np.zeros(self.count, dtype=bool)
        for _ in range(self.count + 1):
            free = ~active
            if not free.any():
                raise ValueError("projection infeasible: all offsets at the floor")
            wf = w[free]
            target = 1.0 - OFFSET_FLOOR * float(w[active].sum())
            shift = (float(wf @ t[free]) - target) / float(wf @ wf)
            candidate = np.where(free, t - shift * w, OFFSET_FLOOR)
            violated = free & (candidate < OFFSET_FLOOR)
            if not violated.any():
                return np.maximum(candidate, OFFSET_FLOOR)
            active |= violated
        raise ValueError("projection failed to settle on an active set")


def _volume_gradient(body: SymmetricHPolytope, count: int) -> np.ndarray:
    """d(volume)/d(offsets): per-slab sums of facet measures.

    Both facets of an antipodal pair carry the same slab index, so a clean
    slab receives twice its one-sided facet measure.  A facet shared by
    coinciding slabs is split evenly among them (a symmetric subgradient
    choice at the nondifferentiable point).
    """
    grad = np.zeros(count)
    for facet in body.facets:
        share = facet.measure / len(facet.owners)
        for slab, _sign in facet.owners:
            grad[slab] += share
    return grad


def _tangent_component(grad: np.ndarray, weights: np.ndarray, at_floor: np.ndarray) -> np.ndarray:
    """Projection of a gradient onto the feasible ascent directions.

    Feasible directions keep the budget (weights @ d = 0) and do not push
    floor-active coordinates further down.  Floor-active coordinates whose
    projected component points below the floor are frozen and the affine
    projection is recomputed; the frozen set only grows.
    """
    frozen = np.zeros(len(grad), dtype=bool)
    for _ in range(len(grad) + 1):
        free = ~frozen
        if not free.any():
            return np.zeros_like(grad)
        wf = weights[free]
        shift = float(grad[free] @ wf) / float(wf @ wf)
        d = np.where(free, grad - shift * weights, 0.0)
        newly = free & at_floor & (d < 0.0)
        if not newly.any():
            return d
        frozen |= newly
    return np.zeros_like(grad)


@dataclass(frozen=True)
class _AscentResult:
    offsets: np.ndarray
    volume: float
    iterations: int
    gradient_norm: float
    converged: bool


def _ascend(
    spec: SlabFamilySpec,
    start: np.ndarray,
    tol: float,
    max_iterations: int,
    jac_cache: dict | None = None,
) -> _AscentResult:
    """Projected gradient ascent on log-volume over the budget slice."""
    t = spec.project_to_budget(start)
    body = spec.body(t)
    volume = body.volume
    for _ in range(60):
        # a start pinned to the offset floor is numerically degenerate;
        # blend toward the uniform point (the slice is convex) until the
        # body has measurable volume, then ascend from there
        if volume > 0.0:
            break
        t = 0.5 * (t + spec.uniform_offsets())
        body = spec.body(t)
        volume = body.volume
    if volume <= 0.0:
        raise ValueError("could not find a start of positive volume")
    step = None
    prev_t = None
    prev_grad_log = None
    iterations = 0
    newton_allowed = True
    for iterations in range(1, max_iterations + 1):
        grad = _volume_gradient(body, spec.count)
        at_floor = t <= OFFSET_FLOOR * (1.0 + 1e-6)
        tangent = _tangent_component(grad, spec.weights, at_floor)
        gradient_norm = float(np.linalg.norm(tangent))
        if gradient_norm <= tol * volume:
            return _AscentResult(t, volume, iterations, gradient_norm, True)
        if newton_allowed and gradient_norm <= 1e-4 * volume and float(t.min()) > 16.0 * OFFSET_FLOOR:
            # close enough for the quadratic phase: two Newton rounds beat
            # the long linear tail of the gradient ascent
            polished = _newton_polish(spec, t, tol, iterations, jac_cache)
            if polished.converged:
                return polished
            # Newton could not contract (combinatorics changing nearby):
            # resume the monotone ascent from its best iterate
            newton_allowed = False
            t = spec.project_to_budget(polished.offsets)
            body = spec.body(t)
            volume = body.volume
            step = None
            prev_t = None
            prev_grad_log = None
            continue
        grad_log = grad / volume
        if step is None:
            step = 0.3 / max(float(np.linalg.norm(tangent / volume)), 1e-12)
        elif prev_t is not None and prev_grad_log is not None:
            dt = t - prev_t
            dy = prev_grad_log - grad_log
            denom = float(dt @ dy)
            if denom > 1e-18:
                step = float(dt @ dt) / denom
            else:
                step = step * 2.0
        step = float(np.clip(step, 1e-12, 1e6))
        prev_t, prev_grad_log = t, grad_log
        accepted = False
        trial = step
        log_volume = math.log(volume)
        for _ in range(_MAX_BACKTRACKS):
            t_new = spec.project_to_budget(t + trial * grad_log)
            move = t_new - t
            if float(np.linalg.norm(move)) <= 1e-16 * max(1.0, float(np.linalg.norm(t))):
                break
            body_new = spec.body(t_new)
            volume_new = body_new.volume
            if volume_new > 0.0 and math.log(volume_new) >= log_volume + _ARMIJO_SLOPE * float(grad_log @ move):
                t, body, volume = t_new, body_new, volume_new
                step = trial
                accepted = True
                break
            trial *= _LINE_SEARCH_SHRINK
        if not accepted:
            if not newton_allowed:
                break
            # the line search has hit the double-precision noise floor of
            # log-volume differences; finish with Newton steps on the
            # stationarity system, which do not compare volumes at all
            return _newton_polish(spec, t, tol, iterations, jac_cache)
    grad = _volume_gradient(body, spec.count)
    tangent = _tangent_component(grad, spec.weights, t <= OFFSET_FLOOR * (1.0 + 1e-6))
    gradient_norm = float(np.linalg.norm(tangent))
    return _AscentResult(t, volume, iterations, gradient_norm, gradient_norm <= tol * volume)


def _newton_polish(
    spec: SlabFamilySpec,
    t: np.ndarray,
    tol: float,
    iterations: int,
    jac_cache: dict | None = None,
) -> _AscentResult:
    """Damped Newton refinement of the stationarity system on the budget slice.

    Parametrizes the slice {weights @ t = 1} by an orthonormal tangent
    basis and drives the reduced log-volume gradient to zero with a
    finite-difference Jacobian.  Quadratic convergence takes over exactly
    where volume-comparison line searches lose their signal, so the
    combination reaches stationarity levels far below volume noise.  If a
    slab offset approaches the floor (where the geometry degenerates) the
    current iterate is returned unpolished.

    ``jac_cache`` lets multistart runs share one Jacobian: every start
    polishes near the same (unique) optimum, so a cached Jacobian from a
    nearby point keeps contracting and is recomputed only when damping
    fails on it.
    """
    weights = spec.weights
    basis = hyperplane_basis(weights / float(np.linalg.norm(weights)))

    def reduced(tv: np.ndarray):
        body = spec.body(tv)
        volume = body.volume
        grad = _volume_gradient(body, spec.count)
        return body, volume, basis.T @ (grad / volume)

    def fd_jacobian(tv: np.ndarray, base_residual: np.ndarray) -> np.ndarray:
        h = 1e-6 * max(float(np.linalg.norm(tv)) / math.sqrt(spec.count), 1e-3)
        jac = np.empty((len(base_residual), len(base_residual)))
        for j in range(len(base_residual)):
            _, _, shifted = reduced(tv + h * basis[:, j])
            jac[:, j] = (shifted - base_residual) / h
        return 0.5 * (jac + jac.T)

    body, volume, residual = reduced(t)
    force_fresh = False
    for _ in range(12):
        rnorm = float(np.linalg.norm(residual))
        # residual is the reduced gradient of log-volume, so the projected
        # volume-gradient norm is rnorm * volume: compare against tol directly
        if rnorm <= tol:
            return _AscentResult(t, volume, iterations, rnorm * volume, True)
        if float(t.min()) <= 16.0 * OFFSET_FLOOR:
            break
        cached = (
            not force_fresh
            and jac_cache is not None
            and "t" in jac_cache
            and float(np.linalg.norm(t - jac_cache["t"])) <= 1e-3 * (1.0 + float(np.linalg.norm(jac_cache["t"])))
        )
        if cached:
            jac = jac_cache["jac"]
        else:
            jac = fd_jacobian(t, residual)
            force_fresh = False
            if jac_cache is not None:
                jac_cache["t"] = t.copy()
                jac_cache["jac"] = jac
        try:
            delta = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError:
            break
        accepted = False
        damp = 1.0
        for _ in range(20):
            t_try = t + basis @ (damp * delta)
            if float(t_try.min()) > OFFSET_FLOOR:
                body_try, volume_try, residual_try = reduced(t_try)
                if volume_try > 0.0 and float(np.linalg.norm(residual_try)) <= (1.0 - 0.25 * damp) * rnorm:
                    t, body, volume, residual = t_try, body_try, volume_try, residual_try
                    accepted = True
                    break
            damp *= 0.5
        if not accepted:
            if cached:
                force_fresh = True
                continue
            break
    rnorm = float(np.linalg.norm(residual))
    return _AscentResult(t, volume, iterations, rnorm * volume, rnorm <= tol)


@dataclass(frozen=True)
class FamilyOptimumReport:
    """Best family member found, with the multistart agreement evidence."""

    body: SymmetricHPolytope
    offsets: np.ndarray
    volume: float
    gradient_norm: float
    iterations: int
    converged: bool
    start_volumes: tuple[float, ...]
    start_offsets: tuple[tuple[float, ...], ...]

    @property
    def volume_agreement(self) -> float:
        """Largest relative volume gap between multistart optima."""
        top = max(self.start_volumes)
        return (top - min(self.start_volumes)) / top

    @property
    def offset_agreement(self) -> float:
        """Largest sorted-offset deviation between multistart optima."""
        sorted_offsets = [np.sort(np.array(o)) for o in self.start_offsets]
        reference = sorted_offsets[0]
        worst = 0.0
        for other in sorted_offsets[1:]:
            worst = max(worst, float(np.abs(other - reference).max()))
        return worst

    def to_dict(self) -> dict:
        return {
            "offsets": [float(v) for v in self.offsets],
            "volume": self.volume,
            "gradient_norm": self.gradient_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "start_volumes": list(self.start_volumes),
            "volume_agreement": self.volume_agreement,
            "offset_agreement": self.offset_agreement,
        }


def maximize_volume_details(
    spec: SlabFamilySpec,
    tol: float = 1e-8,
    starts: int = 5,
    rng: RandomSource | None = None,
    max_iterations: int = MAX_ASCENT_ITERATIONS,
) -> FamilyOptimumReport:
    """Multistart projected gradient ascent with full diagnostics.

    Concavity of volume^(1/n) in the offsets makes every converged start a
    global maximizer; the multistart spread is reported as the uniqueness
    evidence.  Raises :class:`CapacityError` carrying the best body found
    when no start converges within the iteration cap.
    """
    if not (_MIN_TOL <= tol <= _MAX_TOL):
        raise ValueError(f"tol must lie in [{_MIN_TOL}, {_MAX_TOL}]")
    if starts < 1:
        raise ValueError("at least one start is required")
    if rng is None:
        rng = RandomSource(_START_SEED)
    results = []
    jac_cache: dict = {}
    for k in range(starts):
        if k == 0:
            start = spec.uniform_offsets()
        else:
            # positive rescale onto the budget keeps every start strictly
            # interior; Euclidean projection could pin coordinates to the
            # floor, where bodies are numerically degenerate
            scale = rng.fork(_START_SEED + k).generator().uniform(0.25, 4.0, size=spec.count)
            raw = spec.uniform_offsets() * scale
            start = raw / float(spec.weights @ raw)
        results.append(_ascend(spec, start, tol, max_iterations, jac_cache))
    converged = [r for r in results if r.converged]
    if not converged:
        fallback = max(results, key=lambda r: r.volume)
        raise CapacityError(
            "volume ascent hit the iteration cap before reaching stationarity",
            best=spec.body(fallback.offsets),
        )
    best = max(converged, key=lambda r: r.volume)
    return FamilyOptimumReport(
        body=spec.body(best.offsets),
        offsets=best.offsets,
        volume=best.volume,
        gradient_norm=best.gradient_norm,
        iterations=best.iterations,
        converged=best.converged,
        start_volumes=tuple(r.volume for r in results),
        start_offsets=tuple(tuple(float(v) for v in r.offsets) for r in results),
    )


def maximize_volume_in_family(
    spec: SlabFamilySpec,
    tol: float = 1e-8,
    starts: int = 5,
    rng: RandomSource | None = None,
) -> SymmetricHPolytope:
    """The family member of maximal volume (unique by strict concavity)."""
    return maximize_volume_details(spec, tol=tol, starts=starts, rng=rng).body


@dataclass(frozen=True)
class KKTReport:
    """Stationarity certificate: facet measures proportional to weights."""

    multiplier: float
    relative_residuals: np.ndarray
    max_relative_residual: float

    def to_dict(self) -> dict:
        return {
            "multiplier": self.multiplier,
            "max_relative_residual": self.max_relative_residual,
        }


def kkt_report(body: SymmetricHPolytope, spec: SlabFamilySpec) -> KKTReport:
    """Stationarity residuals of a family member.

    At an interior maximum the volume gradient (twice the one-sided facet
    measure per slab) equals the multiplier n*volume times the budget
    weight.  Residuals are reported relative to that target, skipping
    floor-active coordinates where the bound is one-sided.
    """
    offsets = body.offsets
    grad = _volume_gradient(body, spec.count)
    multiplier = body.dim * body.volume
    target = multiplier * spec.weights
    residual = np.abs(grad - target) / target
    free = offsets > OFFSET_FLOOR * (1.0 + 1e-6)
    residual = np.where(free, residual, 0.0)
    residual.setflags(write=False)
    return KKTReport(multiplier, residual, float(residual.max()))


@dataclass(frozen=True)
class ProjectionIdentityReport:
    """Worst shadow-vs-weighted-sum deviation of a solved family member."""

    max_relative_error: float
    sample_count: int
    worst_direction: np.ndarray

    def to_dict(self) -> dict:
        return {
            "max_relative_error": self.max_relative_error,
            "sample_count": self.sample_count,
        }


def verify_projection_identity(
    body: SymmetricHPolytope,
    spec: SlabFamilySpec,
    sample_count: int = 1000,
    rng: RandomSource | None = None,
) -> ProjectionIdentityReport:
    """Check that every shadow equals the weighted direction sum.

    For the volume maximizer, the shadow in direction theta equals
    ``(n*volume/2) * sum_i weights_i * |<u_i, theta>|``: the facet measures
    are proportional to the weights, and the shadow is half the measure-
    weighted sum of |normal . theta| over all facets.
    """
    if rng is None:
        rng = RandomSource(_IDENTITY_SEED)
    thetas = sample_unit_sphere(spec.dim, rng, count=sample_count)
    shadows = body.shadow_areas(thetas)
    scale = body.dim * body.volume / 2.0
    predicted = scale * (np.abs(thetas @ spec.directions.T) @ spec.weights)
    relative = np.abs(shadows - predicted) / shadows
    worst = int(np.argmax(relative))
    return ProjectionIdentityReport(float(relative[worst]), sample_count, thetas[worst].copy())


@dataclass(frozen=True)
class DirectionSpreadReport:
    """Spread constant of a direction set: min_theta sum_i |<theta,u_i>| / sqrt(n)."""

    value: float
    direction: np.ndarray
    branch: str

    def to_dict(self) -> dict:
        return {"value": self.value, "branch": self.branch}


def direction_spread(directions: np.ndarray, rng: RandomSource | None = None) -> DirectionSpreadReport:
    """Worst-case weighted alignment of a direction set, normalized by sqrt(n).

    The minimized sum is the support function of the zonotope generated by
    the directions, so the exhaustive sign-pattern search applies whenever
    there are at most 16 directions ("exact" branch); beyond that the value
    is a sampled estimate.  Duplicated directions count with multiplicity.
    A non-spanning set has spread zero (witnessed by a normal direction).
    """
    u = np.array(directions, dtype=float)
    if u.ndim != 2:
        raise ValueError("directions must be a 2-d array (m, n)")
    norms = np.linalg.norm(u, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("directions must be unit vectors")
    n = u.shape[1]
    if np.linalg.matrix_rank(u, tol=1e-10) < n:
        _, _, vt = np.linalg.svd(u)
        return DirectionSpreadReport(0.0, vt[-1].copy(), "exact")
    report = minimize_support(Zonotope(u), rng)
    return DirectionSpreadReport(report.value / math.sqrt(n), report.direction, report.branch)


@dataclass(frozen=True)
class SlabVolumeFloorReport:
    """Volume of a unit-offset slab body against its 2*sqrt(n/m) floor."""

    vol_nth_root: float
    floor: float

    @property
    def satisfied(self) -> bool:
        return self.vol_nth_root >= self.floor - 1e-9

    def to_dict(self) -> dict:
        return {
            "vol_nth_root": self.vol_nth_root,
            "floor": self.floor,
            "satisfied": self.satisfied,
        }


def unit_body_volume_floor(directions: np.ndarray) -> SlabVolumeFloorReport:
    """Volume floor for the body with every slab offset equal to one.

    Whatever the m unit directions, the body {x : |<x,u_i>| <= 1} has
    volume^(1/n) at least 2*sqrt(n/m), with equality at the coordinate
    cube (m = n).
    """
    u = np.asarray(directions, dtype=float)
    body = SymmetricHPolytope(u, np.ones(u.shape[0]))
    m, n = u.shape
    floor = 2.0 * math.sqrt(n / m)
    return SlabVolumeFloorReport(body.volume ** (1.0 / n), floor)


@dataclass(frozen=True)
class PathologicalReport:
    """A body whose every shadow is provably large for its volume.

    ``ratio`` is the minimal shadow divided by volume^((n-1)/n); ``floor``
    is the certified lower bound delta_hat * sqrt(n) / (2*sqrt(2)).  Both
    floor checks are theorems, so construction fails loudly if either is
    violated numerically.
    """

    body: SymmetricHPolytope
    delta_hat: float
    vol_nth_root: float
    min_shadow: float
    ratio: float
    floor: float
    spread_branch: str
    min_shadow_branch: str

    def to_dict(self) -> dict:
        return {
            "n": self.body.dim,
            "delta_hat": self.delta_hat,
            "vol_nth_root": self.vol_nth_root,
            "min_shadow": self.min_shadow,
            "ratio": self.ratio,
            "floor": self.floor,
            "spread_branch": self.spread_branch,
            "min_shadow_branch": self.min_shadow_branch,
        }


def construct_pathological(
    n: int,
    rng: RandomSource | None = None,
    directions: np.ndarray | None = None,
) -> PathologicalReport:
    """Build the large-shadow body in dimension n and certify its floors.

    Directions default to 2n independent uniform sphere samples with
    uniform budget weights 1/(2n).  The volume maximizer then satisfies
    volume^(1/n) >= sqrt(2) (the unit-offset body is feasible and obeys its
    own floor) and, via the projection identity, every shadow ratio is at
    least delta_hat * sqrt(n) / (2*sqrt(2)).  Violations raise
    :class:`FloorViolationError`.
    """
    if not 2 <= n <= 6:
        raise ValueError("dimension must lie in [2, 6] for exact verification")
    if rng is None:
        rng = RandomSource(_PATHOLOGY_SEED)
    if directions is None:
        for attempt in range(16):
            candidate = sample_unit_sphere(n, rng.fork(0xD14 + attempt), count=2 * n)
            if np.linalg.matrix_rank(candidate, tol=1e-10) == n:
                directions = candidate
                break
        else:
            raise ValueError("failed to sample spanning directions")
    u = np.asarray(directions, dtype=float)
    m = u.shape[0]
    spec = SlabFamilySpec(u, np.full(m, 1.0 / m))
    details = maximize_volume_details(spec, tol=1e-8, rng=rng.fork(0x501))
    body = details.body
    volume = details.volume
    spread = direction_spread(u, rng=rng.fork(0x5BE))
    shadow = min_shadow_direction(body, rng=rng.fork(0x51A))
    vol_nth_root = volume ** (1.0 / n)
    ratio = shadow.value / volume ** ((n - 1.0) / n)
    floor = spread.value * math.sqrt(n) / (2.0 * math.sqrt(2.0))
    vol_floor = 2.0 * math.sqrt(n / m)
    if vol_nth_root < vol_floor - 1e-9:
        raise FloorViolationError(
            f"volume floor violated: vol^(1/n)={vol_nth_root!r} < {vol_floor!r}"
        )
    if ratio < floor - 1e-6:
        raise FloorViolationError(
            f"shadow ratio floor violated: ratio={ratio!r} < floor={floor!r}"
        )
    return PathologicalReport(
        body=body,
        delta_hat=spread.value,
        vol_nth_root=vol_nth_root,
        min_shadow=shadow.value,
        ratio=ratio,
        floor=floor,
        spread_branch=spread.branch,
        min_shadow_branch=shadow.branch,
    )


@dataclass(frozen=True)
class ShephardReport:
    """Minimal shadow of a body against the equal-volume ball's shadow."""

    n: int
    volume: float
    min_shadow: float
    ball_shadow: float
    shadow_ratio: float
    ball_ratio: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "volume": self.volume,
            "min_shadow": self.min_shadow,
            "ball_shadow": self.ball_shadow,
            "shadow_ratio": self.shadow_ratio,
            "ball_ratio": self.ball_ratio,
        }


def shephard_demonstration(
    n: int,
    rng: RandomSource | None = None,
    body: SymmetricHPolytope | None = None,
) -> ShephardReport:
    """Compare a large-shadow body's minimal shadow with the ball's shadow.

    The ball of equal volume has every shadow equal to
    ``ball_shadow_ratio(n) * volume^((n-1)/n)``; the report carries both
    that value (computed from the ball's radius) and the body's minimal
    shadow, whose quotient shows bodies can out-shadow the ball at equal
    volume.  No threshold is asserted: the separation is asymptotic.
    """
    if rng is None:
        rng = RandomSource(_PATHOLOGY_SEED + 1)
    if body is None:
        body = construct_pathological(n, rng=rng.fork(0xB0D)).body
    volume = body.volume
    radius = (volume / unit_ball_volume(n)) ** (1.0 / n)
    ball_shadow = unit_ball_volume(n - 1) * radius ** (n - 1)
    shadow = min_shadow_direction(body, rng=rng.fork(0x51B))
    return ShephardReport(
        n=n,
        volume=volume,
        min_shadow=shadow.value,
        ball_shadow=ball_shadow,
        shadow_ratio=shadow.value / ball_shadow,
        ball_ratio=ball_shadow_ratio(n),
    )
