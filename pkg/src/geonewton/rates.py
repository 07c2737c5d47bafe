"""Empirical order-of-accuracy measurements via log-log slope regression.

Each measurement walks a decreasing ladder of scales, records one
nonnegative quantity per (direction, scale), and fits a least-squares line
through the surviving (log x, log y) points.  Values at or below the noise
floor are discarded before fitting; when fewer than two points survive the
estimate is flagged ``saturated`` rather than treated as a failure (a perfect
retraction legitimately measures zero everywhere).

Row-producing variants are exposed alongside each slope estimator so reports
can emit the raw measurements and refitting the emitted rows reproduces the
summary exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import gradient_fd, hessian_fd, taylor_remainder
from .errors import ContractError, InsufficientDataError, PreconditionError
from .manifolds import ManifoldPoint, TangentVector
from .newton import IterationTrace
from .retractions import RetractionSpec, inverse_retract, retract

DEFAULT_SCALES = tuple(2.0 ** (-k) for k in range(2, 13))
DEFAULT_NOISE_FLOOR = 1e-13

Row = tuple[int, float, float]  # (direction_id, x, y)


@dataclass(frozen=True)
class ScaleSweep:
    """A ladder of scales and the unit tangent directions to probe."""

    directions: tuple[TangentVector, ...]
    scales: tuple[float, ...] = DEFAULT_SCALES
    noise_floor: float = DEFAULT_NOISE_FLOOR

    def __post_init__(self):
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if not self.directions:
            raise ContractError("sweep needs at least one direction")
        if any(s <= 0 for s in self.scales):
            raise ContractError("scales must be positive")
        if any(a <= b for a, b in zip(self.scales, self.scales[1:])):
            raise ContractError("scales must be strictly decreasing")
        base = self.directions[0].base
        for d in self.directions:
            if abs(d.norm() - 1.0) > 1e-10:
                raise ContractError("sweep directions must be unit norm")
            if not np.array_equal(d.base.coords, base.coords):
                raise ContractError("sweep directions must share one base point")


@dataclass(frozen=True)
class SlopeEstimate:
    """Fitted exponent of a power law, with the log-intercept (the implicit
    constant) and fit quality."""

    slope: float
    intercept: float
    r_squared: float
    points_used: int
    saturated: bool

    @property
    def constant(self) -> float:
        return math.exp(self.intercept)


@dataclass(frozen=True)
class RateReport:
    """Per-step contraction data for an iteration trace."""

    pair_slopes: tuple[float, ...]
    fitted_rate: float
    fitted_constant: float
    pairs_used: int


def fit_loglog(xs, ys, floor: float = DEFAULT_NOISE_FLOOR) -> SlopeEstimate:
    """Least-squares line through (log x, log y) for the points with y above
    the floor.  Saturated when fewer than two points survive."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ContractError("xs and ys must be 1-d arrays of equal length")
    if np.any(xs <= 0):
        raise ContractError("xs must be strictly positive")
    if np.any(ys < 0):
        raise ContractError("ys must be nonnegative")
    mask = ys > floor
    used = int(mask.sum())
    if used < 2:
        return SlopeEstimate(
            slope=float("nan"),
            intercept=float("nan"),
            r_squared=0.0,
            points_used=used,
            saturated=True,
        )
    lx = np.log(xs[mask])
    ly = np.log(ys[mask])
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    pred = design @ np.array([slope, intercept])
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    r_squared = min(1.0, max(0.0, r_squared))
    return SlopeEstimate(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        points_used=used,
        saturated=False,
    )


def fit_rows(rows: list[Row], floor: float = DEFAULT_NOISE_FLOOR) -> SlopeEstimate:
    """Fit pooled (x, y) rows, ignoring the direction id column."""
    xs = [r[1] for r in rows]
    ys = [r[2] for r in rows]
    return fit_loglog(xs, ys, floor)


# --------------------------------------------------------------------------
# retraction order


def retraction_order_rows(spec: RetractionSpec, sweep: ScaleSweep) -> list[Row]:
    """d(R_p(s w), exp_p(s w)) for every direction w and scale s."""
    rows: list[Row] = []
    for direction_id, w in enumerate(sweep.directions):
        p = w.base
        manifold = p.manifold
        for s in sweep.scales:
            v = w.scaled(s)
            dist = manifold.geodesic_distance(retract(spec, v), manifold.exp_map(v))
            rows.append((direction_id, s, dist))
    return rows


def estimate_retraction_order(spec: RetractionSpec, sweep: ScaleSweep) -> SlopeEstimate:
    """Slope of the retraction-vs-exponential distance; a family of order k
    shows slope k + 1.  The exponential family itself saturates."""
    return fit_rows(retraction_order_rows(spec, sweep), sweep.noise_floor)


# --------------------------------------------------------------------------
# residual of the linearized gradient at a critical point


def critical_residual_rows(objective, spec: RetractionSpec, sweep: ScaleSweep) -> list[Row]:
    """|grad J(p) + Hess J(p) v| against |v|, where p walks away from the
    critical anchor point and v points back: anchor = R_p(v).

    The sweep directions must be based at the anchor, and the anchor must be
    critical (checked against the analytic gradient).
    """
    anchor = sweep.directions[0].base
    if objective.analytic_gradient(anchor).norm() > 1e-10:
        raise PreconditionError("residual sweep must be anchored at a critical point")
    rows: list[Row] = []
    for direction_id, w in enumerate(sweep.directions):
        for s in sweep.scales:
            p = retract(spec, w.scaled(s))
            v = inverse_retract(spec, p, anchor)
            basis = p.manifold.tangent_basis(p)
            grad = gradient_fd(objective, spec, p, basis=basis)
            hess = hessian_fd(objective, spec, p, basis=basis)
            residual = grad.vector.coords + hess.apply(v).coords
            rows.append((direction_id, v.norm(), float(np.linalg.norm(residual))))
    return rows


def critical_residual_slope(objective, spec: RetractionSpec, sweep: ScaleSweep) -> SlopeEstimate:
    """Expected slope 2: the residual shrinks quadratically in |v| for any
    retraction of order >= 1."""
    return fit_rows(critical_residual_rows(objective, spec, sweep), sweep.noise_floor)


# --------------------------------------------------------------------------
# distance deviation between two retracted rays


def distance_deviation_rows(
    spec: RetractionSpec,
    v_dir: TangentVector,
    w_dir: TangentVector,
    scales=DEFAULT_SCALES,
) -> list[Row]:
    """| d(R_p(s v), R_p(s w)) - s |v - w| | per scale, one direction pair."""
    p = v_dir.base
    manifold = p.manifold
    if not np.array_equal(w_dir.base.coords, p.coords):
        raise ContractError("direction pair must share one base point")
    gap = float(np.linalg.norm(v_dir.coords - w_dir.coords))
    rows: list[Row] = []
    for s in scales:
        d = manifold.geodesic_distance(retract(spec, v_dir.scaled(s)), retract(spec, w_dir.scaled(s)))
        rows.append((0, s, abs(d - s * gap)))
    return rows


def distance_deviation_slope(
    spec: RetractionSpec,
    v_dir: TangentVector,
    w_dir: TangentVector,
    scales=DEFAULT_SCALES,
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> SlopeEstimate:
    """Expected slope >= 2: retracted distances match tangent distances to
    second order."""
    return fit_rows(distance_deviation_rows(spec, v_dir, w_dir, scales), noise_floor)


# --------------------------------------------------------------------------
# cubic remainder of the second-order expansion


def taylor_remainder_rows(objective, spec: RetractionSpec, sweep: ScaleSweep) -> list[Row]:
    """Second-order Taylor remainder of J o R_p against |v|; one gradient and
    Hessian extraction is shared across the whole sweep."""
    p = sweep.directions[0].base
    grad = gradient_fd(objective, spec, p)
    hess = hessian_fd(objective, spec, p)
    rows: list[Row] = []
    for direction_id, w in enumerate(sweep.directions):
        for s in sweep.scales:
            rem = taylor_remainder(objective, spec, p, w.scaled(s), gradient=grad, hessian=hess)
            rows.append((direction_id, s, rem))
    return rows


def taylor_remainder_slope(objective, spec: RetractionSpec, sweep: ScaleSweep) -> SlopeEstimate:
    """Expected slope 3 away from critical points; may saturate at critical
    points where the remainder collapses."""
    return fit_rows(taylor_remainder_rows(objective, spec, sweep), sweep.noise_floor)


# --------------------------------------------------------------------------
# contraction rate of an iteration trace


def rate_from_errors(errors, floor: float = DEFAULT_NOISE_FLOOR) -> RateReport:
    """Fit log e_{k+1} against log e_k over the consecutive pairs with both
    entries above the floor."""
    errors = [float(e) for e in errors]
    pairs = [
        (errors[k], errors[k + 1])
        for k in range(len(errors) - 1)
        if errors[k] > floor and errors[k + 1] > floor
    ]
    if len(pairs) < 2:
        raise InsufficientDataError("need at least two usable error pairs to fit a rate")
    lx = np.log([a for a, _ in pairs])
    ly = np.log([b for _, b in pairs])
    design = np.column_stack([lx, np.ones_like(lx)])
    (rate, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    pair_slopes = tuple(float(np.log(b) / np.log(a)) for a, b in pairs)
    return RateReport(
        pair_slopes=pair_slopes,
        fitted_rate=float(rate),
        fitted_constant=float(np.exp(intercept)),
        pairs_used=len(pairs),
    )


def convergence_rate(
    trace: IterationTrace,
    p_star: ManifoldPoint,
    floor: float = DEFAULT_NOISE_FLOOR,
) -> RateReport:
    """Contraction rate of d(p_k, p*) along a Newton trace; quadratic
    convergence shows as fitted_rate 2.  The caller guarantees p_star is the
    critical point the trace approaches."""
    manifold = p_star.manifold
    errors = [manifold.geodesic_distance(p, p_star) for p in trace.points]
    return rate_from_errors(errors, floor)
