"""The geometric Newton iteration: solve the tangent-space system
Hess s = -grad at the current point, retract, repeat.

The method is deliberately pure -- no line search, no damping, no
quasi-Newton reuse -- so its local behavior can be measured as-is.  The only
safety device is a condition-number cap on the tangent Hessian: instead of a
silent near-singular solve the step raises (or the driver records)
``SingularHessian``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .calculus import (
    GradientResult,
    REFINED_GRADIENT_STEP_FACTOR,
    SymmetricOperator,
    gradient_fd,
    hessian_fd,
)
from .errors import ContractError, SingularHessianError
from .manifolds import ManifoldPoint, TangentVector
from .retractions import RetractionSpec, retract

_RESIDUAL_TOL = 1e-10
_REFINE_THRESHOLD = 1e-8


def _measure_gradient(objective, spec, p, basis) -> GradientResult:
    # Near critical points the default-step read is quantization-limited at
    # ~ulp(J)/(2h); a wider-step read resolves finer gradients there.  Keep
    # whichever measurement is smaller.
    grad = gradient_fd(objective, spec, p, basis=basis)
    if grad.vector.norm() < _REFINE_THRESHOLD:
        refined = gradient_fd(
            objective, spec, p, basis=basis, step_factor=REFINED_GRADIENT_STEP_FACTOR
        )
        if refined.vector.norm() < grad.vector.norm():
            return refined
    return grad


class NewtonStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    SINGULAR_HESSIAN = "singular_hessian"


@dataclass(frozen=True)
class NewtonConfig:
    retraction: RetractionSpec
    tol: float = 1e-12  # gradient-norm stop; sits above the FD noise floor
    max_iter: int = 50
    cond_cap: float = 1e12

    def __post_init__(self):
        if self.tol <= 0:
            raise ContractError("tol must be positive")
        if self.max_iter < 1:
            raise ContractError("max_iter must be at least 1")
        if self.cond_cap <= 1:
            raise ContractError("cond_cap must exceed 1")


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Full history of a Newton run: every iterate, its gradient norm, and the
    tangent step lengths between consecutive iterates."""

    points: tuple[ManifoldPoint, ...]
    grad_norms: tuple[float, ...]
    step_norms: tuple[float, ...]
    status: NewtonStatus

    def __post_init__(self):
        if len(self.points) != len(self.step_norms) + 1:
            raise ContractError("trace needs exactly one more point than steps")
        if len(self.grad_norms) != len(self.points):
            raise ContractError("trace needs one gradient norm per point")
        if any(g < 0 for g in self.grad_norms):
            raise ContractError("gradient norms must be nonnegative")

    @property
    def iterations(self) -> int:
        return len(self.step_norms)

    @property
    def final_point(self) -> ManifoldPoint:
        return self.points[-1]


def solve_tangent_system(
    operator: SymmetricOperator,
    gradient: TangentVector,
    cond_cap: float = 1e12,
) -> TangentVector:
    """Solve Hess s = -grad in basis coordinates and map s back to an ambient
    tangent vector.

    Raises ``SingularHessianError`` when the estimated condition number
    exceeds ``cond_cap`` (the invertibility assumption fails numerically) or
    when the solve leaves a residual above 1e-10 * (1 + |grad|).
    """
    base = operator.base
    if gradient.base is not base and not np.array_equal(gradient.base.coords, base.coords):
        raise ContractError("gradient is based at a different point than the operator")
    matrix = operator.matrix
    cond = float(np.linalg.cond(matrix))
    if not np.isfinite(cond) or cond > cond_cap:
        raise SingularHessianError(f"condition estimate {cond:.3e} exceeds cap {cond_cap:.3e}")
    rhs = -operator.basis.coordinates(gradient)
    try:
        coeffs = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularHessianError("tangent-space solve failed") from exc
    residual = float(np.linalg.norm(matrix @ coeffs + operator.basis.coordinates(gradient)))
    if residual > _RESIDUAL_TOL * (1.0 + float(np.linalg.norm(rhs))):
        raise SingularHessianError(f"solve residual {residual:.3e} too large")
    return operator.basis.from_coordinates(coeffs)


def newton_step_vector(
    objective,
    spec: RetractionSpec,
    p: ManifoldPoint,
    cond_cap: float = 1e12,
) -> TangentVector:
    """The Newton direction -Hess^{-1} grad at p, both extracted by finite
    differences under the same retraction."""
    basis = p.manifold.tangent_basis(p)
    grad = _measure_gradient(objective, spec, p, basis)
    hess = hessian_fd(objective, spec, p, basis=basis)
    return solve_tangent_system(hess, grad.vector, cond_cap=cond_cap)


def newton_step(
    objective,
    spec: RetractionSpec,
    p: ManifoldPoint,
    cond_cap: float = 1e12,
) -> ManifoldPoint:
    """One pure Newton update: retract the Newton direction, nothing else."""
    return retract(spec, newton_step_vector(objective, spec, p, cond_cap=cond_cap))


def newton_run(objective, config: NewtonConfig, p0: ManifoldPoint) -> IterationTrace:
    """Iterate newton_step from p0 until the gradient norm drops below
    config.tol, the iteration budget runs out, or the conditioning guard
    trips.  Gradient and Hessian are recomputed fresh at every iterate."""
    spec = config.retraction
    spec.validate_for(p0.manifold)
    points = [p0]
    grad_norms: list[float] = []
    step_norms: list[float] = []
    status = NewtonStatus.MAX_ITER

    current = p0
    for _ in range(config.max_iter + 1):
        basis = current.manifold.tangent_basis(current)
        grad = _measure_gradient(objective, spec, current, basis)
        grad_norms.append(grad.vector.norm())
        if grad_norms[-1] <= config.tol:
            status = NewtonStatus.CONVERGED
            break
        if len(step_norms) == config.max_iter:
            status = NewtonStatus.MAX_ITER
            break
        try:
            hess = hessian_fd(objective, spec, current, basis=basis)
            step = solve_tangent_system(hess, grad.vector, cond_cap=config.cond_cap)
        except SingularHessianError:
            status = NewtonStatus.SINGULAR_HESSIAN
            break
        current = retract(spec, step)
        points.append(current)
        step_norms.append(step.norm())

    return IterationTrace(
        points=tuple(points),
        grad_norms=tuple(grad_norms),
        step_norms=tuple(step_norms),
        status=status,
    )
