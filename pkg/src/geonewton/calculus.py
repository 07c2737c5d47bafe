"""Finite-difference extraction of the retraction-induced gradient and
Hessian.

The gradient and Hessian at p are read off the second-order expansion of the
pulled-back objective t -> J(R_p(t e_i)) in an orthonormal tangent basis:
central differences give the first-order coefficients, a four-point stencil
gives the second-order ones.  Away from critical points the Hessian obtained
this way depends on the retraction family unless the family has order >= 2.

Step sizes balance truncation against rounding: eps^(1/3) for first
differences, eps^(1/4) for second differences.  The steps are deliberately
independent of the objective's magnitude: probing cJ at the same points as J
makes the extracted derivatives exactly c-homogeneous, which the Newton step
relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, EvaluationError
from .manifolds import ManifoldPoint, TangentBasis, TangentVector
from .retractions import RetractionSpec, retract

_EPS = float(np.finfo(float).eps)
GRADIENT_STEP_FACTOR = _EPS ** (1.0 / 3.0)  # ~6.1e-6
HESSIAN_STEP_FACTOR = _EPS ** 0.25  # ~1.2e-4

# Central differences quantize to ulp(J)/(2h); the wider step trades truncation
# for resolution and is what the Newton driver switches to near critical points,
# where the cubic term of the pullback vanishes and truncation is harmless.
REFINED_GRADIENT_STEP_FACTOR = _EPS ** 0.2  # ~7.4e-4


@dataclass(frozen=True, eq=False)
class GradientResult:
    """Finite-difference gradient with the step size that produced it."""

    vector: TangentVector
    step: float


@dataclass(frozen=True, eq=False)
class SymmetricOperator:
    """Hessian as a symmetric matrix in an orthonormal tangent basis."""

    base: ManifoldPoint
    basis: TangentBasis
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        dim = len(self.basis)
        if not np.array_equal(self.base.coords, self.basis.base.coords):
            raise ContractError("operator base point differs from its basis base point")
        if mat.shape != (dim, dim):
            raise ContractError("operator matrix does not match the basis dimension")
        if not np.array_equal(mat, mat.T):
            raise ContractError("operator matrix must be exactly symmetric")
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def apply(self, v: TangentVector) -> TangentVector:
        """Operator action: coordinates in the basis, multiply, reassemble."""
        coeffs = self.basis.coordinates(v)
        return self.basis.from_coordinates(self.matrix @ coeffs)


def _probe(objective, spec: RetractionSpec, p: ManifoldPoint, coords: np.ndarray) -> float:
    value = objective.value(retract(spec, TangentVector(p, coords)))
    if not np.isfinite(value):
        raise EvaluationError("objective returned a non-finite value during a probe")
    return value


def gradient_fd(
    objective,
    spec: RetractionSpec,
    p: ManifoldPoint,
    basis: TangentBasis | None = None,
    step_factor: float = GRADIENT_STEP_FACTOR,
) -> GradientResult:
    """Central-difference gradient of J o R_p at 0.

    Component i is [J(R_p(h e_i)) - J(R_p(-h e_i))] / (2h) over the basis
    vectors; the result is assembled as an ambient tangent vector and is
    independent of the basis choice up to finite-difference error.
    """
    manifold = p.manifold
    spec.validate_for(manifold)
    if basis is None:
        basis = manifold.tangent_basis(p)
    h = step_factor
    ambient = np.zeros(manifold.ambient_dim)
    for vec in basis.vectors:
        plus = _probe(objective, spec, p, h * vec.coords)
        minus = _probe(objective, spec, p, -h * vec.coords)
        ambient += ((plus - minus) / (2.0 * h)) * vec.coords
    return GradientResult(vector=TangentVector(p, ambient), step=h)


def hessian_fd(
    objective,
    spec: RetractionSpec,
    p: ManifoldPoint,
    basis: TangentBasis | None = None,
) -> SymmetricOperator:
    """Four-point-stencil Hessian of J o R_p at 0, symmetrized exactly.

    H_ij = [J(R(h e_i + h e_j)) - J(R(h e_i - h e_j))
            - J(R(-h e_i + h e_j)) + J(R(-h e_i - h e_j))] / (4 h^2)
    """
    manifold = p.manifold
    spec.validate_for(manifold)
    if basis is None:
        basis = manifold.tangent_basis(p)
    h = HESSIAN_STEP_FACTOR
    dim = len(basis)
    out = np.empty((dim, dim))
    for i in range(dim):
        ei = basis.vectors[i].coords
        for j in range(i, dim):
            ej = basis.vectors[j].coords
            pp = _probe(objective, spec, p, h * ei + h * ej)
            pm = _probe(objective, spec, p, h * ei - h * ej)
            mp = _probe(objective, spec, p, -h * ei + h * ej)
            mm = _probe(objective, spec, p, -h * ei - h * ej)
            out[i, j] = out[j, i] = (pp - pm - mp + mm) / (4.0 * h * h)
    out = 0.5 * (out + out.T)
    return SymmetricOperator(base=p, basis=basis, matrix=out)


def taylor_remainder(
    objective,
    spec: RetractionSpec,
    p: ManifoldPoint,
    v: TangentVector,
    gradient: GradientResult | None = None,
    hessian: SymmetricOperator | None = None,
) -> float:
    """|J(R_p(v)) - J(p) - <v, grad> - 1/2 <v, Hess v>|.

    The gradient and Hessian may be passed in so a sweep over many v reuses
    one extraction; they must then have been computed at p with this spec.
    """
    if gradient is None:
        gradient = gradient_fd(objective, spec, p)
    if hessian is None:
        hessian = hessian_fd(objective, spec, p)
    value = _probe(objective, spec, p, v.coords)
    base_value = objective.value(p)
    linear = float(np.dot(v.coords, gradient.vector.coords))
    quadratic = 0.5 * float(np.dot(v.coords, hessian.apply(v).coords))
    return abs(value - base_value - linear - quadratic)
