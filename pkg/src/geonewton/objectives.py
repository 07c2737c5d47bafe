"""Test objectives with closed-form derivative oracles.

Two analytic families are shipped so that every finite-difference quantity in
the package can be checked against an independent formula:

* :class:`Rayleigh` -- J(x) = x^T A x on the sphere, A symmetric.  Critical
  points are the eigenvectors of A; the value there is the eigenvalue.
* :class:`ProcrustesTrace` -- J(Q) = -trace(A^T Q) on SO(3).  The minimizer is
  the orthogonal polar factor of A.

Any object exposing ``value(p)`` (and optionally ``analytic_gradient(p)``)
works with the finite-difference and Newton machinery; these two are simply
the families with oracles.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, ContractError
from .manifolds import (
    ManifoldPoint,
    Rotations3,
    Sphere,
    TangentBasis,
    TangentVector,
)


class Rayleigh:
    """Quadratic form x^T A x restricted to the unit sphere."""

    kind = "rayleigh"

    def __init__(self, matrix):
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ContractError("Rayleigh matrix must be square")
        if np.linalg.norm(a - a.T) > 1e-12:
            raise ContractError("Rayleigh matrix must be symmetric")
        self.matrix = a.copy()
        self.matrix.setflags(write=False)

    def _check_point(self, p: ManifoldPoint) -> None:
        if not isinstance(p.manifold, Sphere) or p.manifold.ambient_dim != self.matrix.shape[0]:
            raise ConfigurationError(
                f"Rayleigh objective of size {self.matrix.shape[0]} needs a matching sphere point"
            )

    def value(self, p: ManifoldPoint) -> float:
        self._check_point(p)
        x = p.coords
        return float(x @ self.matrix @ x)

    def analytic_gradient(self, p: ManifoldPoint) -> TangentVector:
        """grad J(x) = 2 (A x - (x^T A x) x); vanishes exactly at eigenvectors."""
        self._check_point(p)
        x = p.coords
        ax = self.matrix @ x
        return TangentVector(p, 2.0 * (ax - float(x @ ax) * x))

    def analytic_hessian_matrix(self, basis: TangentBasis) -> np.ndarray:
        """Hessian 2(P A P - (x^T A x) P) restricted to T_xM, expressed in the
        given orthonormal basis."""
        p = basis.base
        self._check_point(p)
        value = self.value(p)
        dim = len(basis)
        out = np.empty((dim, dim))
        for i in range(dim):
            bi = basis.vectors[i].coords
            for j in range(i, dim):
                bj = basis.vectors[j].coords
                out[i, j] = out[j, i] = 2.0 * (float(bi @ self.matrix @ bj) - value * (i == j))
        return out


class ProcrustesTrace:
    """Negated trace alignment -trace(A^T Q) on the rotation group."""

    kind = "procrustes"

    def __init__(self, matrix):
        a = np.asarray(matrix, dtype=float)
        if a.shape != (3, 3):
            raise ContractError("ProcrustesTrace matrix must be 3x3")
        self.matrix = a.copy()
        self.matrix.setflags(write=False)

    def _check_point(self, p: ManifoldPoint) -> None:
        if not isinstance(p.manifold, Rotations3):
            raise ConfigurationError("ProcrustesTrace objective needs a rotation point")

    def value(self, p: ManifoldPoint) -> float:
        self._check_point(p)
        return -float(np.sum(self.matrix * p.matrix))

    def analytic_gradient(self, p: ManifoldPoint) -> TangentVector:
        """Tangent projection of the ambient gradient -A at Q."""
        self._check_point(p)
        q = p.matrix
        body = q.T @ self.matrix
        skew = 0.5 * (body - body.T)
        return TangentVector(p, -(q @ skew).reshape(9))

    def polar_factor(self) -> ManifoldPoint:
        """Orthogonal polar factor of A: the critical point the iteration
        should find when A has positive determinant."""
        u, _, vt = np.linalg.svd(self.matrix)
        rot = u @ vt
        if np.linalg.det(rot) <= 0:
            raise ContractError("matrix has no rotation polar factor (det <= 0)")
        return Rotations3().point_from_matrix(rot)


def evaluate(objective, p: ManifoldPoint) -> float:
    """Function-call form of objective evaluation."""
    return objective.value(p)
