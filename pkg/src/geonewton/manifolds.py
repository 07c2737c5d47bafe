"""Embedded representations of the unit sphere S^{n-1} and the rotation
group SO(3).

Points and tangent vectors are stored as ambient coordinate vectors: length
n for the sphere, length 9 (row-major flattened 3x3 matrix) for rotations.
The metric is the ambient Euclidean dot product, which for rotations equals
the trace inner product trace(U^T V) on the reshaped matrices.

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent use needs no synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, CutLocusError

POINT_TOL = 1e-12  # ~100x double-precision epsilon
_BASIS_SKIP_TOL = 1e-8  # Gram-Schmidt candidates shorter than this are dropped
_CUT_LOCUS_MARGIN = 1e-6


def _as_vector(coords, dim: int) -> np.ndarray:
    arr = np.asarray(coords, dtype=float)
    if arr.shape != (dim,):
        raise ContractError(f"expected an ambient vector of length {dim}, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """A point on an embedded manifold, held in ambient coordinates."""

    manifold: "Manifold"
    coords: np.ndarray

    def __post_init__(self):
        coords = _as_vector(self.coords, self.manifold.ambient_dim)
        object.__setattr__(self, "coords", coords)
        self.manifold._check_point(coords)

    @property
    def matrix(self) -> np.ndarray:
        """Coordinates reshaped to 3x3 (rotations only)."""
        return self.coords.reshape(3, 3)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """An element of T_pM, in the same ambient coordinates as its base point."""

    base: ManifoldPoint
    coords: np.ndarray

    def __post_init__(self):
        coords = _as_vector(self.coords, self.base.manifold.ambient_dim)
        object.__setattr__(self, "coords", coords)
        self.base.manifold._check_tangent(self.base, coords)

    @property
    def matrix(self) -> np.ndarray:
        return self.coords.reshape(3, 3)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def scaled(self, t: float) -> "TangentVector":
        return TangentVector(self.base, t * self.coords)


@dataclass(frozen=True, eq=False)
class TangentBasis:
    """Orthonormal frame for T_pM; used to express gradients as coordinate
    vectors and Hessians as symmetric matrices."""

    base: ManifoldPoint
    vectors: tuple[TangentVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        gram = self.gram()
        if not np.allclose(gram, np.eye(len(self.vectors)), atol=1e-10):
            raise ContractError("basis vectors are not orthonormal")

    def __len__(self) -> int:
        return len(self.vectors)

    def gram(self) -> np.ndarray:
        mat = np.array([v.coords for v in self.vectors])
        return mat @ mat.T

    def coordinates(self, v: TangentVector) -> np.ndarray:
        """Coefficients of v in this frame."""
        if v.base is not self.base and not np.array_equal(v.base.coords, self.base.coords):
            raise ContractError("tangent vector is based at a different point")
        return np.array([float(np.dot(b.coords, v.coords)) for b in self.vectors])

    def from_coordinates(self, coeffs) -> TangentVector:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (len(self.vectors),):
            raise ContractError("coefficient vector has the wrong length")
        ambient = np.zeros(self.base.manifold.ambient_dim)
        for c, b in zip(coeffs, self.vectors):
            ambient += c * b.coords
        return TangentVector(self.base, ambient)


class Manifold:
    """Common interface for the embedded manifolds below."""

    intrinsic_dim: int
    ambient_dim: int

    def point(self, coords) -> ManifoldPoint:
        return ManifoldPoint(self, coords)

    def tangent(self, p: ManifoldPoint, coords) -> TangentVector:
        return TangentVector(p, coords)

    def zero_tangent(self, p: ManifoldPoint) -> TangentVector:
        return TangentVector(p, np.zeros(self.ambient_dim))

    def inner(self, u: TangentVector, v: TangentVector) -> float:
        """Riemannian inner product of two tangent vectors at the same point."""
        if u.base is not v.base and not np.array_equal(u.base.coords, v.base.coords):
            raise ContractError("inner product requires tangent vectors at the same base point")
        return float(np.dot(u.coords, v.coords))

    def norm(self, v: TangentVector) -> float:
        return v.norm()

    # subclass responsibilities -------------------------------------------------

    def _check_point(self, coords: np.ndarray) -> None:
        raise NotImplementedError

    def _check_tangent(self, p: ManifoldPoint, coords: np.ndarray) -> None:
        raise NotImplementedError

    def tangent_project(self, p: ManifoldPoint, w) -> TangentVector:
        raise NotImplementedError

    def exp_map(self, v: TangentVector) -> ManifoldPoint:
        raise NotImplementedError

    def log_map(self, p: ManifoldPoint, q: ManifoldPoint) -> TangentVector:
        raise NotImplementedError

    def geodesic_distance(self, p: ManifoldPoint, q: ManifoldPoint) -> float:
        raise NotImplementedError

    def tangent_basis(self, p: ManifoldPoint) -> TangentBasis:
        raise NotImplementedError


class Sphere(Manifold):
    """Unit sphere S^{n-1} embedded in R^n."""

    def __init__(self, ambient_dim: int):
        if ambient_dim < 2:
            raise ContractError("sphere needs ambient dimension >= 2")
        self.ambient_dim = int(ambient_dim)
        self.intrinsic_dim = self.ambient_dim - 1

    def __repr__(self):
        return f"Sphere({self.ambient_dim})"

    def __eq__(self, other):
        return isinstance(other, Sphere) and other.ambient_dim == self.ambient_dim

    def __hash__(self):
        return hash(("sphere", self.ambient_dim))

    def _check_point(self, coords):
        if abs(np.linalg.norm(coords) - 1.0) > POINT_TOL:
            raise ContractError("sphere point is not unit length")

    def _check_tangent(self, p, coords):
        if abs(np.dot(p.coords, coords)) > POINT_TOL * max(1.0, float(np.linalg.norm(coords))):
            raise ContractError("vector is not tangent to the sphere at its base point")

    def tangent_project(self, p, w):
        w = np.asarray(w, dtype=float)
        return TangentVector(p, w - np.dot(p.coords, w) * p.coords)

    def exp_map(self, v):
        """Great-circle step: cos(|v|) p + sin(|v|) v/|v|, continuous at v = 0."""
        p = v.base
        n = v.norm()
        out = np.cos(n) * p.coords + np.sinc(n / np.pi) * v.coords
        out = out / np.linalg.norm(out)
        return ManifoldPoint(self, out)

    def geodesic_distance(self, p, q):
        # atan2 of (rejection norm, dot) equals arccos of the clamped dot but
        # stays accurate when the separation is far below sqrt(eps).
        c = float(np.dot(p.coords, q.coords))
        rej = q.coords - c * p.coords
        return float(np.arctan2(np.linalg.norm(rej), c))

    def log_map(self, p, q):
        c = float(np.dot(p.coords, q.coords))
        rej = q.coords - c * p.coords
        s = float(np.linalg.norm(rej))
        theta = float(np.arctan2(s, c))
        if theta >= np.pi - _CUT_LOCUS_MARGIN:
            raise CutLocusError("points are antipodal or too close to the cut locus")
        if s < 1e-12:
            # theta/sin(theta) -> 1; the rejection itself is accurate enough
            return TangentVector(p, rej)
        return TangentVector(p, rej * (theta / s))

    def tangent_basis(self, p):
        """Gram-Schmidt over the ambient standard basis, dropping the
        near-degenerate candidate aligned with p. Deterministic in index order."""

        def sweep(vec):
            vec = vec - np.dot(p.coords, vec) * p.coords
            for b in vectors:
                vec = vec - np.dot(b, vec) * b
            return vec

        vectors: list[np.ndarray] = []
        for i in range(self.ambient_dim):
            cand = np.zeros(self.ambient_dim)
            cand[i] = 1.0
            cand = sweep(cand)
            norm = np.linalg.norm(cand)
            if norm < _BASIS_SKIP_TOL:
                continue
            # normalizing a short candidate amplifies its residual normal
            # component, so orthogonalize once more after scaling
            cand = sweep(cand / norm)
            vectors.append(cand / np.linalg.norm(cand))
            if len(vectors) == self.intrinsic_dim:
                break
        return TangentBasis(p, tuple(TangentVector(p, b) for b in vectors))


# Canonical so(3) generators, Frobenius norm sqrt(2) each.
SO3_GENERATORS = (
    np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]),
    np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]),
    np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
)


def hat(omega) -> np.ndarray:
    """3-vector to skew-symmetric matrix."""
    x, y, z = np.asarray(omega, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(mat) -> np.ndarray:
    """Inverse of :func:`hat` (reads the strictly lower triangle)."""
    mat = np.asarray(mat, dtype=float)
    return np.array([mat[2, 1], mat[0, 2], mat[1, 0]])


def rotation_exp(omega_hat: np.ndarray) -> np.ndarray:
    """Rodrigues form of expm on so(3), stable for all angles."""
    theta = float(np.linalg.norm(vee(omega_hat)))
    a = np.sinc(theta / np.pi)  # sin(theta)/theta
    b = 0.5 * np.sinc(theta / (2.0 * np.pi)) ** 2  # (1 - cos(theta))/theta^2
    return np.eye(3) + a * omega_hat + b * (omega_hat @ omega_hat)


def rotation_angle(rot: np.ndarray) -> float:
    """Rotation angle in [0, pi], accurate near zero."""
    skew = 0.5 * (rot - rot.T)
    s = float(np.linalg.norm(vee(skew)))  # |sin(angle)|
    c = 0.5 * (float(np.trace(rot)) - 1.0)
    return float(np.arctan2(s, c))


def rotation_log(rot: np.ndarray) -> np.ndarray:
    """Principal matrix logarithm of a rotation, Rodrigues closed form with a
    series fallback below angle 1e-4; raises near the cut locus."""
    theta = rotation_angle(rot)
    if theta >= np.pi - _CUT_LOCUS_MARGIN:
        raise CutLocusError("rotation angle too close to pi for a stable logarithm")
    skew = 0.5 * (rot - rot.T)
    if theta < 1e-4:
        factor = 1.0 + theta**2 / 6.0 + 7.0 * theta**4 / 360.0
    else:
        factor = theta / np.sin(theta)
    return factor * skew


class Rotations3(Manifold):
    """Rotation group SO(3); ambient coordinates are row-major flattened 3x3
    matrices and the metric is trace(U^T V)."""

    ambient_dim = 9
    intrinsic_dim = 3

    def __repr__(self):
        return "Rotations3()"

    def __eq__(self, other):
        return isinstance(other, Rotations3)

    def __hash__(self):
        return hash("rotations3")

    def point_from_matrix(self, mat) -> ManifoldPoint:
        return ManifoldPoint(self, np.asarray(mat, dtype=float).reshape(9))

    def identity(self) -> ManifoldPoint:
        return self.point_from_matrix(np.eye(3))

    def _check_point(self, coords):
        q = coords.reshape(3, 3)
        if np.linalg.norm(q.T @ q - np.eye(3)) > POINT_TOL:
            raise ContractError("matrix is not orthogonal")
        if np.linalg.det(q) <= 0:
            raise ContractError("matrix has non-positive determinant")

    def _check_tangent(self, p, coords):
        body = p.matrix.T @ coords.reshape(3, 3)
        scale = max(1.0, float(np.linalg.norm(coords)))
        if np.linalg.norm(body + body.T) > POINT_TOL * scale:
            raise ContractError("Q^T V is not skew-symmetric")

    def tangent_project(self, p, w):
        q = p.matrix
        body = q.T @ np.asarray(w, dtype=float).reshape(3, 3)
        skew = 0.5 * (body - body.T)
        return TangentVector(p, (q @ skew).reshape(9))

    def exp_map(self, v):
        q = v.base.matrix
        body = q.T @ v.matrix
        body = 0.5 * (body - body.T)
        return self.point_from_matrix(q @ rotation_exp(body))

    def geodesic_distance(self, p, q):
        rel = p.matrix.T @ q.matrix
        return float(np.sqrt(2.0) * rotation_angle(rel))

    def log_map(self, p, q):
        rel = p.matrix.T @ q.matrix
        return TangentVector(p, (p.matrix @ rotation_log(rel)).reshape(9))

    def tangent_basis(self, p):
        q = p.matrix
        vecs = tuple(
            TangentVector(p, (q @ gen).reshape(9) / np.sqrt(2.0)) for gen in SO3_GENERATORS
        )
        return TangentBasis(p, vecs)


def rotation_about_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
