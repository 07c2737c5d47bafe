"""Deterministic random instances for experiments and tests.

Everything here draws from numpy's PCG64 generator seeded explicitly, so a
seed pins the full experiment byte-for-byte.  Rayleigh matrices whose
eigenvalue gaps fall below 1e-3 are resampled at seed+1, seed+2, ... to keep
Hessians at the target critical points comfortably invertible.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, ContractError
from .manifolds import (
    Manifold,
    ManifoldPoint,
    Rotations3,
    Sphere,
    TangentVector,
    hat,
    rotation_exp,
)
from .objectives import ProcrustesTrace, Rayleigh
from .rates import DEFAULT_NOISE_FLOOR, DEFAULT_SCALES, ScaleSweep

EIGENGAP_MIN = 1e-3
PROCRUSTES_SINGULAR_VALUES = (2.0, 1.5, 1.0)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_point(manifold: Manifold, rng: np.random.Generator) -> ManifoldPoint:
    if isinstance(manifold, Sphere):
        x = rng.standard_normal(manifold.ambient_dim)
        return manifold.point(x / np.linalg.norm(x))
    if isinstance(manifold, Rotations3):
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(0.0, np.pi)
        return manifold.point_from_matrix(rotation_exp(hat(angle * axis)))
    raise ConfigurationError(f"cannot sample points on {manifold!r}")


def random_tangent(p: ManifoldPoint, rng: np.random.Generator, unit: bool = True) -> TangentVector:
    v = p.manifold.tangent_project(p, rng.standard_normal(p.manifold.ambient_dim))
    if unit:
        v = v.scaled(1.0 / v.norm())
    return v


def make_sweep(
    p: ManifoldPoint,
    n_directions: int,
    seed: int,
    scales=DEFAULT_SCALES,
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> ScaleSweep:
    """Sweep with seeded unit directions at p."""
    rng = rng_for(seed)
    dirs = tuple(random_tangent(p, rng) for _ in range(n_directions))
    return ScaleSweep(directions=dirs, scales=tuple(scales), noise_floor=noise_floor)


def _rayleigh_candidate(seed: int, n: int) -> np.ndarray:
    rng = rng_for(seed)
    b = rng.uniform(-1.0, 1.0, size=(n, n))
    return 0.5 * (b + b.T)


def seeded_instance(seed: int, kind: str, n: int = 3):
    """Reproducible objective instance.

    ``rayleigh``: A = (B + B^T)/2 with B entries iid uniform[-1, 1]; resampled
    deterministically while the smallest eigenvalue gap is below 1e-3.
    ``procrustes``: A = R diag(2, 1.5, 1) with R a seeded rotation, so the
    polar factor (the optimum) is R itself.
    """
    if kind == "rayleigh":
        if n < 2:
            raise ContractError("rayleigh instances need n >= 2")
        attempt = int(seed)
        while True:
            a = _rayleigh_candidate(attempt, n)
            eigs = np.linalg.eigvalsh(a)
            if np.min(np.diff(eigs)) > EIGENGAP_MIN:
                return Rayleigh(a)
            attempt += 1
    if kind == "procrustes":
        rng = rng_for(seed)
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(0.0, np.pi)
        rot = rotation_exp(hat(angle * axis))
        return ProcrustesTrace(rot @ np.diag(PROCRUSTES_SINGULAR_VALUES))
    raise ConfigurationError(f"unknown objective kind {kind!r}")


def rayleigh_top_eigenvector(objective: Rayleigh) -> ManifoldPoint:
    """Eigenvector of the largest eigenvalue: the critical point the seeded
    Newton experiments aim for.  Sign fixed by the largest-magnitude entry."""
    _, vecs = np.linalg.eigh(objective.matrix)
    v = vecs[:, -1]
    lead = np.argmax(np.abs(v))
    if v[lead] < 0:
        v = -v
    return Sphere(objective.matrix.shape[0]).point(v)
