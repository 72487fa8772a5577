"""Random test objects.

Every sampler takes an explicit ``numpy.random.Generator``; the project uses
``numpy.random.default_rng`` (PCG64 bit generator seeded through SeedSequence),
which is reproducible across platforms for a given seed.
"""

from __future__ import annotations

import numpy as np

from .complexqm import ComplexOperator, ComplexState
from .tensor_core import SystemShape


def suite_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent PCG64 stream per check so suites don't depend on run order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_shape(rng: np.random.Generator, max_n: int = 3, max_d: int = 3, min_n: int = 1) -> SystemShape:
    n = int(rng.integers(min_n, max_n + 1))
    return SystemShape(tuple(int(d) for d in rng.integers(2, max_d + 1, size=n)))


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_state(rng: np.random.Generator, shape: SystemShape) -> ComplexState:
    return ComplexState(random_vector(rng, shape.dim), shape)


def random_matrix(rng: np.random.Generator, shape: SystemShape) -> ComplexOperator:
    d = shape.dim
    return ComplexOperator(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)), shape)


def random_hermitian(rng: np.random.Generator, shape: SystemShape) -> ComplexOperator:
    m = random_matrix(rng, shape).matrix
    return ComplexOperator((m + m.conj().T) / 2, shape, "hermitian")


def random_unitary(rng: np.random.Generator, shape: SystemShape) -> ComplexOperator:
    m = random_matrix(rng, shape).matrix
    q, r = np.linalg.qr(m)
    # fix column phases so the distribution is Haar
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return ComplexOperator(q, shape, "unitary")


def random_density(rng: np.random.Generator, shape: SystemShape, rank: int | None = None) -> ComplexOperator:
    d = shape.dim
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return ComplexOperator(rho / np.trace(rho).real, shape, "density")


def random_projector(rng: np.random.Generator, shape: SystemShape) -> ComplexOperator:
    u = random_unitary(rng, shape).matrix
    k = int(rng.integers(1, shape.dim + 1))
    cols = u[:, :k]
    p = cols @ cols.conj().T
    return ComplexOperator((p + p.conj().T) / 2, shape, "projector")


def random_ensemble_projectors(rng: np.random.Generator, shape: SystemShape) -> list[ComplexOperator]:
    """Random complete orthogonal set of projectors from a random basis split."""
    u = random_unitary(rng, shape).matrix
    d = shape.dim
    cuts = sorted(set(int(c) for c in rng.integers(1, d, size=int(rng.integers(0, d)))))
    bounds = [0] + cuts + [d]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        cols = u[:, lo:hi]
        p = cols @ cols.conj().T
        out.append(ComplexOperator((p + p.conj().T) / 2, shape, "projector"))
    return out
