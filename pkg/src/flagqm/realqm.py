"""Physics on the real side: density operators, reduced states, locality embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .complexqm import ComplexOperator, is_density
from .realmap import (
    RealOperator,
    RealState,
    compact_operator,
    flag_basis,
    flag_tensor_states,
    real_expectation,
)
from .tensor_core import ATOL, SystemShape, frozen, kron, max_abs, partial_trace


@dataclass(frozen=True)
class RealDensity:
    """Trace-normalized real density: ``re x I^(N) + im x J^(N)``.

    The blocks already carry the factor 1/2, so ``re`` is half the real part of
    the complex density matrix and the represented operator has unit trace.
    """

    re: np.ndarray
    im: np.ndarray
    shape: SystemShape

    def __post_init__(self):
        d = self.shape.dim
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if re.shape != (d, d) or im.shape != (d, d):
            raise ValueError(f"blocks {re.shape}/{im.shape} do not fit {self.shape.dims}")
        object.__setattr__(self, "re", frozen(re))
        object.__setattr__(self, "im", frozen(im))

    def as_operator(self) -> RealOperator:
        return RealOperator(self.re, self.im, self.shape)

    def expanded(self) -> np.ndarray:
        return self.as_operator().expanded()

    def trace(self) -> float:
        # tr I^(N) = 2, tr J^(N) = 0
        return float(2 * np.trace(self.re))

    def expectation(self, A: RealOperator) -> float:
        """tr[rho T(A)], evaluated in compact form."""
        prod = self.as_operator().dot(A)
        return float(2 * np.trace(prod.re))


def t1_map(rho: ComplexOperator) -> RealDensity:
    if not is_density(rho.matrix):
        raise ValueError("t1_map is defined for density operators only")
    m = rho.matrix
    return RealDensity(m.real / 2, m.imag / 2, rho.shape)


def t1_inv(rho: RealDensity) -> ComplexOperator:
    return ComplexOperator(2 * (rho.re + 1j * rho.im), rho.shape)


def pure_density(v: RealState) -> np.ndarray:
    """Expanded projector onto a real state's canonical representative."""
    e = v.expanded()
    return np.outer(e, e)


def real_partial_trace(rho, shape: SystemShape, keep: Iterable[int], atol: float = ATOL) -> RealDensity:
    """Reduced real density of the parties in ``keep``.

    ``rho`` is a :class:`RealDensity` or an expanded matrix in grouped order.
    Both the main factor and the flag of every discarded party are traced out
    of the expanded operator, and the result is compacted with the smaller
    flag basis.  Summation runs in a single ``einsum`` pass in index order.
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep or len(keep) == shape.n:
        raise ValueError("keep must be a non-empty proper subset of the parties")
    if keep[0] < 0 or keep[-1] >= shape.n:
        raise ValueError(f"keep {keep} out of range for {shape.n} parties")
    m = rho.expanded() if isinstance(rho, RealDensity) else np.asarray(rho, dtype=float)
    grouped = shape.grouped()
    kept_axes = keep + [shape.n + k for k in keep]
    reduced = partial_trace(m, grouped, kept_axes)
    sub = shape.subsystem(keep)
    op, residual = compact_operator(reduced, sub)
    if residual > atol:
        raise ArithmeticError(f"reduced operator left the I/J span (residual {residual:.3g})")
    return RealDensity(op.re, op.im, sub)


def independent_prep(factors: Sequence[RealState]) -> RealState:
    """Compose per-party states with the flag tensor product, left to right."""
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    out = factors[0]
    for f in factors[1:]:
        out = flag_tensor_states(out, f)
    return out


@dataclass(frozen=True)
class IndependentPreparation:
    factors: tuple[RealState, ...]
    state: RealState

    @classmethod
    def of(cls, *factors: RealState) -> "IndependentPreparation":
        return cls(tuple(factors), independent_prep(factors))


def embed_local(A: RealOperator, shape: SystemShape, i: int) -> RealOperator:
    """Embed an operator on party ``i`` into the composite system.

    Padding is by identities on the other mains; the flag handling is implicit
    in the compact pair, so this is the flag tensor product with identities.
    """
    if not 0 <= i < shape.n:
        raise IndexError(f"party {i} out of range for {shape.n} parties")
    if A.shape.dims != (shape.dims[i],):
        raise ValueError(f"operator on {A.shape.dims} cannot act on party {i} of {shape.dims}")
    left = np.eye(int(np.prod(shape.dims[:i], dtype=int)))
    right = np.eye(int(np.prod(shape.dims[i + 1:], dtype=int)))
    return RealOperator(kron(left, A.re, right), kron(left, A.im, right), shape)


@dataclass(frozen=True)
class LocalEmbedding:
    target: int
    shape: SystemShape
    operator: RealOperator

    @classmethod
    def of(cls, A: RealOperator, shape: SystemShape, i: int) -> "LocalEmbedding":
        return cls(i, shape, embed_local(A, shape, i))


def is_projector_image(P: RealOperator, atol: float = ATOL) -> bool:
    sq = P.dot(P)
    sym = P.transpose()
    return max(max_abs(sq.re - P.re), max_abs(sq.im - P.im),
               max_abs(sym.re - P.re), max_abs(sym.im - P.im)) <= atol


def real_born(state: RealState, proj: RealOperator, atol: float = ATOL) -> float:
    if state.shape != proj.shape:
        raise ValueError(f"state on {state.shape.dims} vs projector on {proj.shape.dims}")
    if not is_projector_image(proj, atol):
        raise ValueError("real_born needs the image of a projector")
    p = real_expectation(state, proj)
    return float(min(max(p, 0.0), 1.0))


def mixture(weights: Sequence[float], densities: Sequence[RealDensity]) -> RealDensity:
    """Finite convex combination of real densities (shared randomness)."""
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(densities) or not densities:
        raise ValueError("need one weight per density")
    if np.any(weights < 0) or abs(weights.sum() - 1) > ATOL:
        raise ValueError("weights must form a probability distribution")
    shape = densities[0].shape
    re = sum(w * d.re for w, d in zip(weights, densities))
    im = sum(w * d.im for w, d in zip(weights, densities))
    return RealDensity(re, im, shape)
