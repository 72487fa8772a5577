"""Dense tensor-product arithmetic over multipartite shapes.

Storage is row-major with big-endian subsystem order: the first factor
varies slowest, so index ``(k_1, ..., k_N)`` reads like the ket ``|k_1...k_N>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Iterable, Sequence

import numpy as np

ATOL = 1e-9


@dataclass(frozen=True)
class SystemShape:
    """Ordered local dimensions of an N-party system."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a system needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def of(cls, *dims: int) -> "SystemShape":
        return cls(tuple(dims))

    @classmethod
    def qubits(cls, n: int) -> "SystemShape":
        return cls((2,) * n)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        """Main (complex) dimension D."""
        return prod(self.dims)

    @property
    def expanded_dim(self) -> int:
        """Real dimension once every party carries a two-level flag."""
        return self.dim * 2**self.n

    def grouped(self) -> "SystemShape":
        """Shape of the expanded space in grouped order: all mains, then all flags."""
        return SystemShape(self.dims + (2,) * self.n)

    def interleaved(self) -> "SystemShape":
        """Shape of the expanded space in per-party order (m1, f1, m2, f2, ...)."""
        return SystemShape(tuple(x for d in self.dims for x in (d, 2)))

    def subsystem(self, keep: Iterable[int]) -> "SystemShape":
        return SystemShape(tuple(self.dims[i] for i in keep))

    def __add__(self, other: "SystemShape") -> "SystemShape":
        return SystemShape(self.dims + other.dims)


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of vectors or matrices, left factor slowest."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, factors)


def _check_perm(perm: Sequence[int], k: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if len(perm) != k or sorted(perm) != list(range(k)):
        raise ValueError(f"{perm} is not a permutation of 0..{k - 1}")
    return perm


def permute_subsystems(v: np.ndarray, shape: SystemShape, perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a vector so that factor ``perm[j]`` lands at slot j.

    ``shape`` describes ``v``'s current factor order.
    """
    v = np.asarray(v)
    perm = _check_perm(perm, shape.n)
    if v.shape != (shape.dim,):
        raise ValueError(f"vector of length {v.shape} does not match shape {shape.dims}")
    return v.reshape(shape.dims).transpose(perm).reshape(-1)


def permute_operator(m: np.ndarray, shape: SystemShape, perm: Sequence[int]) -> np.ndarray:
    """Operator version of :func:`permute_subsystems` (acts on rows and columns)."""
    m = np.asarray(m)
    perm = _check_perm(perm, shape.n)
    if m.shape != (shape.dim, shape.dim):
        raise ValueError(f"matrix of shape {m.shape} does not match shape {shape.dims}")
    n = shape.n
    axes = list(perm) + [n + p for p in perm]
    return m.reshape(shape.dims * 2).transpose(axes).reshape(shape.dim, shape.dim)


def inverse_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for j, p in enumerate(perm):
        inv[p] = j
    return tuple(inv)


def partial_trace(rho: np.ndarray, shape: SystemShape, keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept factors stay in ascending order regardless of how ``keep`` is given.
    """
    rho = np.asarray(rho)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must be non-empty; use np.trace for the full trace")
    if keep[0] < 0 or keep[-1] >= shape.n:
        raise ValueError(f"keep {keep} out of range for {shape.n} subsystems")
    if rho.shape != (shape.dim, shape.dim):
        raise ValueError(f"matrix of shape {rho.shape} does not match shape {shape.dims}")
    n = shape.n
    t = rho.reshape(shape.dims * 2)
    # einsum labels: row i, column n+i; traced subsystems share a label
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    d = prod(shape.dims[i] for i in keep)
    return reduced.reshape(d, d)


def grouped_from_interleaved(shape: SystemShape) -> tuple[int, ...]:
    """Permutation taking (m1, f1, ..., mN, fN) to (m1..mN, f1..fN)."""
    n = shape.n
    return tuple(2 * i for i in range(n)) + tuple(2 * i + 1 for i in range(n))


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, rtol=0, atol=atol)


def is_projector(m: np.ndarray, atol: float = ATOL) -> bool:
    return is_hermitian(m, atol) and np.allclose(m @ m, m, rtol=0, atol=atol)


def is_unitary(m: np.ndarray, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0, atol=atol)


def max_abs(a) -> float:
    """Largest absolute entry, 0.0 for empty input."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def frozen(a: np.ndarray) -> np.ndarray:
    """Read-only copy, used for values that must stay immutable after construction."""
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a
