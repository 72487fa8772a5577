"""Plain complex quantum mechanics on dense matrices.

Deliberately naive: this is the reference every real-side result is
compared against, so it favours obviousness over speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .tensor_core import (
    ATOL,
    SystemShape,
    frozen,
    is_hermitian,
    is_projector,
    is_unitary,
    kron,
)

ZERO_PROBABILITY = 1e-12

OPERATOR_KINDS = ("general", "hermitian", "projector", "unitary", "density")


class ZeroProbabilityError(ValueError):
    """Raised when collapsing onto an outcome that cannot occur."""


def _as_shape(shape, length: int) -> SystemShape:
    if shape is None:
        n = int(round(np.log2(length)))
        if 2**n != length:
            raise ValueError(f"cannot infer a qubit shape for dimension {length}")
        return SystemShape.qubits(n)
    if isinstance(shape, SystemShape):
        return shape
    return SystemShape(tuple(shape))


@dataclass(frozen=True)
class ComplexState:
    amplitudes: np.ndarray
    shape: SystemShape = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        shape = _as_shape(self.shape, amps.size)
        if shape.dim != amps.size:
            raise ValueError(f"{amps.size} amplitudes do not fit shape {shape.dims}")
        object.__setattr__(self, "amplitudes", frozen(amps))
        object.__setattr__(self, "shape", shape)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, atol: float = ATOL) -> bool:
        return abs(self.norm() - 1.0) <= atol

    def normalized(self) -> "ComplexState":
        return ComplexState(self.amplitudes / self.norm(), self.shape)

    def __matmul__(self, other: "ComplexState") -> "ComplexState":
        """Tensor product."""
        return ComplexState(kron(self.amplitudes, other.amplitudes), self.shape + other.shape)

    def projector(self) -> "ComplexOperator":
        a = self.amplitudes
        return ComplexOperator(np.outer(a, a.conj()), self.shape, "projector")


@dataclass(frozen=True)
class ComplexOperator:
    matrix: np.ndarray
    shape: SystemShape = None
    kind: str = "general"

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got {m.shape}")
        shape = _as_shape(self.shape, m.shape[0])
        if shape.dim != m.shape[0]:
            raise ValueError(f"{m.shape} matrix does not fit shape {shape.dims}")
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        check = {
            "hermitian": is_hermitian,
            "projector": is_projector,
            "unitary": is_unitary,
            "density": is_density,
        }.get(self.kind)
        if check is not None and not check(m):
            raise ValueError(f"matrix is not a valid {self.kind} operator")
        object.__setattr__(self, "matrix", frozen(m))
        object.__setattr__(self, "shape", shape)

    def __matmul__(self, other: "ComplexOperator") -> "ComplexOperator":
        """Tensor product; the kind survives only when both factors share it."""
        kind = self.kind if self.kind == other.kind else "general"
        return ComplexOperator(kron(self.matrix, other.matrix), self.shape + other.shape, kind)

    def dot(self, other: "ComplexOperator") -> "ComplexOperator":
        """Operator product (composition)."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ComplexOperator(self.matrix @ other.matrix, self.shape)

    def apply(self, state: ComplexState) -> ComplexState:
        if state.shape != self.shape:
            raise ValueError(f"operator on {self.shape.dims} applied to state on {state.shape.dims}")
        return ComplexState(self.matrix @ state.amplitudes, self.shape)


def is_density(m: np.ndarray, atol: float = ATOL) -> bool:
    if not is_hermitian(m, atol):
        return False
    if abs(np.trace(m) - 1) > atol:
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -atol)


@dataclass(frozen=True)
class MeasurementEnsemble:
    projectors: tuple[ComplexOperator, ...]
    labels: tuple[Hashable, ...] = field(default=None)

    def __post_init__(self):
        projs = tuple(self.projectors)
        if not projs:
            raise ValueError("an ensemble needs at least one projector")
        labels = tuple(range(len(projs))) if self.labels is None else tuple(self.labels)
        if len(labels) != len(projs) or len(set(labels)) != len(labels):
            raise ValueError("labels must be unique and match the projectors")
        shape = projs[0].shape
        for p in projs:
            if p.shape != shape:
                raise ValueError("all projectors must act on the same shape")
            if not is_projector(p.matrix):
                raise ValueError("ensemble members must be projectors")
        total = sum(p.matrix for p in projs)
        if not np.allclose(total, np.eye(shape.dim), rtol=0, atol=ATOL):
            raise ValueError("projectors do not sum to the identity")
        for i, p in enumerate(projs):
            for q in projs[i + 1:]:
                if not np.allclose(p.matrix @ q.matrix, 0, rtol=0, atol=ATOL):
                    raise ValueError("projectors are not mutually orthogonal")
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "labels", labels)

    @property
    def shape(self) -> SystemShape:
        return self.projectors[0].shape

    def __getitem__(self, label) -> ComplexOperator:
        return self.projectors[self.labels.index(label)]

    @classmethod
    def from_states(cls, states: Sequence[ComplexState], labels=None) -> "MeasurementEnsemble":
        return cls(tuple(s.projector() for s in states), labels)


def born_probability(state: ComplexState, proj: ComplexOperator) -> float:
    if state.shape != proj.shape:
        raise ValueError(f"state on {state.shape.dims} vs projector on {proj.shape.dims}")
    if not is_projector(proj.matrix):
        raise ValueError("born_probability needs a projector")
    psi = state.amplitudes
    p = np.vdot(psi, proj.matrix @ psi)
    if abs(p.imag) > ATOL:
        raise ArithmeticError(f"Born probability has imaginary part {p.imag}")
    return float(min(max(p.real, 0.0), 1.0))


def expectation(state: ComplexState, obs: ComplexOperator) -> float:
    if state.shape != obs.shape:
        raise ValueError(f"state on {state.shape.dims} vs observable on {obs.shape.dims}")
    if not is_hermitian(obs.matrix):
        raise ValueError("expectation needs a Hermitian observable")
    psi = state.amplitudes
    value = np.vdot(psi, obs.matrix @ psi)
    if abs(value.imag) > ATOL:
        raise ArithmeticError(f"expectation value has imaginary part {value.imag}")
    return float(value.real)


def measure_and_collapse(
    state: ComplexState, ens: MeasurementEnsemble, outcome
) -> tuple[float, ComplexState]:
    """Probability of ``outcome`` and the normalized post-measurement state."""
    proj = ens[outcome]
    p = born_probability(state, proj)
    if p < ZERO_PROBABILITY:
        raise ZeroProbabilityError(f"outcome {outcome!r} has probability {p:.3g}")
    post = proj.matrix @ state.amplitudes / np.sqrt(p)
    return p, ComplexState(post, state.shape)


def expectation_mixed(rho: ComplexOperator, obs: ComplexOperator) -> float:
    """tr(rho A) for a density operator."""
    value = np.trace(rho.matrix @ obs.matrix)
    if abs(value.imag) > ATOL:
        raise ArithmeticError(f"expectation value has imaginary part {value.imag}")
    return float(value.real)


_S = 1 / np.sqrt(2)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# |psi-> follows the (|10> - |01>)/sqrt2 sign convention
BELL = {
    "phi+": np.array([1, 0, 0, 1]) * _S,
    "phi-": np.array([1, 0, 0, -1]) * _S,
    "psi+": np.array([0, 1, 1, 0]) * _S,
    "psi-": np.array([0, -1, 1, 0]) * _S,
}


def pauli(name: str) -> ComplexOperator:
    try:
        m = PAULI[name.upper()]
    except KeyError:
        raise ValueError(f"unknown Pauli operator {name!r}") from None
    kind = "hermitian"
    return ComplexOperator(m, SystemShape.of(2), kind)


def bell_state(name: str) -> ComplexState:
    key = name.lower().replace("⁺", "+").replace("⁻", "-").replace("φ", "phi").replace("ψ", "psi")
    try:
        v = BELL[key]
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}") from None
    return ComplexState(v.astype(complex), SystemShape.qubits(2))


def basis_state(index: int, shape: SystemShape) -> ComplexState:
    v = np.zeros(shape.dim, dtype=complex)
    v[index] = 1
    return ComplexState(v, shape)


def identity(shape: SystemShape) -> ComplexOperator:
    return ComplexOperator(np.eye(shape.dim), shape, "unitary")
