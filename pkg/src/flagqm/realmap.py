"""Complex-to-real maps with per-party flags and the quotient-space tensor product.

A complex vector psi on N parties is represented by the compact pair
``(Re psi, Im psi)``.  Its expanded form lives in the real space
``(R^D) x (R^2)^{x N}`` in grouped order (all main factors, then all flags):

    Re(psi) x psi_even^(N) + Im(psi) x psi_odd^(N)

Operators use the pair ``(Re A, Im A)`` standing for
``Re A x I^(N) + Im A x J^(N)``.  Expanded vectors are only needed for the
quotient-space machinery (kernel projector, equivalence, canonical forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .complexqm import ComplexOperator, ComplexState
from .tensor_core import (
    ATOL,
    SystemShape,
    frozen,
    grouped_from_interleaved,
    kron,
    max_abs,
    permute_operator,
)


class InvariantViolation(AssertionError):
    """A structural identity of the construction failed numerically."""


class NotCanonicalError(ValueError):
    """Input lies outside the subspace the operation is defined on."""


# ---------------------------------------------------------------- flag basis

@dataclass(frozen=True)
class FlagBasis:
    n: int
    psi_even: np.ndarray
    psi_odd: np.ndarray
    I: np.ndarray
    J: np.ndarray


@lru_cache(maxsize=None)
def flag_basis(n: int) -> FlagBasis:
    """Even/odd Hamming-weight flag vectors and the I, J operators for n flags."""
    if n < 1:
        raise ValueError("flag_basis needs n >= 1")
    even = np.zeros(2**n)
    odd = np.zeros(2**n)
    for k in range(2**n):
        w = bin(k).count("1")
        if w % 2 == 0:
            even[k] = (-1) ** (w // 2)
        else:
            odd[k] = (-1) ** ((w - 1) // 2)
    norm = np.sqrt(2 ** (n - 1))
    even /= norm
    odd /= norm
    I = np.outer(even, even) + np.outer(odd, odd)
    J = np.outer(odd, even) - np.outer(even, odd)
    return FlagBasis(n, frozen(even), frozen(odd), frozen(I), frozen(J))


def flag_rotation(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]])


J_F = np.array([[0.0, -1.0], [1.0, 0.0]])


def compose_flag_basis_check(n: int, m: int, atol: float = ATOL) -> float:
    """Check how n- and m-flag bases compose into the (n+m)-flag basis.

    Returns the largest residual; raises :class:`InvariantViolation` above ``atol``.
    """
    a, b, ab = flag_basis(n), flag_basis(m), flag_basis(n + m)
    s = 1 / np.sqrt(2)
    residuals = [
        ab.psi_even - s * (kron(a.psi_even, b.psi_even) - kron(a.psi_odd, b.psi_odd)),
        ab.psi_odd - s * (kron(a.psi_even, b.psi_odd) + kron(a.psi_odd, b.psi_even)),
        ab.I - 0.5 * (kron(a.I, b.I) - kron(a.J, b.J)),
        ab.J - 0.5 * (kron(a.I, b.J) + kron(a.J, b.I)),
    ]
    worst = max(max_abs(r) for r in residuals)
    if worst > atol:
        raise InvariantViolation(f"flag bases ({n}, {m}) do not compose: residual {worst:.3g}")
    return worst


# ---------------------------------------------------------------- states

@dataclass(frozen=True)
class RealState:
    """Compact real representation of a (possibly multipartite) state."""

    re: np.ndarray
    im: np.ndarray
    shape: SystemShape

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if re.shape != (self.shape.dim,) or im.shape != re.shape:
            raise ValueError(f"parts of length {re.shape}/{im.shape} do not fit {self.shape.dims}")
        object.__setattr__(self, "re", frozen(re))
        object.__setattr__(self, "im", frozen(im))

    def norm(self) -> float:
        return float(np.sqrt(self.re @ self.re + self.im @ self.im))

    def is_normalized(self, atol: float = ATOL) -> bool:
        return abs(self.norm() - 1.0) <= atol

    def expanded(self) -> np.ndarray:
        """Canonical representative in grouped order, length D * 2^N."""
        fb = flag_basis(self.shape.n)
        return kron(self.re, fb.psi_even) + kron(self.im, fb.psi_odd)

    def single_flag(self) -> np.ndarray:
        """Re x |0>_F + Im x |1>_F with one shared flag, length 2D."""
        return kron(self.re, [1.0, 0.0]) + kron(self.im, [0.0, 1.0])

    def allclose(self, other: "RealState", atol: float = ATOL) -> bool:
        return (
            self.shape == other.shape
            and max_abs(self.re - other.re) <= atol
            and max_abs(self.im - other.im) <= atol
        )


def s_map(psi: ComplexState) -> RealState:
    a = psi.amplitudes
    return RealState(a.real, a.imag, psi.shape)


def r_map(psi: ComplexState) -> np.ndarray:
    """Expanded canonical representative of ``psi``."""
    return s_map(psi).expanded()


def s_inv(rs: RealState) -> ComplexState:
    return ComplexState(rs.re + 1j * rs.im, rs.shape)


def r_inv(v: np.ndarray, shape: SystemShape) -> np.ndarray:
    """Contract the flag factor of an expanded vector with psi_even + i psi_odd."""
    fb = flag_basis(shape.n)
    blocks = np.asarray(v, dtype=float).reshape(shape.dim, 2**shape.n)
    return blocks @ fb.psi_even + 1j * (blocks @ fb.psi_odd)


def interleaved_to_grouped(v: np.ndarray, shape: SystemShape) -> np.ndarray:
    """Regroup an expanded vector from (m1, f1, ..., mN, fN) to (m1..mN, f1..fN)."""
    inter = shape.interleaved()
    return np.asarray(v).reshape(inter.dims).transpose(grouped_from_interleaved(shape)).reshape(-1)


def interleaved_to_grouped_operator(m: np.ndarray, shape: SystemShape) -> np.ndarray:
    return permute_operator(m, shape.interleaved(), grouped_from_interleaved(shape))


def product_of_single_flags(*states: RealState) -> np.ndarray:
    """Plain tensor product of single-party expanded vectors, regrouped.

    This is the ill-defined naive composition; it is useful as a representative
    that must land in the right equivalence class.
    """
    if any(s.shape.n != 1 for s in states):
        raise ValueError("naive product is defined for single-party factors only")
    shape = SystemShape(tuple(d for s in states for d in s.shape.dims))
    v = kron(*[s.single_flag() for s in states])
    return interleaved_to_grouped(v, shape)


# ---------------------------------------------------------------- quotient

def _flag_projector(n: int) -> np.ndarray:
    return flag_basis(n).I


def kernel_projector(shape: SystemShape) -> np.ndarray:
    """Projector onto the orthogonal complement of the kernel of the tensored inverse map."""
    if shape.n < 2:
        raise ValueError("the quotient is trivial for a single party")
    return kron(np.eye(shape.dim), _flag_projector(shape.n))


def project_canonical(v: np.ndarray, shape: SystemShape) -> np.ndarray:
    """Canonical representative of ``[v]`` without renormalization."""
    v = np.asarray(v, dtype=float)
    if v.shape != (shape.expanded_dim,):
        raise ValueError(f"expanded vector must have length {shape.expanded_dim}")
    blocks = v.reshape(shape.dim, 2**shape.n)
    return (blocks @ _flag_projector(shape.n)).reshape(-1)


def canonicalize(v: np.ndarray, shape: SystemShape, atol: float = ATOL) -> RealState:
    """Unit-norm canonical representative of ``[v]`` in compact form."""
    p = project_canonical(v, shape)
    norm = np.linalg.norm(p)
    if norm <= atol:
        raise NotCanonicalError("vector lies in the kernel; it represents no state")
    fb = flag_basis(shape.n)
    blocks = (p / norm).reshape(shape.dim, 2**shape.n)
    return RealState(blocks @ fb.psi_even, blocks @ fb.psi_odd, shape)


def compact_state(v: np.ndarray, shape: SystemShape) -> RealState:
    """Compact coordinates of an expanded vector, no renormalization."""
    fb = flag_basis(shape.n)
    blocks = np.asarray(v, dtype=float).reshape(shape.dim, 2**shape.n)
    return RealState(blocks @ fb.psi_even, blocks @ fb.psi_odd, shape)


def equivalent(u: np.ndarray, v: np.ndarray, shape: SystemShape, atol: float = ATOL) -> bool:
    diff = np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    return bool(np.linalg.norm(project_canonical(diff, shape)) < atol)


def kernel_basis(shape: SystemShape) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel, from the flag complement."""
    fb = flag_basis(shape.n)
    w, vecs = np.linalg.eigh(np.eye(2**shape.n) - fb.I)
    flag_kernel = vecs[:, w > 0.5]
    return kron(np.eye(shape.dim), flag_kernel)


# ---------------------------------------------------------------- operators

@dataclass(frozen=True)
class RealOperator:
    """Compact pair standing for ``re x I^(N) + im x J^(N)``."""

    re: np.ndarray
    im: np.ndarray
    shape: SystemShape

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        d = self.shape.dim
        if re.shape != (d, d) or im.shape != (d, d):
            raise ValueError(f"blocks {re.shape}/{im.shape} do not fit {self.shape.dims}")
        object.__setattr__(self, "re", frozen(re))
        object.__setattr__(self, "im", frozen(im))

    def expanded(self) -> np.ndarray:
        fb = flag_basis(self.shape.n)
        return kron(self.re, fb.I) + kron(self.im, fb.J)

    def single_flag(self) -> np.ndarray:
        """``re x I_F + im x J_F`` with one shared two-dimensional flag."""
        return kron(self.re, np.eye(2)) + kron(self.im, J_F)

    def dot(self, other: "RealOperator") -> "RealOperator":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RealOperator(
            self.re @ other.re - self.im @ other.im,
            self.re @ other.im + self.im @ other.re,
            self.shape,
        )

    def transpose(self) -> "RealOperator":
        return RealOperator(self.re.T, -self.im.T, self.shape)

    def allclose(self, other: "RealOperator", atol: float = ATOL) -> bool:
        return (
            self.shape == other.shape
            and max_abs(self.re - other.re) <= atol
            and max_abs(self.im - other.im) <= atol
        )


def t_map(A: ComplexOperator) -> RealOperator:
    m = A.matrix
    return RealOperator(m.real, m.imag, A.shape)


def compact_operator(m: np.ndarray, shape: SystemShape) -> tuple[RealOperator, float]:
    """Project an expanded operator onto span{I^(N), J^(N)} blockwise.

    Returns the compact operator and the residual of the projection; a
    nonzero residual means ``m`` was not of the ``re x I + im x J`` form.
    """
    fb = flag_basis(shape.n)
    f = 2**shape.n
    m = np.asarray(m, dtype=float)
    if m.shape != (shape.expanded_dim, shape.expanded_dim):
        raise ValueError(f"expanded operator must be {shape.expanded_dim} square")
    blocks = m.reshape(shape.dim, f, shape.dim, f)
    # <I, I>_F = <J, J>_F = 2 and <I, J>_F = 0
    re = 0.5 * np.einsum("iajb,ab->ij", blocks, fb.I)
    im = 0.5 * np.einsum("iajb,ab->ij", blocks, fb.J)
    op = RealOperator(re, im, shape)
    return op, max_abs(op.expanded() - m)


def t_inv_left(R, shape: SystemShape | None = None, atol: float = ATOL) -> ComplexOperator:
    """Left inverse of :func:`t_map`.

    Accepts a compact :class:`RealOperator` or an expanded real matrix (grouped
    order, ``shape`` required).  For the expanded input the vectorised inverse
    map is applied, ``1/2 W M W^dagger`` with ``W = 1 x (<even| + i <odd|)``,
    and the result is checked for membership in the image of ``t_map``.
    """
    if isinstance(R, RealOperator):
        return ComplexOperator(R.re + 1j * R.im, R.shape)
    if shape is None:
        raise ValueError("an expanded operator needs its shape")
    m = np.asarray(R, dtype=float)
    if m.shape != (shape.expanded_dim, shape.expanded_dim):
        raise ValueError(f"expanded operator must be {shape.expanded_dim} square")
    fb = flag_basis(shape.n)
    w = kron(np.eye(shape.dim), (fb.psi_even + 1j * fb.psi_odd)[None, :])
    a = 0.5 * w @ m @ w.conj().T
    out = ComplexOperator(a, shape)
    residual = max_abs(t_map(out).expanded() - m)
    if residual > atol:
        raise NotCanonicalError(f"operator is not in the image of t_map (residual {residual:.3g})")
    return out


def t_apply(A: RealOperator, v: RealState) -> RealState:
    if A.shape != v.shape:
        raise ValueError(f"operator on {A.shape.dims} applied to state on {v.shape.dims}")
    return RealState(A.re @ v.re - A.im @ v.im, A.re @ v.im + A.im @ v.re, v.shape)


def real_expectation(v: RealState, A: RealOperator) -> float:
    Av = t_apply(A, v)
    return float(v.re @ Av.re + v.im @ Av.im)


def real_overlap(a: RealState, b: RealState) -> float:
    """Real scalar product; equals Re<a|b> of the complex preimages."""
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return float(a.re @ b.re + a.im @ b.im)


# ---------------------------------------------------------------- flag tensor product

def flag_tensor_states(a: RealState, b: RealState) -> RealState:
    return RealState(
        kron(a.re, b.re) - kron(a.im, b.im),
        kron(a.re, b.im) + kron(a.im, b.re),
        a.shape + b.shape,
    )


def flag_tensor_ops(A: RealOperator, B: RealOperator) -> RealOperator:
    return RealOperator(
        kron(A.re, B.re) - kron(A.im, B.im),
        kron(A.re, B.im) + kron(A.im, B.re),
        A.shape + B.shape,
    )


# ---------------------------------------------------------------- Myrheim cross-check

def myrheim_projector(shape: SystemShape, atol: float = ATOL) -> tuple[np.ndarray, float]:
    """Build Myrheim's P+ (two parties) or P+Q+ (three parties) in grouped order.

    Returns the projector and its largest deviation from :func:`kernel_projector`;
    raises :class:`InvariantViolation` if they differ.
    """
    if shape.n not in (2, 3):
        raise ValueError("Myrheim's construction is given for two or three parties")
    xz = (np.array([[0, 1], [1, 0]]) @ np.array([[1, 0], [0, -1]])).astype(float)
    J = [kron(np.eye(d), xz) for d in shape.dims]
    one = [np.eye(2 * d) for d in shape.dims]
    if shape.n == 2:
        p = 0.5 * (kron(one[0], one[1]) - kron(J[0], J[1]))
    else:
        p_ab = 0.5 * (kron(one[0], one[1], one[2]) - kron(J[0], J[1], one[2]))
        q_ac = 0.5 * (kron(one[0], one[1], one[2]) - kron(J[0], one[1], J[2]))
        p = p_ab @ q_ac
    p = interleaved_to_grouped_operator(p, shape)
    residual = max_abs(p - kernel_projector(shape))
    if residual > atol:
        raise InvariantViolation(f"Myrheim projector differs from the kernel projector by {residual:.3g}")
    return p, residual
