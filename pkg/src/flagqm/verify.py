"""Randomized invariant suites comparing the real construction with complex QM.

Each suite draws ``trials`` random instances from its own seeded stream and
reports the largest residual it saw.  A suite passes when that residual is
at most the tolerance.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import bellswap
from .complexqm import ComplexOperator, ComplexState, expectation, expectation_mixed
from .realmap import (
    canonicalize,
    compose_flag_basis_check,
    flag_basis,
    flag_rotation,
    flag_tensor_ops,
    flag_tensor_states,
    kernel_basis,
    kernel_projector,
    myrheim_projector,
    product_of_single_flags,
    real_expectation,
    real_overlap,
    s_inv,
    s_map,
    t_apply,
    t_inv_left,
    t_map,
)
from .realqm import embed_local, independent_prep, real_born, real_partial_trace, t1_map
from .sampling import (
    random_density,
    random_ensemble_projectors,
    random_hermitian,
    random_matrix,
    random_shape,
    random_state,
    random_unitary,
    suite_rng,
)
from .tensor_core import ATOL, SystemShape, kron, max_abs, partial_trace


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    reference: str
    provenance: str
    trials: int = 1

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _diff(a, b) -> float:
    return max_abs(np.asarray(a) - np.asarray(b))


def _state_diff(a, b) -> float:
    return max(_diff(a.re, b.re), _diff(a.im, b.im))


def _op_diff(a, b) -> float:
    return max(_diff(a.re, b.re), _diff(a.im, b.im))


# --------------------------------------------------------------- random suites

def norm_preservation(rng, trials):
    worst = 0.0
    for _ in range(trials):
        psi = random_state(rng, random_shape(rng))
        rs = s_map(psi)
        worst = max(worst, abs(rs.norm() - 1), abs(np.linalg.norm(rs.expanded()) - 1))
        worst = max(worst, _diff(s_inv(rs).amplitudes, psi.amplitudes))
    return worst


def phase_covariance(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        psi = random_state(rng, shape)
        alpha = rng.uniform(-np.pi, np.pi)
        rotated = s_map(ComplexState(np.exp(1j * alpha) * psi.amplitudes, shape))
        rot = kron(np.eye(shape.dim), flag_rotation(alpha))
        worst = max(worst, _diff(rotated.single_flag(), rot @ s_map(psi).single_flag()))
        # on N flags the rotation acts as cos a I^(N) + sin a J^(N)
        fb = flag_basis(shape.n)
        rot_n = kron(np.eye(shape.dim), np.cos(alpha) * fb.I + np.sin(alpha) * fb.J)
        worst = max(worst, _diff(rotated.expanded(), rot_n @ s_map(psi).expanded()))
    return worst


def rotation_commutation(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        A = t_map(random_matrix(rng, shape)).single_flag()
        rot = kron(np.eye(shape.dim), flag_rotation(rng.uniform(-np.pi, np.pi)))
        worst = max(worst, _diff(A @ rot, rot @ A))
    return worst


def homomorphism(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        a, b = random_matrix(rng, shape), random_matrix(rng, shape)
        lhs = t_map(a.dot(b))
        worst = max(worst, _op_diff(lhs, t_map(a).dot(t_map(b))))
        worst = max(worst, _diff(lhs.expanded(), t_map(a).expanded() @ t_map(b).expanded()))
        worst = max(worst, _diff(t_inv_left(t_map(a)).matrix, a.matrix))
    return worst


def expectation_preservation(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        psi, H = random_state(rng, shape), random_hermitian(rng, shape)
        oracle = expectation(psi, H)
        rs, TH = s_map(psi), t_map(H)
        worst = max(worst, abs(real_expectation(rs, TH) - oracle))
        e = rs.expanded()
        worst = max(worst, abs(e @ TH.expanded() @ e - oracle))
    return worst


def intertwining(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        psi, A = random_state(rng, shape), random_matrix(rng, shape)
        lhs = t_apply(t_map(A), s_map(psi))
        rhs = s_map(A.apply(psi))
        worst = max(worst, _state_diff(lhs, rhs))
        worst = max(worst, _diff(t_map(A).expanded() @ s_map(psi).expanded(), rhs.expanded()))
    return worst


def scalar_product(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        phi, psi = random_state(rng, shape), random_state(rng, shape)
        oracle = np.vdot(phi.amplitudes, psi.amplitudes).real
        worst = max(worst, abs(real_overlap(s_map(phi), s_map(psi)) - oracle))
        worst = max(worst, abs(s_map(phi).expanded() @ s_map(psi).expanded() - oracle))
    return worst


def hermitian_symmetric(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        T = t_map(random_hermitian(rng, shape))
        worst = max(worst, _diff(T.re, T.re.T), _diff(T.im, -T.im.T))
        worst = max(worst, _diff(T.expanded(), T.expanded().T), _diff(T.single_flag(), T.single_flag().T))
    return worst


def unitary_orthogonal(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        T = t_map(random_unitary(rng, shape))
        # orthogonal on R^D x R^2, and equal to 1 x I^(N) on the canonical subspace
        s = T.single_flag()
        worst = max(worst, _diff(s @ s.T, np.eye(2 * shape.dim)))
        e = T.expanded()
        worst = max(worst, _diff(e @ e.T, kron(np.eye(shape.dim), flag_basis(shape.n).I)))
    return worst


def flag_composition(rng, trials):
    return max(compose_flag_basis_check(n, m, atol=np.inf) for n, m in ((1, 1), (1, 2), (2, 1), (2, 2)))


def j_squared(rng, trials):
    worst = 0.0
    for n in range(1, 5):
        fb = flag_basis(n)
        worst = max(worst, _diff(fb.J @ fb.J, -fb.I))
    return worst


def trace_ij(rng, trials):
    """Partial traces of I^(N), J^(N) over the first M flags."""
    worst = 0.0
    for n in range(2, 5):
        for m in range(1, min(2, n - 1) + 1):
            fb, small = flag_basis(n), flag_basis(n - m)
            shape = SystemShape.qubits(n)
            keep = range(m, n)
            worst = max(worst, _diff(partial_trace(fb.I, shape, keep), small.I))
            worst = max(worst, _diff(partial_trace(fb.J, shape, keep), small.J))
    return worst


def partial_trace_diagram(rng, trials):
    """real_partial_trace . t1_map == t1_map . partial_trace."""
    worst = 0.0
    for t in range(trials):
        n = int(rng.integers(2, 5))
        max_d = 3 if n <= 3 else 2
        shape = random_shape(rng, max_n=n, max_d=max_d, min_n=n)
        m = int(rng.integers(1, min(2, n - 1) + 1))
        keep = list(range(m, n))
        if t % 2:
            # product input sigma_1 x sigma_2, split after the first m parties
            left, right = shape.subsystem(range(m)), shape.subsystem(keep)
            rho = random_density(rng, left) @ random_density(rng, right)
            rho = ComplexOperator(rho.matrix, shape, "density")
        else:
            rho = random_density(rng, shape)
        lhs = real_partial_trace(t1_map(rho), shape, keep)
        rhs = t1_map(ComplexOperator(partial_trace(rho.matrix, shape, keep), shape.subsystem(keep), "density"))
        worst = max(worst, _diff(lhs.re, rhs.re), _diff(lhs.im, rhs.im), abs(lhs.trace() - 1))
    return worst


def density_expectation(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        rho, H = random_density(rng, shape), random_hermitian(rng, shape)
        r = t1_map(rho)
        oracle = expectation_mixed(rho, H)
        worst = max(worst, abs(r.expectation(t_map(H)) - oracle), abs(r.trace() - 1))
        worst = max(worst, abs(np.trace(r.expanded() @ t_map(H).expanded()) - oracle))
    return worst


def p4_locality(rng, trials):
    worst = 0.0
    for _ in range(trials):
        s1, s2 = random_shape(rng, max_n=1), random_shape(rng, max_n=1)
        shape = s1 + s2
        psi1, psi2 = random_state(rng, s1), random_state(rng, s2)
        A1, A2 = random_matrix(rng, s1), random_matrix(rng, s2)
        v1, v2 = s_map(psi1), s_map(psi2)
        joint = independent_prep([v1, v2])
        lhs1 = t_apply(embed_local(t_map(A1), shape, 0), joint)
        rhs1 = independent_prep([t_apply(t_map(A1), v1), v2])
        lhs2 = t_apply(embed_local(t_map(A2), shape, 1), joint)
        rhs2 = independent_prep([v1, t_apply(t_map(A2), v2)])
        worst = max(worst, _state_diff(lhs1, rhs1), _state_diff(lhs2, rhs2))
        # the embeddings themselves commute with t_map and compose to the joint operator
        worst = max(worst, _op_diff(embed_local(t_map(A1), shape, 0), t_map(A1 @ ComplexOperator(np.eye(s2.dim), s2))))
        joint_op = embed_local(t_map(A1), shape, 0).dot(embed_local(t_map(A2), shape, 1))
        worst = max(worst, _op_diff(joint_op, flag_tensor_ops(t_map(A1), t_map(A2))))
        worst = max(worst, _op_diff(joint_op, t_map(A1 @ A2)))
        # independent preparation agrees with the complex tensor product
        worst = max(worst, _state_diff(joint, s_map(psi1 @ psi2)))
    return worst


def quotient_consistency(rng, trials):
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(2, 4))
        parts = [random_state(rng, random_shape(rng, max_n=1)) for _ in range(k)]
        joint = parts[0]
        for p in parts[1:]:
            joint = joint @ p
        target = s_map(joint)
        naive = product_of_single_flags(*[s_map(p) for p in parts])
        worst = max(worst, _state_diff(canonicalize(naive, joint.shape), target))
        composed = s_map(parts[0])
        for p in parts[1:]:
            composed = flag_tensor_states(composed, s_map(p))
        worst = max(worst, _state_diff(composed, target))
    return worst


def born_rule(rng, trials):
    worst = 0.0
    for _ in range(trials):
        shape = random_shape(rng)
        psi = random_state(rng, shape)
        projs = random_ensemble_projectors(rng, shape)
        rs = s_map(psi)
        probs = [real_born(rs, t_map(P)) for P in projs]
        oracle = [float(np.vdot(psi.amplitudes, P.matrix @ psi.amplitudes).real) for P in projs]
        worst = max(worst, _diff(probs, oracle), abs(sum(probs) - 1))
    return worst


# --------------------------------------------------------------- structural checks

def kernel_rank(rng, trials):
    """|rank(P_perp) - 2D| + |nullity - ((2d)^N - 2 d^N)| for N = 2, 3, d = 2."""
    worst = 0.0
    for n in (2, 3):
        shape = SystemShape.qubits(n)
        rank = np.linalg.matrix_rank(kernel_projector(shape))
        worst = max(worst, abs(rank - 2 * shape.dim))
        worst = max(worst, abs((shape.expanded_dim - rank) - ((2 * 2) ** n - 2 * 2**n)))
    return float(worst)


def kernel_characterization(rng, trials):
    """For N = 2 the kernel is spanned by psi' x (|00>+|11>) and psi' x (|01>-|10>)."""
    shape = SystemShape.qubits(2)
    P = kernel_projector(shape)
    flags = [np.array([1, 0, 0, 1.0]), np.array([0, 1, -1, 0.0])]
    span = np.column_stack([kron(np.eye(4)[:, i], f) for i in range(4) for f in flags])
    worst = max_abs(P @ span)
    worst = max(worst, abs(np.linalg.matrix_rank(span) - (shape.expanded_dim - np.linalg.matrix_rank(P))))
    worst = max(worst, abs(np.linalg.matrix_rank(np.column_stack([span, kernel_basis(shape)])) - span.shape[1]))
    return float(worst)


def myrheim(rng, trials):
    worst = 0.0
    for dims in ((2, 2), (2, 2, 2), (3, 2), (2, 3, 2)):
        _, r = myrheim_projector(SystemShape(dims), atol=np.inf)
        worst = max(worst, r)
    return worst


# --------------------------------------------------------------- Bell experiment

def bell_value(rng, trials):
    worst = 0.0
    for backend in bellswap.BACKENDS:
        _, report = bellswap.run(backend)
        worst = max(worst, abs(report.total - bellswap.QUANTUM_VALUE))
        worst = max(worst, max(abs(v - bellswap.QUANTUM_VALUE) for v in report.t_b.values()))
    return worst


def backend_equivalence(rng, trials):
    return _diff(bellswap.probability_table(backend="complex").p, bellswap.probability_table(backend="real").p)


def conditional_state(rng, trials):
    return _diff(bellswap.conditional_state_ac(), bellswap.expected_conditional_state_ac())


SUITES: list[tuple[str, Callable, str, str, bool]] = [
    # name, function, reference, provenance, randomized
    ("norm_preservation", norm_preservation, "||S(psi)|| = 1, S^-1 S = id", "derived", True),
    ("phase_covariance", phase_covariance, "S(e^{ia} psi) = R_F(a) S(psi)", "published", True),
    ("rotation_commutation", rotation_commutation, "[T(A), 1 x R_F(a)] = 0", "published", True),
    ("homomorphism", homomorphism, "T(A1 A2) = T(A1) T(A2)", "published", True),
    ("expectation_preservation", expectation_preservation, "R(psi)^T T(H) R(psi) = <psi|H|psi>", "published", True),
    ("intertwining", intertwining, "T(A) R(psi) = R(A psi)", "published", True),
    ("scalar_product", scalar_product, "R(phi)^T R(psi) = Re<phi|psi>", "published", True),
    ("hermitian_to_symmetric", hermitian_symmetric, "T(H)^T = T(H)", "published", True),
    ("unitary_to_orthogonal", unitary_orthogonal, "T(U) T(U)^T = 1 x I^(N)", "published", True),
    ("flag_composition", flag_composition, "psi_even/odd and I/J compose for (N,M)", "published", False),
    ("j_squared", j_squared, "J^(N)^2 = -I^(N)", "published", False),
    ("trace_ij", trace_ij, "tr_{1..M} I^(N) = I^(N-M), same for J", "published", False),
    ("partial_trace_diagram", partial_trace_diagram, "tr . T1 = T1 . tr", "published", True),
    ("density_expectation", density_expectation, "tr[T1(rho) T(A)] = tr(rho A)", "published", True),
    ("p4_locality", p4_locality, "eta(T(A1)) xi(v1, v2) = xi(T(A1) v1, v2)", "published", True),
    ("quotient_consistency", quotient_consistency, "S(psi) x_F S(phi) ~ S(psi x phi)", "published", True),
    ("born_rule", born_rule, "v^T T(Pi) v = <psi|Pi|psi>, sums to 1", "published", True),
    ("kernel_rank", kernel_rank, "rank P_perp = 2 d^N", "derived", False),
    ("kernel_characterization", kernel_characterization, "ker spanned by psi' x (|00>+|11>), psi' x (|01>-|10>)", "published", False),
    ("myrheim_projector", myrheim, "P+ (P+Q+) = P_perp", "published", False),
    ("bell_value", bell_value, "T = T_b = 6 sqrt 2 on both backends", "published", False),
    ("backend_equivalence", backend_equivalence, "complex and real tables agree", "derived", False),
    ("conditional_state", conditional_state, "rho_AC^(00) = phi+ x (phi- + psi+)/2", "published", False),
]


def run_suite(name: str, seed: int = 0, trials: int = 200, tol: float = ATOL) -> Check:
    for stream, (n, fn, ref, prov, randomized) in enumerate(SUITES):
        if n == name:
            residual = float(fn(suite_rng(seed, stream), trials))
            return Check(n, residual, tol, ref, prov, trials if randomized else 1)
    raise KeyError(name)


def run_all(seed: int = 0, trials: int = 200, tol: float = ATOL) -> list[Check]:
    return [run_suite(name, seed, trials, tol) for name, *_ in SUITES]
