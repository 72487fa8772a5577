"""Entanglement-swapping network Bell test in complex and real quantum mechanics.

Parties are ordered A, B1, B2, C.  Two sources emit |phi+> on (A, B1) and
(B2, C); Bob measures B1 B2 in the Bell basis, Alice picks one of three and
Charlie one of six dichotomic observables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .complexqm import (
    ComplexOperator,
    ComplexState,
    MeasurementEnsemble,
    bell_state,
    born_probability,
    is_hermitian,
    pauli,
)
from .realmap import (
    flag_tensor_ops,
    interleaved_to_grouped_operator,
    s_map,
    t_map,
)
from .realqm import independent_prep, real_born
from .tensor_core import (
    ATOL,
    SystemShape,
    grouped_from_interleaved,
    inverse_permutation,
    kron,
    max_abs,
    partial_trace,
    permute_operator,
)

SQRT2 = np.sqrt(2)
QUANTUM_VALUE = 6 * SQRT2
REAL_TENSOR_BOUND = 7.6605

OUTCOMES = (1, -1)
BOB_OUTCOMES = ("00", "01", "10", "11")
BACKENDS = ("complex", "real")

# S-values at b = 00, conditional on Bob's outcome, in units of 1/sqrt(2)
REFERENCE_S00 = {
    (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): -1,
    (1, 3): 1, (1, 4): 1, (3, 3): -1, (3, 4): 1,
    (2, 5): 1, (2, 6): 1, (3, 5): -1, (3, 6): 1,
}


@dataclass(frozen=True)
class ExperimentSpec:
    source_ab: ComplexState
    source_bc: ComplexState
    bob: MeasurementEnsemble
    alice: tuple[ComplexOperator, ...]
    charlie: tuple[ComplexOperator, ...]

    def __post_init__(self):
        if len(self.alice) != 3 or len(self.charlie) != 6:
            raise ValueError("Alice needs 3 observables and Charlie 6")
        if tuple(self.bob.labels) != BOB_OUTCOMES:
            raise ValueError(f"Bob's outcomes must be labelled {BOB_OUTCOMES}")
        for obs in self.alice + self.charlie:
            m = obs.matrix
            if not is_hermitian(m) or not np.allclose(m @ m, np.eye(len(m)), rtol=0, atol=ATOL):
                raise ValueError("observables must be Hermitian with eigenvalues +-1")

    @property
    def shape(self) -> SystemShape:
        return self.source_ab.shape + self.source_bc.shape

    def initial_state(self) -> ComplexState:
        return self.source_ab @ self.source_bc


def default_spec() -> ExperimentSpec:
    X, Y, Z = (pauli(n).matrix for n in "XYZ")
    s = 1 / SQRT2
    herm = lambda m: ComplexOperator(m, SystemShape.of(2), "hermitian")  # noqa: E731
    alice = tuple(herm(m) for m in (Z, X, Y))
    charlie = tuple(
        herm(m)
        for m in ((X + Z) * s, (Z - X) * s, (Y + Z) * s, (Z - Y) * s, (X + Y) * s, (X - Y) * s)
    )
    bob = MeasurementEnsemble.from_states(
        [bell_state(n) for n in ("phi+", "psi+", "phi-", "psi-")], BOB_OUTCOMES
    )
    return ExperimentSpec(bell_state("phi+"), bell_state("phi+"), bob, alice, charlie)


def outcome_projector(obs: ComplexOperator, sign: int) -> ComplexOperator:
    """Eigenprojector (1 + sign * A) / 2 of a +-1 valued observable."""
    m = (np.eye(obs.shape.dim) + sign * obs.matrix) / 2
    return ComplexOperator(m, obs.shape, "projector")


@dataclass
class ProbabilityTable:
    """P(a, b, c | x, z) stored as ``p[a_idx, b_idx, c_idx, x-1, z-1]``.

    ``a_idx`` / ``c_idx`` index :data:`OUTCOMES` (0 for +1, 1 for -1).
    """

    p: np.ndarray
    backend: str

    def __call__(self, a: int, b: str, c: int, x: int, z: int) -> float:
        return float(self.p[OUTCOMES.index(a), BOB_OUTCOMES.index(b), OUTCOMES.index(c), x - 1, z - 1])

    def marginal_b(self) -> np.ndarray:
        """P(b | x, z) with shape (4, 3, 6)."""
        return self.p.sum(axis=(0, 2))

    def p_b(self) -> np.ndarray:
        """P(b), averaged over settings (they agree by no-signalling)."""
        return self.marginal_b().mean(axis=(1, 2))

    def normalization(self) -> np.ndarray:
        return self.p.sum(axis=(0, 1, 2))

    def check(self, atol: float = ATOL) -> None:
        if self.p.min() < -1e-12:
            raise ValueError(f"negative probability {self.p.min():.3g}")
        if max_abs(self.normalization() - 1) > atol:
            raise ValueError("probabilities do not sum to one for every setting")
        marg = self.marginal_b()
        if max_abs(marg - marg[:, :1, :1]) > atol:
            raise ValueError("Bob's marginal depends on the settings")


def _complex_probability(spec, psi, bob_proj, pa, pc) -> float:
    op = ComplexOperator(kron(pa.matrix, bob_proj.matrix, pc.matrix), spec.shape)
    return born_probability(psi, op)


def probability_table(spec: ExperimentSpec | None = None, backend: str = "complex") -> ProbabilityTable:
    """Full 2 x 4 x 2 x 3 x 6 grid of outcome probabilities.

    The complex backend applies the Born rule to ``|psi0>``; the real backend
    uses compact real states and operators composed with the flag tensor
    product and never touches a complex number.
    """
    spec = spec or default_spec()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    p = np.zeros((2, 4, 2, 3, 6))
    alice = [[outcome_projector(A, a) for a in OUTCOMES] for A in spec.alice]
    charlie = [[outcome_projector(C, c) for c in OUTCOMES] for C in spec.charlie]
    if backend == "complex":
        psi = spec.initial_state()
        for (ai, bi, ci, x, z) in product(range(2), range(4), range(2), range(3), range(6)):
            p[ai, bi, ci, x, z] = _complex_probability(
                spec, psi, spec.bob.projectors[bi], alice[x][ai], charlie[z][ci]
            )
    else:
        state = independent_prep([s_map(spec.source_ab), s_map(spec.source_bc)])
        t_alice = [[t_map(P) for P in row] for row in alice]
        t_charlie = [[t_map(P) for P in row] for row in charlie]
        t_bob = [t_map(P) for P in spec.bob.projectors]
        for (ai, bi, ci, x, z) in product(range(2), range(4), range(2), range(3), range(6)):
            op = flag_tensor_ops(flag_tensor_ops(t_alice[x][ai], t_bob[bi]), t_charlie[z][ci])
            p[ai, bi, ci, x, z] = real_born(state, op)
    return ProbabilityTable(p, backend)


def real_probability_expanded(spec: ExperimentSpec, a: int, b: str, c: int, x: int, z: int) -> float:
    """One table entry from expanded real vectors and the plain tensor product.

    Each party's operator is ``Re x 1_F + Im x J_F`` on its own flag; the
    product acts on the canonical representative of the initial state.
    """
    shape = spec.shape
    psi0 = s_map(spec.initial_state()).expanded()
    pa = t_map(outcome_projector(spec.alice[x - 1], a)).single_flag()
    pc = t_map(outcome_projector(spec.charlie[z - 1], c)).single_flag()
    pb = t_map(spec.bob[b])
    # Bob's two qubits carry two flags; use his 2-party operator and regroup
    bob_shape = SystemShape.qubits(2)
    pb_inter = _grouped_to_interleaved_operator(pb.expanded(), bob_shape)
    op_inter = kron(pa, pb_inter, pc)
    op = interleaved_to_grouped_operator(op_inter, shape)
    return float(psi0 @ op @ psi0)


def _grouped_to_interleaved_operator(m: np.ndarray, shape: SystemShape) -> np.ndarray:
    return permute_operator(m, shape.grouped(), inverse_permutation(grouped_from_interleaved(shape)))


def s_value(table: ProbabilityTable, b: str, x: int, z: int, conditional: bool = False) -> float:
    """Correlator sum_{a,c} a c P(a, b, c | x, z); divided by P(b) if ``conditional``."""
    bi = BOB_OUTCOMES.index(b)
    raw = sum(
        a * c * table.p[ai, bi, ci, x - 1, z - 1]
        for ai, a in enumerate(OUTCOMES)
        for ci, c in enumerate(OUTCOMES)
    )
    if conditional:
        return float(raw / table.marginal_b()[bi, x - 1, z - 1])
    return float(raw)


def functional_b(S: dict, b: str, as_printed: bool = False) -> float:
    """Three-CHSH combination for Bob's outcome ``b`` from conditional S-values.

    The (S25 + S26) term carries (-1)^{b1}; ``as_printed=True`` uses
    (-1)^{b2} there instead, which caps outcomes 01 and 10 at 4 sqrt(2).
    """
    b1, b2 = int(b[0]), int(b[1])
    s1, s2, s12 = (-1) ** b1, (-1) ** b2, (-1) ** (b1 + b2)
    s25 = s2 if as_printed else s1
    return (
        s2 * (S[1, 1] + S[1, 2]) + s1 * (S[2, 1] - S[2, 2])
        + s2 * (S[1, 3] + S[1, 4]) - s12 * (S[3, 3] - S[3, 4])
        + s25 * (S[2, 5] + S[2, 6]) - s12 * (S[3, 5] - S[3, 6])
    )


@dataclass
class BellReport:
    backend: str
    p_b: dict
    s_raw: dict
    s_conditional: dict
    t_b: dict
    total: float
    reference_value: float = QUANTUM_VALUE
    real_tensor_bound: float = REAL_TENSOR_BOUND
    total_as_printed: float = field(default=float("nan"))

    def to_dict(self) -> dict:
        key = lambda xz: f"{xz[0]}{xz[1]}"  # noqa: E731
        return {
            "backend": self.backend,
            "T": self.total,
            "T_b": dict(self.t_b),
            "P_b": dict(self.p_b),
            "S_conditional": {b: {key(k): v for k, v in sorted(s.items())} for b, s in self.s_conditional.items()},
            "S_raw": {b: {key(k): v for k, v in sorted(s.items())} for b, s in self.s_raw.items()},
            "reference_6sqrt2": self.reference_value,
            "real_tensor_product_bound": self.real_tensor_bound,
            "T_as_printed_signs": self.total_as_printed,
        }


def bell_functional(table: ProbabilityTable) -> BellReport:
    pb = table.p_b()
    s_raw, s_cond, t_b, t_printed = {}, {}, {}, {}
    settings = [(x, z) for x in range(1, 4) for z in range(1, 7)]
    for bi, b in enumerate(BOB_OUTCOMES):
        s_raw[b] = {xz: s_value(table, b, *xz) for xz in settings}
        s_cond[b] = {xz: s_value(table, b, *xz, conditional=True) for xz in settings}
        t_b[b] = functional_b(s_cond[b], b)
        t_printed[b] = functional_b(s_cond[b], b, as_printed=True)
    total = float(sum(pb[i] * t_b[b] for i, b in enumerate(BOB_OUTCOMES)))
    total_printed = float(sum(pb[i] * t_printed[b] for i, b in enumerate(BOB_OUTCOMES)))
    return BellReport(
        backend=table.backend,
        p_b={b: float(pb[i]) for i, b in enumerate(BOB_OUTCOMES)},
        s_raw=s_raw,
        s_conditional=s_cond,
        t_b={b: float(v) for b, v in t_b.items()},
        total=total,
        total_as_printed=total_printed,
    )


def conditional_state_ac(spec: ExperimentSpec | None = None, b: str = "00") -> np.ndarray:
    """Alice-Charlie reduced real state after Bob's outcome ``b``, expanded.

    The result acts on (A, C, A', C'): Bob's mains B1 B2 and flags B1' B2'
    are traced out of the collapsed expanded pure state.
    """
    spec = spec or default_spec()
    shape = spec.shape
    psi0 = s_map(spec.initial_state()).expanded()
    proj_main = kron(np.eye(2), spec.bob[b].matrix.real, np.eye(2))
    collapse = kron(proj_main, np.eye(2**shape.n))
    post = collapse @ psi0
    p_b = float(post @ post)
    rho = np.outer(post, post) / p_b
    # grouped order: A B1 B2 C A' B1' B2' C'
    return partial_trace(rho, shape.grouped(), [0, 3, 4, 7])


def expected_conditional_state_ac() -> np.ndarray:
    """|phi+><phi+|_AC x (|phi-><phi-| + |psi+><psi+|)_{A'C'} / 2."""
    phip, phim, psip = (bell_state(n).amplitudes.real for n in ("phi+", "phi-", "psi+"))
    return kron(np.outer(phip, phip), 0.5 * (np.outer(phim, phim) + np.outer(psip, psip)))


def run(backend: str = "complex", spec: ExperimentSpec | None = None) -> tuple[ProbabilityTable, BellReport]:
    table = probability_table(spec, backend)
    table.check()
    return table, bell_functional(table)
