import numpy as np
import pytest

from flagqm.complexqm import (
    ComplexOperator,
    ComplexState,
    MeasurementEnsemble,
    ZeroProbabilityError,
    basis_state,
    bell_state,
    born_probability,
    expectation,
    measure_and_collapse,
    pauli,
)
from flagqm.sampling import random_ensemble_projectors, random_shape, random_state
from flagqm.tensor_core import SystemShape, kron

TOL = 1e-9
S = 1 / np.sqrt(2)
Q = SystemShape.of(2)
ZERO = ComplexState(np.array([1, 0], dtype=complex))
ONE = ComplexState(np.array([0, 1], dtype=complex))
PLUS = ComplexState(np.array([S, S], dtype=complex))
Z_BASIS = MeasurementEnsemble.from_states([ZERO, ONE])


def test_born_basics():
    assert born_probability(ZERO, ZERO.projector()) == pytest.approx(1)
    assert born_probability(ZERO, ONE.projector()) == pytest.approx(0)


def test_born_bell_marginal():
    psi = bell_state("phi+") @ bell_state("phi+")
    proj = kron(np.eye(2), bell_state("phi+").projector().matrix, np.eye(2))
    p = born_probability(psi, ComplexOperator(proj, psi.shape, "projector"))
    assert abs(p - 0.25) < TOL


def test_born_rejects_bad_input():
    with pytest.raises(ValueError):
        born_probability(ZERO, ComplexOperator(np.eye(4), SystemShape.qubits(2), "projector"))
    with pytest.raises(ValueError):
        born_probability(ZERO, pauli("X"))


def test_expectation_examples():
    assert expectation(ZERO, pauli("Z")) == pytest.approx(1)
    assert abs(expectation(PLUS, pauli("Z"))) < TOL
    X, Z = pauli("X").matrix, pauli("Z").matrix
    obs = ComplexOperator(kron(Z, (X + Z) * S), SystemShape.qubits(2), "hermitian")
    assert abs(expectation(bell_state("φ⁺"), obs) - S) < TOL


def test_expectation_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expectation(ZERO, ComplexOperator(np.array([[0, 1], [0, 0]]), Q))


def test_measure_and_collapse():
    p, post = measure_and_collapse(ZERO, Z_BASIS, 0)
    assert p == pytest.approx(1) and np.allclose(post.amplitudes, [1, 0])
    p, post = measure_and_collapse(PLUS, Z_BASIS, 1)
    assert p == pytest.approx(0.5) and np.allclose(post.amplitudes, [0, 1])
    with pytest.raises(ZeroProbabilityError):
        measure_and_collapse(ZERO, Z_BASIS, 1)


def test_entanglement_swap_collapse():
    psi = bell_state("phi+") @ bell_state("phi+")
    names = ("phi+", "psi+", "phi-", "psi-")
    bob = MeasurementEnsemble.from_states([bell_state(n) for n in names], names)
    full = MeasurementEnsemble(
        tuple(ComplexOperator(kron(np.eye(2), p.matrix, np.eye(2)), psi.shape, "projector") for p in bob.projectors),
        names,
    )
    p, post = measure_and_collapse(psi, full, "phi+")
    assert abs(p - 0.25) < TOL
    # reorder (A, B1, B2, C) -> (A, C, B1, B2)
    v = post.amplitudes.reshape(2, 2, 2, 2).transpose(0, 3, 1, 2).reshape(-1)
    expected = np.kron(bell_state("phi+").amplitudes, bell_state("phi+").amplitudes)
    assert np.allclose(v, expected, atol=TOL)


def test_standard_tables():
    assert np.allclose(pauli("Y").matrix, [[0, -1j], [1j, 0]])
    assert np.allclose(bell_state("phi+").amplitudes, np.array([1, 0, 0, 1]) * S)
    assert np.allclose(bell_state("ψ⁻").amplitudes, np.array([0, -1, 1, 0]) * S)
    with pytest.raises(ValueError):
        pauli("W")
    with pytest.raises(ValueError):
        bell_state("chi+")


def test_operator_kind_validation():
    with pytest.raises(ValueError):
        ComplexOperator(np.array([[1, 1], [0, 1]]), Q, "projector")
    with pytest.raises(ValueError):
        ComplexOperator(np.diag([2.0, -1.0]), Q, "density")
    with pytest.raises(ValueError):
        MeasurementEnsemble((ZERO.projector(),))


def test_random_ensembles_sum_to_one(rng):
    for _ in range(50):
        shape = random_shape(rng)
        psi = random_state(rng, shape)
        ens = MeasurementEnsemble(tuple(random_ensemble_projectors(rng, shape)))
        assert abs(sum(born_probability(psi, p) for p in ens.projectors) - 1) < TOL
        for label in ens.labels:
            try:
                _, post = measure_and_collapse(psi, ens, label)
            except ZeroProbabilityError:
                continue
            assert abs(post.norm() - 1) < TOL


def test_basis_state():
    assert np.array_equal(basis_state(2, SystemShape.of(3)).amplitudes, [0, 0, 1])
