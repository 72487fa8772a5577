import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagqm.complexqm import ComplexOperator, ComplexState, pauli
from flagqm.realmap import (
    J_F,
    InvariantViolation,
    NotCanonicalError,
    RealOperator,
    RealState,
    canonicalize,
    compose_flag_basis_check,
    equivalent,
    flag_basis,
    flag_rotation,
    flag_tensor_ops,
    flag_tensor_states,
    kernel_basis,
    kernel_projector,
    myrheim_projector,
    product_of_single_flags,
    r_inv,
    r_map,
    real_expectation,
    real_overlap,
    s_inv,
    s_map,
    t_apply,
    t_inv_left,
    t_map,
)
from flagqm.sampling import random_hermitian, random_matrix, random_shape, random_state, random_unitary
from flagqm.tensor_core import SystemShape, kron

TOL = 1e-9
S = 1 / np.sqrt(2)
Q = SystemShape.of(2)
seeds = st.integers(0, 2**32 - 1)


def ket(*bits):
    v = np.zeros(2 ** len(bits))
    v[int("".join(map(str, bits)), 2)] = 1
    return v


def state(*amps):
    return ComplexState(np.array(amps, dtype=complex))


def op(m):
    return ComplexOperator(np.array(m, dtype=complex), SystemShape.qubits(int(np.log2(len(m)))))


# ---------------------------------------------------------------- s_map / s_inv

def test_s_map_examples():
    a = s_map(state(1, 0))
    assert np.array_equal(a.re, [1, 0]) and np.array_equal(a.im, [0, 0])
    b = s_map(state(1j, 0))
    assert np.array_equal(b.re, [0, 0]) and np.array_equal(b.im, [1, 0])
    assert real_overlap(a, b) == 0
    c = s_map(state(S, 1j * S))
    assert np.allclose(c.re, [S, 0]) and np.allclose(c.im, [0, S])


def test_s_map_expanded_is_single_flag_for_one_party():
    v = s_map(state(S, 1j * S))
    assert np.allclose(v.expanded(), kron([S, 0], [1, 0]) + kron([0, S], [0, 1]))


def test_s_inv_examples():
    assert np.allclose(s_inv(RealState([0, 0], [1, 0], Q)).amplitudes, [1j, 0])
    assert np.allclose(s_inv(RealState([S, 0], [0, S], Q)).amplitudes, [S, 1j * S])


@given(seeds)
def test_s_round_trip_and_norm(seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, random_shape(rng))
    assert np.allclose(s_inv(s_map(psi)).amplitudes, psi.amplitudes, atol=TOL)
    assert abs(np.linalg.norm(r_map(psi)) - 1) < TOL
    assert np.allclose(r_inv(r_map(psi), psi.shape), psi.amplitudes, atol=TOL)


@given(seeds, st.floats(-np.pi, np.pi))
def test_phase_becomes_flag_rotation(seed, alpha):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, random_shape(rng, max_n=1))
    rotated = s_map(ComplexState(np.exp(1j * alpha) * psi.amplitudes, psi.shape)).single_flag()
    expected = kron(np.eye(psi.shape.dim), flag_rotation(alpha)) @ s_map(psi).single_flag()
    assert np.allclose(rotated, expected, atol=TOL)


def test_flag_rotation_examples():
    assert np.allclose(flag_rotation(0), np.eye(2))
    assert np.allclose(flag_rotation(np.pi / 2), J_F, atol=1e-15)
    assert np.allclose(flag_rotation(np.pi), -np.eye(2))


# ---------------------------------------------------------------- t_map

def test_t_map_examples():
    one = t_map(op(np.eye(2)))
    assert np.array_equal(one.re, np.eye(2)) and not one.im.any()
    x = t_map(pauli("X"))
    assert np.array_equal(x.re, pauli("X").matrix.real) and not x.im.any()
    y = t_map(pauli("Y"))
    assert not y.re.any() and np.array_equal(y.im, [[0, -1], [1, 0]])


def test_t_inv_left_examples():
    assert np.allclose(t_inv_left(RealOperator(np.eye(2), np.zeros((2, 2)), Q)).matrix, np.eye(2))
    y = RealOperator(np.zeros((2, 2)), [[0, -1], [1, 0]], Q)
    assert np.allclose(t_inv_left(y).matrix, pauli("Y").matrix)


@given(seeds)
def test_t_map_algebra(seed):
    rng = np.random.default_rng(seed)
    shape = random_shape(rng)
    a, b = random_matrix(rng, shape), random_matrix(rng, shape)
    psi = random_state(rng, shape)
    ta, tb = t_map(a).expanded(), t_map(b).expanded()
    # homomorphism and intertwining, both on the expanded matrices
    assert np.allclose(ta @ tb, t_map(a.dot(b)).expanded(), atol=TOL)
    assert np.allclose(ta @ r_map(psi), r_map(a.apply(psi)), atol=TOL)
    assert t_apply(t_map(a), s_map(psi)).allclose(s_map(a.apply(psi)))
    # left inverse from both the compact pair and the expanded matrix
    assert np.allclose(t_inv_left(t_map(a)).matrix, a.matrix, atol=TOL)
    assert np.allclose(t_inv_left(ta, shape).matrix, a.matrix, atol=TOL)


@given(seeds)
def test_expectation_and_overlap(seed):
    rng = np.random.default_rng(seed)
    shape = random_shape(rng)
    h = random_hermitian(rng, shape)
    phi, psi = random_state(rng, shape), random_state(rng, shape)
    oracle = np.vdot(psi.amplitudes, h.matrix @ psi.amplitudes).real
    assert abs(r_map(psi) @ t_map(h).expanded() @ r_map(psi) - oracle) < TOL
    assert abs(real_expectation(s_map(psi), t_map(h)) - oracle) < TOL
    assert abs(real_overlap(s_map(phi), s_map(psi)) - np.vdot(phi.amplitudes, psi.amplitudes).real) < TOL


@given(seeds)
def test_symmetric_and_orthogonal_images(seed):
    rng = np.random.default_rng(seed)
    shape = random_shape(rng)
    th = t_map(random_hermitian(rng, shape)).expanded()
    tu = t_map(random_unitary(rng, shape)).expanded()
    assert np.allclose(th, th.T, atol=TOL)
    assert np.allclose(tu @ tu.T, kernel_projector(shape) if shape.n > 1 else np.eye(len(tu)), atol=TOL)


def test_t_inv_left_rejects_non_image():
    with pytest.raises(NotCanonicalError):
        t_inv_left(np.diag([1.0, 0, 0, 0]), Q)


def test_real_expectation_examples():
    assert real_expectation(s_map(state(1, 0)), t_map(pauli("Z"))) == pytest.approx(1)
    assert abs(real_expectation(s_map(state(S, S)), t_map(pauli("Y")))) < TOL


# ---------------------------------------------------------------- flag basis

def test_flag_basis_examples():
    one = flag_basis(1)
    assert np.array_equal(one.psi_even, [1, 0]) and np.array_equal(one.psi_odd, [0, 1])
    xz = pauli("X").matrix.real @ pauli("Z").matrix.real
    assert np.array_equal(one.J, xz)
    two = flag_basis(2)
    assert np.allclose(two.psi_even, (ket(0, 0) - ket(1, 1)) * S)
    assert np.allclose(two.psi_odd, (ket(0, 1) + ket(1, 0)) * S)
    three = flag_basis(3)
    assert np.allclose(three.psi_even, (ket(0, 0, 0) - ket(0, 1, 1) - ket(1, 0, 1) - ket(1, 1, 0)) / 2)


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_flag_basis_composition(n, m):
    assert compose_flag_basis_check(n, m) < TOL


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_j_squares_to_minus_i(n):
    fb = flag_basis(n)
    assert np.allclose(fb.J @ fb.J, -fb.I)
    assert np.allclose(fb.I @ fb.I, fb.I)


# ---------------------------------------------------------------- quotient

def test_kernel_rank():
    for n in (2, 3):
        shape = SystemShape.qubits(n)
        rank = np.linalg.matrix_rank(kernel_projector(shape))
        assert rank == 2 * shape.dim
        assert shape.expanded_dim - rank == 4**n - 2 * 2**n
        assert kernel_basis(shape).shape[1] == shape.expanded_dim - rank


def test_kernel_vectors(rng):
    shape = SystemShape.qubits(2)
    p = kernel_projector(shape)
    prime = rng.normal(size=4)
    for flag in (ket(0, 0) + ket(1, 1), ket(0, 1) - ket(1, 0)):
        assert np.allclose(p @ kron(prime, flag), 0)
    with pytest.raises(ValueError):
        kernel_projector(Q)


def test_canonicalize_examples():
    shape = SystemShape.qubits(2)
    a = canonicalize(kron(ket(0, 1), ket(0, 0)), shape)
    assert np.allclose(a.re, ket(0, 1)) and np.allclose(a.im, 0)
    assert np.allclose(a.expanded(), kron(ket(0, 1), flag_basis(2).psi_even))
    b = canonicalize(-kron(ket(0, 1), ket(1, 1)), shape)
    assert a.allclose(b)
    with pytest.raises(NotCanonicalError):
        canonicalize(kron(ket(0, 1), ket(0, 1) - ket(1, 0)), shape)


def test_equivalent_examples(rng):
    shape = SystemShape.qubits(2)
    v = rng.normal(size=16)
    assert equivalent(v, v, shape)
    assert equivalent(kron(ket(0, 1), ket(0, 0)), -kron(ket(0, 1), ket(1, 1)), shape)
    assert not equivalent(kron(ket(0, 1), ket(0, 0)), kron(ket(0, 1), ket(0, 1)), shape)


def test_naive_product_lands_in_the_right_class():
    a, b = s_map(state(1, 0)), s_map(state(0, 1))
    assert np.allclose(product_of_single_flags(a, b), kron(ket(0, 1), ket(0, 0)))


# ---------------------------------------------------------------- flag tensor product

def test_flag_tensor_states_examples():
    out = flag_tensor_states(s_map(state(1, 0)), s_map(state(0, 1)))
    assert np.allclose(out.re, ket(0, 1)) and np.allclose(out.im, 0)
    out = flag_tensor_states(s_map(state(1j, 0)), s_map(state(0, -1j)))
    assert np.allclose(out.re, ket(0, 1)) and np.allclose(out.im, 0)


def test_flag_tensor_ops_examples(rng):
    X, Y, Z = (pauli(n) for n in "XYZ")
    assert flag_tensor_ops(t_map(X), t_map(Z)).allclose(t_map(X @ Z))
    yy = flag_tensor_ops(t_map(Y), t_map(Y))
    assert yy.allclose(t_map(Y @ Y))
    assert not yy.im.any() and np.allclose(yy.re, -kron(Y.matrix.imag, Y.matrix.imag))
    a2 = random_matrix(rng, Q)
    one = ComplexOperator(np.eye(2), Q)
    assert flag_tensor_ops(t_map(one), t_map(a2)).allclose(t_map(one @ a2))


@given(seeds)
def test_quotient_consistency(seed):
    rng = np.random.default_rng(seed)
    sa, sb = random_shape(rng, max_n=2), random_shape(rng, max_n=2)
    psi, phi = random_state(rng, sa), random_state(rng, sb)
    a, b = random_matrix(rng, sa), random_matrix(rng, sb)
    joint = flag_tensor_states(s_map(psi), s_map(phi))
    assert joint.allclose(s_map(psi @ phi))
    if sa.n == sb.n == 1:
        naive = product_of_single_flags(s_map(psi), s_map(phi))
        assert canonicalize(naive, sa + sb).allclose(s_map(psi @ phi))
    assert flag_tensor_ops(t_map(a), t_map(b)).allclose(t_map(a @ b))


# ---------------------------------------------------------------- Myrheim

@pytest.mark.parametrize("dims", [(2, 2), (2, 2, 2), (3, 2), (2, 3, 2)])
def test_myrheim_matches_kernel_projector(dims):
    p, residual = myrheim_projector(SystemShape(dims))
    assert residual < TOL
    assert np.allclose(p, kernel_projector(SystemShape(dims)))


def test_myrheim_range():
    with pytest.raises(ValueError):
        myrheim_projector(SystemShape.qubits(4))


def test_compose_check_raises_on_violation(monkeypatch):
    with pytest.raises(InvariantViolation):
        compose_flag_basis_check(1, 1, atol=-1)
