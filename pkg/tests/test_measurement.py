import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decolab import qstate, quantify
from decolab.envmodels import measurement as ms
from decolab.errors import DimensionError, ValidationError

seeds = st.integers(0, 2**32 - 1)
CHAIN = ms.MeasurementChain(2, 3, (1, 2), 0)


def test_chain_validation():
    with pytest.raises(ValidationError):
        ms.MeasurementChain(2, 2, (1, 1))
    with pytest.raises(ValidationError):
        ms.MeasurementChain(2, 2, (0, 2))
    with pytest.raises(ValidationError):
        ms.MeasurementChain(2, 2, (0,))
    with pytest.raises(ValidationError):
        ms.MeasurementChain(2, 2, (0, 1), initial_pointer=5)


def test_premeasurement_unitary():
    u = CHAIN.unitary()
    assert np.allclose(u.conj().T @ u, np.eye(6))


def test_basis_inputs_correlate_perfectly():
    for i, r in enumerate(CHAIN.correlation_map):
        out = ms.pre_measurement(CHAIN, qstate.ket(i, 2))
        assert np.allclose(out, qstate.tensor(qstate.ket(i, 2), qstate.ket(r, 3)))
        assert len(ms.schmidt_coefficients(out, (2, 3))) == 1


def test_superposition_entangles():
    out = ms.pre_measurement(CHAIN, qstate.normalize([1, 1]))
    coeffs = ms.schmidt_coefficients(out, (2, 3))
    assert len(coeffs) == 2 and np.allclose(coeffs, [1 / math.sqrt(2)] * 2)


def test_reduction_examples():
    out = ms.pre_measurement(CHAIN, qstate.normalize([1, 1]))
    red = ms.von_neumann_reduce(out, CHAIN)
    expected = 0.5 * (qstate.pure_state(qstate.tensor(qstate.ket(0, 2), qstate.ket(1, 3)))
                      + qstate.pure_state(qstate.tensor(qstate.ket(1, 2), qstate.ket(2, 3))))
    assert np.allclose(red.rho, expected) and red.leakage == pytest.approx(0, abs=1e-15)
    basis_out = ms.pre_measurement(CHAIN, qstate.ket(1, 2))
    red = ms.von_neumann_reduce(basis_out, CHAIN)
    assert np.allclose(red.rho, qstate.pure_state(basis_out)) and red.leakage == 0
    stray = qstate.normalize([1, 1, 0, 0, 0, 0])  # |0>|R_0>: not a correlated pair
    assert ms.von_neumann_reduce(stray, CHAIN).leakage == pytest.approx(0.5)


@given(seeds)
def test_premeasurement_norm_and_marginal_purity(seed):
    rng = np.random.default_rng(seed)
    out = ms.pre_measurement(CHAIN, qstate.random_state_vector(2, rng))
    assert abs(np.linalg.norm(out) - 1) <= 1e-12
    i = int(rng.integers(0, 2))
    rho = qstate.pure_state(ms.pre_measurement(CHAIN, qstate.ket(i, 2)))
    for keep in (0, 1):
        assert qstate.purity(qstate.partial_trace(rho, [2, 3], keep=[keep])) == pytest.approx(1.0)


def test_conditional_states_gram():
    for d in (2, 3, 4):
        e = ms.conditional_states(d, 0.9)
        gram = e.conj().T @ e
        assert np.allclose(gram, (1 - math.cos(0.9)) * np.eye(d) + math.cos(0.9))
        assert np.allclose(e[:, 0], qstate.ket(0, e.shape[0]))


def test_controlled_rotation_is_unitary():
    u = ms.controlled_rotation(qstate.random_unitary(3, np.random.default_rng(2)), 0.4, system_dim=2)
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]))


def test_dephase_trivial_cases(rng):
    rho = qstate.random_density_matrix(4, rng)
    assert np.allclose(ms.dephase(rho, ms.DephasingEnvironment(0, 1.0), np.eye(2)), rho)
    assert np.allclose(ms.dephase(rho, ms.DephasingEnvironment(5, 0.0), np.eye(2)), rho)


def test_dephase_quarter_angle_twenty_units():
    plus = qstate.pure_state(qstate.normalize([1, 1]))
    out = ms.dephase(plus, ms.DephasingEnvironment(20, math.pi / 4), np.eye(2))
    assert 2 * abs(out[0, 1]) == pytest.approx(2.0**-10, rel=1e-10)
    assert 2.0**-10 == pytest.approx(9.8e-4, rel=0.01)


@pytest.mark.parametrize("pointer_dim", [2, 3])
def test_dephase_matches_closed_form(pointer_dim):
    rng = np.random.default_rng(pointer_dim)
    rho = qstate.random_density_matrix(2 * pointer_dim, rng)
    basis = qstate.random_unitary(pointer_dim, rng)
    for n in (0, 1, 4, 30):
        env = ms.DephasingEnvironment(n, 0.6)
        exact = ms.dephase(rho, env, basis)
        assert np.max(np.abs(exact - ms.dephase_closed_form(rho, env, basis))) <= 1e-10


def test_sequential_and_joint_contraction_agree(rng):
    rho = qstate.random_density_matrix(4, rng)
    env = ms.DephasingEnvironment(4, 1.1)
    seq = ms.dephase(rho, env, np.eye(2))
    joint = ms.dephase(rho, env, np.eye(2), method="joint")
    assert np.max(np.abs(seq - joint)) <= 1e-12
    with pytest.raises(ValidationError):
        ms.dephase(rho, env, np.eye(2), method="fast")


def test_dephase_dimension_mismatch():
    with pytest.raises(DimensionError):
        ms.dephase(np.eye(3) / 3, ms.DephasingEnvironment(1, 0.3), np.eye(2))


def test_unrealizable_overlap_rejected():
    with pytest.raises(ValidationError):
        ms.conditional_states(3, 0.9 * math.pi)


def test_environment_validation():
    with pytest.raises(ValidationError):
        ms.DephasingEnvironment(-1, 0.3)
    with pytest.raises(ValidationError):
        ms.DephasingEnvironment(1, 4.0)


def test_apparatus_gap_monotone_in_n():
    rho = qstate.tensor(np.diag([1.0, 0.0]), qstate.pure_state(qstate.normalize([1, 1])))
    gaps = []
    for n in range(31):
        out = ms.dephase(rho, ms.DephasingEnvironment(n, math.pi / 4), np.eye(2))
        gaps.append(quantify.decoherence_gap(qstate.partial_trace(out, [2, 2], keep=[1]), np.eye(2)).gap)
    assert gaps[0] == pytest.approx(math.log(2))
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-8


# three conditional states with overlap cos(theta) exist only for cos(theta) >= -1/2
@given(seeds, st.integers(0, 8), st.floats(0, 2 * math.pi / 3))
def test_dephase_keeps_populations_and_shrinks_coherences(seed, n, theta):
    rng = np.random.default_rng(seed)
    rho = qstate.random_density_matrix(6, rng)
    basis = qstate.random_unitary(3, rng)
    out = ms.dephase(rho, ms.DephasingEnvironment(n, theta), basis)
    full = qstate.tensor(np.eye(2), basis)
    a, b = full.conj().T @ rho @ full, full.conj().T @ out @ full
    assert np.max(np.abs(np.diagonal(a) - np.diagonal(b))) <= 1e-12
    assert np.all(np.abs(b) <= np.abs(a) + 1e-12)
