import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from decolab import histories as hist
from decolab import qstate
from decolab.errors import DimensionError, IndexRangeError, ValidationError
from decolab.qstate import PAULI_Z
from decolab.scenarios import conserved_history_set, merge_last_slot, random_two_slit

seeds = st.integers(0, 2**32 - 1)
Z_BASIS = hist.ProjectiveDecomposition.from_basis(np.eye(2))
X_BASIS = hist.ProjectiveDecomposition.from_basis(np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def random_history_set(rng, dim=None):
    dim = dim or int(rng.integers(2, 7))
    n_times = int(rng.integers(1, 4))
    decs = []
    for _ in range(n_times):
        k = int(rng.integers(1, min(3, dim) + 1))
        cuts = np.sort(rng.choice(np.arange(1, dim), size=k - 1, replace=False)) if k > 1 else []
        bounds = [0, *cuts, dim]
        decs.append(hist.ProjectiveDecomposition.from_basis(
            qstate.random_unitary(dim, rng), [list(range(a, b)) for a, b in zip(bounds, bounds[1:])]))
    times = np.cumsum(rng.uniform(0.1, 2.0, n_times))
    return hist.HistorySet(tuple(times), tuple(decs), qstate.random_hermitian(dim, rng),
                           qstate.random_density_matrix(dim, rng))


def test_decomposition_validation():
    with pytest.raises(ValidationError):
        hist.ProjectiveDecomposition((np.diag([1, 0, 0]), np.diag([0, 1, 0])))
    with pytest.raises(ValidationError):
        hist.ProjectiveDecomposition((np.diag([1, 1]), np.diag([1, 0]), np.diag([0, 1]) * 0))
    with pytest.raises(DimensionError):
        hist.ProjectiveDecomposition((np.eye(2), np.zeros((3, 3))))


def test_history_set_validation():
    with pytest.raises(ValidationError):
        hist.HistorySet((1.0, 1.0), (Z_BASIS, Z_BASIS), np.zeros((2, 2)), np.eye(2) / 2)
    with pytest.raises(ValidationError):
        hist.HistorySet((1.0,), (Z_BASIS, Z_BASIS), np.zeros((2, 2)), np.eye(2) / 2)


def test_index_range_checked():
    hset = hist.HistorySet((1.0,), (Z_BASIS,), np.zeros((2, 2)), np.eye(2) / 2)
    with pytest.raises(IndexRangeError):
        hist.class_operator(hset, (2,))
    with pytest.raises(IndexRangeError):
        hist.decoherence_functional(hset, (0, 0), (0,))


def test_class_operator_identity_projector():
    hset = hist.HistorySet((0.7,), (hist.ProjectiveDecomposition((np.eye(3),)),),
                           qstate.random_hermitian(3, np.random.default_rng(0)), np.eye(3) / 3)
    assert np.allclose(hist.class_operator(hset, (0,)), np.eye(3))


def test_class_operator_zero_hamiltonian_is_plain_product():
    hset = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), np.eye(2) / 2)
    for a in range(2):
        for b in range(2):
            expected = Z_BASIS.projectors[a] @ X_BASIS.projectors[b]
            assert np.allclose(hist.class_operator(hset, (a, b)), expected)


def test_class_operator_pauli_z_by_hand():
    t1, t2 = 0.3, 1.1
    hset = hist.HistorySet((t1, t2), (Z_BASIS, X_BASIS), PAULI_Z, np.eye(2) / 2)
    # P_+(t) = e^{iZt}|+><+|e^{-iZt} = 1/2 [[1, e^{2it}], [e^{-2it}, 1]]; P_0(t) = |0><0|
    expected = np.array([[0.5, 0.5 * np.exp(2j * t2)], [0, 0]])
    assert np.allclose(hist.class_operator(hset, (0, 0)), expected)


def test_single_time_functional():
    # Tr(P_a rho P_b) = Tr(P_b P_a rho) = 0 for a != b, whatever the cross terms of rho
    rho = np.array([[0.6, 0.2], [0.2, 0.4]])
    hset = hist.HistorySet((1.0,), (Z_BASIS,), np.zeros((2, 2)), rho)
    assert hist.decoherence_functional(hset, (0,), (1,)) == 0
    assert hist.decoherence_functional(hset, (0,), (0,)) == pytest.approx(0.6)
    rep = hist.consistency_check(hset, epsilon=1e-10)
    assert rep.consistent and np.allclose(rep.probabilities, [0.6, 0.4])


def test_two_time_cross_terms_control_consistency():
    plus = qstate.pure_state(qstate.normalize([1, 1]))
    coherent = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), plus)
    # d((0,a),(1,a)) = <+|P_1 Q_a P_0|+> = +-1/4
    assert abs(hist.decoherence_functional(coherent, (0, 0), (1, 0))) == pytest.approx(0.25)
    assert not hist.consistency_check(coherent, 1e-10).consistent
    mixed = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), np.diag([0.5, 0.5]))
    assert hist.consistency_check(mixed, 1e-10).consistent


def test_schrodinger_chain_matches_heisenberg(rng):
    for _ in range(20):
        hset = random_history_set(rng)
        for alpha in hset.histories():
            assert np.allclose(hist.class_operator(hset, alpha), hist.class_operator_chain(hset, alpha), atol=1e-12)


def test_global_phase_invariance(rng):
    hset = random_history_set(rng, dim=4)
    shifted = hist.HistorySet(hset.times, hset.decompositions, hset.hamiltonian + 3.7 * np.eye(4),
                              hset.initial_state)
    assert np.allclose(hist.decoherence_table(hset)[1], hist.decoherence_table(shifted)[1], atol=1e-12)


def test_two_slit_diagonal_reproduces_sequential_probabilities(rng):
    psi, slits, screen = random_two_slit(rng, 6)
    report = hist.consistency_check(hist.two_slit_history_set(psi, slits, screen))
    table = hist.two_slit_probabilities(psi, slits, screen)
    assert np.allclose(np.real(np.diagonal(report.defect_table)), table.ravel(), atol=1e-12)


def test_two_slit_table_examples():
    slits = hist.ProjectiveDecomposition.from_basis(np.eye(2))
    psi = qstate.normalize([1, 1])
    assert np.allclose(hist.two_slit_probabilities(psi, slits, slits), np.diag([0.5, 0.5]))
    one = hist.two_slit_probabilities(np.array([1, 0]), slits, X_BASIS)
    assert np.allclose(one[1], 0)


def test_defect_examples():
    slits = hist.ProjectiveDecomposition.from_basis(np.eye(2))
    assert hist.additivity_defect(np.array([1, 0]), slits, X_BASIS, 0) == pytest.approx(0.0)
    psi = qstate.normalize([1, 1])
    # p(+) = 1, each slit contributes 1/4: defect 1/2 = 2 Re <psi|P_1 Q_+ P_2|psi>
    assert hist.additivity_defect(psi, slits, X_BASIS, 0) == pytest.approx(0.5)
    assert hist.interference_term(psi, slits, X_BASIS, 0) == pytest.approx(0.5)
    assert sum(hist.additivity_defect(psi, slits, X_BASIS, j) for j in range(2)) == pytest.approx(0, abs=1e-15)
    with pytest.raises(IndexRangeError):
        hist.additivity_defect(psi, slits, X_BASIS, 2)


def test_defect_brute_force_dim4():
    from decolab.scenarios import demo_two_slit
    psi, slits, screen = demo_two_slit()
    for j, q in enumerate(screen.projectors):
        # expand |Q_j (P_1 + P_2) psi|^2 - |Q_j P_1 psi|^2 - |Q_j P_2 psi|^2 directly
        a = q @ slits.projectors[0] @ psi
        b = q @ slits.projectors[1] @ psi
        cross = np.vdot(a + b, a + b).real - np.vdot(a, a).real - np.vdot(b, b).real
        assert hist.additivity_defect(psi, slits, screen, j) == pytest.approx(cross, abs=1e-14)
    assert hist.additivity_defect(psi, slits, screen, 0) > 0.1


def test_two_slit_superposition_inconsistent():
    from decolab.scenarios import demo_two_slit
    psi, slits, screen = demo_two_slit()
    psi = np.real(psi) / np.linalg.norm(np.real(psi))  # real amplitudes: off-diagonals are real
    rep = hist.consistency_check(hist.two_slit_history_set(psi, slits, screen))
    defects = [abs(hist.additivity_defect(psi, slits, screen, j)) for j in range(len(screen))]
    assert not rep.consistent and rep.probabilities is None
    assert rep.max_offdiag == pytest.approx(max(defects) / 2, abs=1e-12)


def test_conserved_quantities_decohere(rng):
    for _ in range(10):
        rep = hist.consistency_check(conserved_history_set(rng, 5, 3), epsilon=1e-10)
        assert rep.consistent
        assert rep.probabilities.sum() == pytest.approx(1.0, abs=1e-8)


def test_coarse_grained_probabilities_add(rng):
    hset = conserved_history_set(rng, 6, 2)
    fine = hist.consistency_check(hset, 1e-10)
    coarse, groups = merge_last_slot(hset, 0, 1)
    direct = hist.consistency_check(coarse, 1e-10)
    assert direct.consistent
    assert np.allclose(direct.probabilities, [fine.probabilities[g].sum() for g in groups], atol=1e-9)
    assert np.allclose(hist.coarse_grain(fine.defect_table, groups), direct.defect_table, atol=1e-12)


def test_relative_mode_undefined_and_defined():
    rho = qstate.pure_state(qstate.normalize([1, 1]))
    hset = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), rho)
    rel = hist.consistency_check(hset, 0.5, mode="relative")
    assert rel.max_offdiag == pytest.approx(1.0) and not rel.consistent
    zero = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), np.diag([1.0, 0.0]))
    assert hist.consistency_check(zero, 1e-8, mode="relative").consistent
    # exact tables obey Cauchy-Schwarz, so only a corrupted table can be undefined
    assert hist._offdiag_measure(np.array([[0.0, 1e-3], [1e-3, 1.0]]), "relative") is None
    with pytest.raises(ValidationError):
        hist.consistency_check(hset, 1e-8, mode="other")
    with pytest.raises(ValidationError):
        hist.consistency_check(hset, -1.0)


def test_report_serialization():
    hset = hist.HistorySet((1.0, 2.0), (Z_BASIS, X_BASIS), np.zeros((2, 2)), np.diag([0.3, 0.7]))
    rep = hist.consistency_check(hset)
    obj = json.loads(json.dumps(rep.to_json()))
    assert obj["histories"][1] == [0, 1]
    assert np.allclose(np.array(obj["defect_table"]["re"]) + 1j * np.array(obj["defect_table"]["im"]),
                       rep.defect_table)
    lines = rep.to_csv().splitlines()
    assert lines[0] == "alpha,beta,re,im,abs"
    assert lines[1].startswith("0-0,0-0,")
    assert len(lines) == 1 + 16


@given(seeds)
def test_functional_hermitian_positive_unit_total(seed):
    hset = random_history_set(np.random.default_rng(seed))
    _, d = hist.decoherence_table(hset)
    assert np.max(np.abs(d - d.conj().T)) <= 1e-12
    assert np.real(np.diagonal(d)).min() >= -1e-12
    assert abs(np.trace(d) - 1) <= 1e-9


@given(seeds)
def test_merging_histories_is_linear(seed):
    rng = np.random.default_rng(seed)
    hset = random_history_set(rng)
    h, d = hist.decoherence_table(hset)
    if len(h) < 2:
        return
    i, j = rng.choice(len(h), size=2, replace=False)
    merged = hist.class_operator(hset, h[i]) + hist.class_operator(hset, h[j])
    for b, beta in enumerate(h):
        cb = hist.class_operator(hset, beta)
        direct = np.trace(merged.conj().T @ hset.initial_state @ cb)
        assert abs(direct - (d[i, b] + d[j, b])) <= 1e-12


@given(seeds)
def test_defect_identity_random(seed):
    psi, slits, screen = random_two_slit(np.random.default_rng(seed), 8)
    defects = [hist.additivity_defect(psi, slits, screen, j) for j in range(len(screen))]
    terms = [hist.interference_term(psi, slits, screen, j) for j in range(len(screen))]
    assert np.max(np.abs(np.subtract(defects, terms))) <= 1e-10
    assert abs(sum(defects)) <= 1e-10
