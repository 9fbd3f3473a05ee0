import numpy as np
import pytest
from hypothesis import given, settings, strategies as st_

from qaffine import channels
from qaffine.errors import DimensionError, NotHermitianError
from qaffine.maps import (
    AffineMap,
    DynamicalMapB,
    KrausSet,
    affine_from_dynamical,
    affine_from_osr,
    antisymmetric_part,
    apply_affine,
    apply_dynamical,
    apply_osr,
    check_trace_preserving,
    check_unital,
    compose_affine,
    decompose_kraus,
    dynamical_from_osr,
    osr_from_dynamical,
    svd_affine,
)
from qaffine.state import from_polarization, to_polarization

from conftest import basis, random_kraus_terms, random_unit_ball


def trace_oracle(K, gens):
    """T_pq = sum eta/2 Tr(lam_q C lam_p C^+), t_q = sum eta/(2b) Tr(lam_q C C^+)."""
    lam = gens.generators
    T = np.zeros((gens.n, gens.n))
    t = np.zeros(gens.n)
    for eta, C in K.terms:
        Cd = C.conj().T
        T += eta * 0.5 * np.einsum("qab,bc,pcd,da->pq", lam, C, lam, Cd).real
        t += eta / (2 * gens.b) * np.einsum("qab,bc,ca->q", lam, C, Cd).real
    return T, t


def random_kraus(rng, d, k=None):
    k = k or int(rng.integers(1, 5))
    etas, ops = random_kraus_terms(rng, d, k)
    return KrausSet(d, etas, ops).with_expansion(basis(d)[0])


def random_unitary(rng, d):
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def identity_channel(d):
    return KrausSet.from_terms([(1.0, np.eye(d))], basis(d)[0])


# --- dynamical matrix and Kraus sets ----------------------------------------


def test_identity_channel_is_rank_one():
    B = dynamical_from_osr(identity_channel(2))
    K = osr_from_dynamical(B)
    assert len(K) == 1
    assert K.etas[0] == pytest.approx(2.0)
    assert np.abs(K.ops[0] - np.eye(2) / np.sqrt(2)).max() < 1e-12


def test_transpose_map_has_negative_weight():
    swap = np.zeros((4, 4))
    for r in range(2):
        for s in range(2):
            swap[r * 2 + s, s * 2 + r] = 1
    B = DynamicalMapB(2, swap)
    rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
    assert np.abs(apply_dynamical(B, rho).mat - rho.T).max() < 1e-15
    K = osr_from_dynamical(B)
    assert np.allclose(K.etas, [1, 1, 1, -1])


def test_random_hermitian_b_rebuilds(rng):
    A = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    B = DynamicalMapB(3, A + A.conj().T)
    K = osr_from_dynamical(B)
    assert np.abs(dynamical_from_osr(K).B - B.B).max() < 1e-10
    # operators are HS-orthonormal
    gram = np.einsum("iab,jab->ij", K.ops.conj(), K.ops)
    assert np.abs(gram - np.eye(len(K))).max() < 1e-12


def test_unitary_term_has_spectrum_2_0_0_0(rng):
    U = random_unitary(rng, 2)
    B = dynamical_from_osr(KrausSet(2, [1.0], [U]))
    assert np.allclose(np.linalg.eigvalsh(B.B), [0, 0, 0, 2], atol=1e-12)


def test_depolarizing_b_trace_is_dim():
    B = dynamical_from_osr(channels.depolarizing_qutrit(0.3))
    assert B.hermiticity_residual < 1e-14
    assert np.trace(B.B).real == pytest.approx(3.0)


def test_osr_roundtrip_reproduces_b(rng):
    K = random_kraus(rng, 3, 4)
    B = dynamical_from_osr(K)
    assert np.abs(dynamical_from_osr(osr_from_dynamical(B)).B - B.B).max() < 1e-10


def test_non_hermitian_b_rejected(rng):
    with pytest.raises(NotHermitianError):
        osr_from_dynamical(DynamicalMapB(2, rng.normal(size=(4, 4))))
    with pytest.raises(DimensionError):
        DynamicalMapB(3, np.eye(4))


def test_decompose_examples():
    g, _ = basis(3)
    v0, v = decompose_kraus(np.eye(3), g)
    assert v0 == 1 and not v.any()
    v0, v = decompose_kraus(g[0], g)
    assert v0 == 0 and np.allclose(v, np.eye(8)[0])
    v0, v = decompose_kraus(channels.trit_flip_operator((1, 2)), g)
    assert v0 == 0 and np.allclose(v, np.eye(8)[0])


def test_decompose_reconstructs(rng):
    g, _ = basis(4)
    C = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    v0, v = decompose_kraus(C, g)
    assert np.abs(v0 * np.eye(4) + np.einsum("i,iab->ab", v, g.generators) - C).max() < 1e-12


# --- affine maps ------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4])
def test_affine_matches_trace_oracle(d, rng):
    g, st = basis(d)
    for _ in range(5):
        K = random_kraus(rng, d)
        M = affine_from_osr(K, st)
        T, t = trace_oracle(K, g)
        assert np.abs(M.T - T).max() < 1e-10
        assert np.abs(M.t - t).max() < 1e-10


def test_depolarizing_affine():
    _, st = basis(3)
    for x in (0.0, 0.4, 8 / 9):
        M = affine_from_osr(channels.depolarizing_qutrit(x), st)
        assert np.abs(M.T - (1 - 9 * x / 8) * np.eye(8)).max() < 1e-12
        assert np.abs(M.t).max() < 1e-14


def test_unitary_qubit_gives_rotation(rng):
    g, st = basis(2)
    U = random_unitary(rng, 2)
    M = affine_from_osr(KrausSet.from_terms([(1.0, U)], g), st)
    assert np.abs(M.T.T @ M.T - np.eye(3)).max() < 1e-10
    # adjoint action oracle: U lam_p U^+ = sum_q R_qp lam_q
    R = np.array([[0.5 * np.trace(g[q] @ U @ g[p] @ U.conj().T).real for p in range(3)] for q in range(3)])
    assert np.abs(M.column_matrix() - R).max() < 1e-12


def test_missing_expansion_raises(rng):
    _, st = basis(2)
    with pytest.raises(ValueError):
        affine_from_osr(KrausSet(2, [1.0], [np.eye(2)]), st)


def test_affine_from_dynamical_identity_and_trit_flip():
    g, st = basis(3)
    M = affine_from_dynamical(dynamical_from_osr(identity_channel(3)), g)
    assert np.abs(M.T - np.eye(8)).max() < 1e-12 and np.abs(M.t).max() < 1e-14
    K = channels.trit_flip((1, 2))
    M1 = affine_from_dynamical(dynamical_from_osr(K), g)
    M2 = affine_from_osr(K, st)
    assert np.abs(M1.T - M2.T).max() < 1e-12 and np.abs(M1.t - M2.t).max() < 1e-12


def test_random_b_dynamical_vs_osr_path(rng):
    g, st = basis(3)
    for _ in range(50):
        A = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
        B = DynamicalMapB(3, A + A.conj().T)
        M1 = affine_from_dynamical(B, g)
        M2 = affine_from_osr(osr_from_dynamical(B, g), st)
        assert np.abs(M1.T - M2.T).max() < 1e-9
        assert np.abs(M1.t - M2.t).max() < 1e-9


@pytest.mark.parametrize("d", [3, 4])
def test_apply_affine_matches_osr(d, rng):
    g, st = basis(d)
    K = random_kraus(rng, d)
    M = affine_from_osr(K, st)
    n = random_unit_ball(rng, g.n)
    direct = to_polarization(apply_osr(K, from_polarization(n, g)), g).n
    assert np.abs(apply_affine(M, n).n - direct).max() < 1e-10


def test_apply_affine_identity_and_depolarizing(rng):
    n = rng.normal(size=8)
    assert np.array_equal(apply_affine(AffineMap(3, np.eye(8), np.zeros(8)), n).n, n)
    _, st = basis(3)
    M = affine_from_osr(channels.depolarizing_qutrit(0.3), st)
    assert np.abs(apply_affine(M, n).n - (1 - 0.3 * 9 / 8) * n).max() < 1e-12
    with pytest.raises(DimensionError):
        apply_affine(M, np.zeros(3))


def test_apply_osr_examples(rng):
    rho = np.diag([0.2, 0.5, 0.3]).astype(complex)
    assert np.abs(apply_osr(identity_channel(3), rho).mat - rho).max() < 1e-15
    rho1 = np.diag([1, 0, 0]).astype(complex)
    rho2 = np.diag([0, 1, 0]).astype(complex)
    assert np.abs(apply_osr(channels.trit_flip((1, 2)), rho1).mat - rho2).max() < 1e-15
    with pytest.raises(DimensionError):
        apply_osr(identity_channel(3), np.eye(2))


def test_compose_matches_sequential_application(rng):
    _, st = basis(3)
    K1, K2 = random_kraus(rng, 3), random_kraus(rng, 3)
    M1, M2 = affine_from_osr(K1, st), affine_from_osr(K2, st)
    n = rng.normal(size=8)
    both = compose_affine(M1, M2)
    assert np.abs(apply_affine(both, n).n - apply_affine(M2, apply_affine(M1, n)).n).max() < 1e-12


# --- structural checks ------------------------------------------------------


def test_unital_examples():
    g, st = basis(3)
    assert check_unital(channels.depolarizing_qutrit(0.3), st).passed
    g2, st2 = basis(2)
    gamma = 0.3
    amp = KrausSet.from_terms([(1.0, np.array([[1, 0], [0, np.sqrt(1 - gamma)]])),
                               (1.0, np.array([[0, np.sqrt(gamma)], [0, 0]]))], g2)
    rep = check_unital(amp, st2)
    assert not rep.passed and rep.direct_residual > 0.1
    assert check_trace_preserving(amp, st2).passed


def test_trit_flip_maps_identity_to_projector_sum():
    # C_(1,2) annihilates |3>, so 1/3 maps to (|1><1| + |2><2|)/3
    _, st = basis(3)
    K = channels.trit_flip((1, 2))
    out = apply_osr(K, np.eye(3) / 3).mat
    assert np.abs(out - np.diag([1, 1, 0]) / 3).max() < 1e-15
    rep = check_unital(K, st)
    assert not rep.passed
    assert rep.direct_residual == pytest.approx(1.0)


def test_trace_preserving_examples():
    _, st = basis(3)
    for K in (channels.depolarizing_qutrit(0.3), channels.phase_damping_qutrit(0.7)):
        rep = check_trace_preserving(K, st)
        assert rep.passed and rep.direct_residual < 1e-14
    half = KrausSet.from_terms([(0.5, np.eye(3))], basis(3)[0])
    rep = check_trace_preserving(half, st)
    assert not rep.passed
    assert rep.scalar_residual == pytest.approx(0.5)


@pytest.mark.parametrize("check", [check_unital, check_trace_preserving])
def test_conditions_agree_with_direct_evaluation(check, rng):
    _, st = basis(3)
    for _ in range(10):
        rep = check(random_kraus(rng, 3), st)
        assert rep.passed == (rep.direct_residual < 1e-10)


def test_hermitian_kraus_gives_symmetric_t(rng):
    g, st = basis(3)
    H = rng.normal(size=(3, 3, 3)) + 1j * rng.normal(size=(3, 3, 3))
    H = H + H.conj().transpose(0, 2, 1)
    K = KrausSet(3, rng.normal(size=3), H).with_expansion(g)
    rep = antisymmetric_part(affine_from_osr(K, st), K)
    assert rep.symmetric and rep.all_real


def test_trit_flip_symmetric():
    _, st = basis(3)
    K = channels.trit_flip((1, 3))
    rep = antisymmetric_part(affine_from_osr(K, st), K)
    assert rep.symmetric and rep.v0_or_v_zero


def test_rotation_has_antisymmetric_part():
    g, st = basis(3)
    w, V = np.linalg.eigh(g[2])
    U = (V * np.exp(0.3j * w)) @ V.conj().T
    K = KrausSet.from_terms([(1.0, U)], g)
    rep = antisymmetric_part(affine_from_osr(K, st), K)
    assert not rep.symmetric and rep.max_entry > 0.1


def test_svd_examples(rng):
    _, st = basis(3)
    M = affine_from_osr(channels.depolarizing_qutrit(0.4), st)
    O1, D, O2 = svd_affine(M)
    assert np.allclose(np.abs(D), 0.55)
    O1, D, O2 = svd_affine(AffineMap(3, np.eye(8), np.zeros(8)))
    assert np.allclose(D, 1) and np.allclose(O1 @ O2, np.eye(8))
    T = rng.normal(size=(8, 8))
    O1, D, O2 = svd_affine(AffineMap(3, T, np.zeros(8)))
    assert np.abs(O1 @ np.diag(D) @ O2 - T).max() < 1e-10
    for O in (O1, O2):
        assert np.abs(O.T @ O - np.eye(8)).max() < 1e-12
        assert np.linalg.det(O) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st_.integers(2, 4), st_.integers(0, 2**31))
def test_property_affine_path_equals_direct(d, seed):
    r = np.random.default_rng(seed)
    g, st = basis(d)
    K = random_kraus(r, d)
    M = affine_from_osr(K, st)
    n = random_unit_ball(r, g.n)
    direct = to_polarization(apply_osr(K, from_polarization(n, g)), g).n
    assert np.abs(apply_affine(M, n).n - direct).max() < 1e-9
