import numpy as np
import pytest
from scipy.linalg import expm

from hspart import fock_oracle as fo
from hspart import gaussian_state as gs
from hspart import models
from hspart import single_particle as sp
from hspart.errors import DimensionError, NumericalConsistencyError, ResourceError

from conftest import jw_annihilators, random_ensemble, random_hermitian, random_twobody


# -- ladder operators --------------------------------------------------------------

def test_single_mode_creation():
    np.testing.assert_array_equal(fo.creation(0, 1), [[0, 0], [1, 0]])


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
def test_car_suite(d):
    assert fo.car_max_deviation(d) <= 1e-13


@pytest.mark.parametrize("d", [1, 3, 5])
def test_ladders_match_kron_construction(d):
    c = jw_annihilators(d)
    for j in range(d):
        np.testing.assert_array_equal(fo.annihilation(j, d), c[j])
        np.testing.assert_array_equal(fo.creation(j, d), c[j].conj().T)


def test_jordan_wigner_signs():
    vac = np.zeros(4)
    vac[0] = 1.0
    # c_1^+ c_0^+ |00> = |11>: c_0^+ sees no occupied lower mode, c_1^+ sees mode 0 occupied
    state = fo.creation(1, 2) @ fo.creation(0, 2) @ vac
    np.testing.assert_array_equal(state, [0, 0, 0, -1])
    state = fo.creation(0, 2) @ fo.creation(1, 2) @ vac
    np.testing.assert_array_equal(state, [0, 0, 0, 1])
    assert np.all(fo.creation(0, 2) @ fo.annihilation(1, 2) + fo.annihilation(1, 2) @ fo.creation(0, 2) == 0)


def test_resource_and_range_errors():
    with pytest.raises(ResourceError):
        fo.creation(0, 15)
    with pytest.raises(DimensionError):
        fo.annihilation(3, 3)
    with pytest.raises(ResourceError):
        fo.second_quantize_twobody(np.zeros((9,) * 4))


# -- one-body second quantisation -----------------------------------------------

def test_number_operator_examples():
    np.testing.assert_array_equal(np.diagonal(fo.second_quantize(np.eye(2))), [0, 1, 1, 2])
    hole = fo.second_quantize(gs.TwoPartObservable(hole=np.eye(2)))
    np.testing.assert_array_equal(np.diagonal(hole), [2, 1, 1, 0])
    np.testing.assert_array_equal(fo.number_operator(2), fo.second_quantize(np.eye(2)))
    np.testing.assert_array_equal(np.diagonal(fo.number_operator(3, [2])), [0, 0, 0, 0, 1, 1, 1, 1])


@pytest.mark.parametrize("d", [2, 4, 6])
def test_commutator_homomorphism(rng, d):
    X, Y = random_hermitian(rng, d), random_hermitian(rng, d)
    Xf, Yf = fo.second_quantize(X), fo.second_quantize(Y)
    lhs = fo.second_quantize(1j * sp.commutator(X, Y))
    assert np.max(np.abs(lhs - 1j * (Xf @ Yf - Yf @ Xf))) <= 1e-12


def test_second_quantize_hermitian_and_independent(rng):
    d = 3
    A, B = random_hermitian(rng, d), random_hermitian(rng, d)
    F = fo.second_quantize(gs.TwoPartObservable(A, B))
    assert np.max(np.abs(F - F.conj().T)) < 1e-13
    c = jw_annihilators(d)
    ref = sum(A[n, m] * c[n].conj().T @ c[m] + B[n, m] * c[m] @ c[n].conj().T for n in range(d) for m in range(d))
    np.testing.assert_allclose(F, ref, atol=1e-13)


# -- two-body ----------------------------------------------------------------------

def test_twobody_examples(rng):
    assert np.all(fo.second_quantize_twobody(np.zeros((2,) * 4)) == 0)
    A = np.zeros((2,) * 4)
    A[0, 1, 1, 0] = 1.0  # c0^+ c1^+ c1 c0 = n0 n1
    np.testing.assert_array_equal(fo.second_quantize_twobody(A), np.diag([0, 0, 0, 1]))
    F = fo.second_quantize_twobody(random_twobody(rng, 4))
    assert np.max(np.abs(F - F.conj().T)) < 1e-12


def test_twobody_partition_examples(rng):
    d = 4
    A = random_twobody(rng, d)
    full = fo.second_quantize_twobody(A)
    np.testing.assert_allclose(fo.twobody_partition(A, range(d)), full, atol=1e-12)
    assert np.max(np.abs(fo.twobody_partition(A, []))) == 0.0
    S, R = [0, 1], [2, 3]
    np.testing.assert_allclose(fo.twobody_partition(A, S) + fo.twobody_partition(A, R), full, atol=1e-12)
    best = fo.nbody_partition_best(fo.OperatorPolynomial.from_two_body(A), S, 2, d)
    np.testing.assert_allclose(best, fo.twobody_partition(A, S), atol=1e-12)


# -- normal ordering -------------------------------------------------------------

def test_normal_order_string():
    assert fo.normal_order_string([(0, True), (1, False), (2, True), (2, False)]) == (1, (0, 2), (1, 2))
    assert fo.normal_order_string([(1, False), (0, True)]) == (-1, (0,), (1,))
    assert fo.normal_order_string([(0, True), (0, True)]) is None


def test_polynomial_validation():
    with pytest.raises(ValueError):
        fo.OperatorPolynomial((((1, 0), (), 1.0),))


def test_normal_ordered_product_example():
    poly = fo.OperatorPolynomial.from_strings([([(0, True), (1, False)], 1.0)])
    out = fo.normal_ordered_product(poly, [2])
    assert out.terms == (((0, 2), (1, 2), 1.0),)
    # canonical (0,2),(1,2) is c0^+ c2^+ c2 c1, the dense form of the same string
    c = jw_annihilators(3)
    ref = c[0].conj().T @ c[2].conj().T @ c[2] @ c[1]
    np.testing.assert_array_equal(out.to_dense(3), ref)


def test_normal_ordered_product_nilpotent_terms_dropped():
    poly = fo.OperatorPolynomial.from_one_body(np.diag([1.0, 0.0]))
    # :n_0 n_0: has a repeated creator and vanishes
    assert fo.normal_ordered_product(poly, [0]).terms == ()


def test_best_with_number_operator():
    d = 3
    N = fo.OperatorPolynomial.from_one_body(np.eye(d))
    S = [0, 2]
    best = fo.nbody_partition_best(N, S, 1, d)
    np.testing.assert_allclose(best, fo.number_operator(d, S), atol=1e-13)


def test_best_one_body_matches_partition(rng):
    d = 5
    O = random_hermitian(rng, d)
    poly = fo.OperatorPolynomial.from_one_body(O)
    for S in ([0], [1, 3], list(range(d))):
        ref = fo.second_quantize(sp.partition(O, sp.Projector.from_indices(S, d)))
        np.testing.assert_allclose(fo.nbody_partition_best(poly, S, 1, d), ref, atol=1e-12)


def test_best_body_order_mismatch(rng):
    poly = fo.OperatorPolynomial.from_one_body(random_hermitian(rng, 3))
    with pytest.raises(ValueError):
        fo.nbody_partition_best(poly, [0], 2, 3)


def test_best_additivity_two_body(rng):
    d = 5
    A = random_twobody(rng, d)
    poly = fo.OperatorPolynomial.from_two_body(A)
    S, R = [0, 2], [1, 3, 4]
    total = fo.nbody_partition_best(poly, S, 2, d) + fo.nbody_partition_best(poly, R, 2, d)
    np.testing.assert_allclose(total, fo.second_quantize_twobody(A), atol=1e-12)
    np.testing.assert_allclose(fo.nbody_partition_best(poly, S, 2, d), fo.twobody_partition(A, S), atol=1e-12)


# -- Heisenberg consistency ----------------------------------------------------------

def test_heisenberg_finite_difference_interacting(rng):
    d = 4
    H1 = models.chain_hamiltonian(models.ChainSpec(N=d, boundary="open"))
    Hf = fo.second_quantize(H1)
    for j in range(d - 1):
        Hf = Hf + 0.7 * fo.number_operator(d, [j]) @ fo.number_operator(d, [j + 1])
    O = fo.second_quantize(sp.partition(random_hermitian(rng, d), sp.Projector.from_indices([0, 1], d)))

    def heis(t):
        U = expm(-1j * Hf * t)
        return U.conj().T @ O @ U

    t = 0.9
    deriv = sp.central_derivative(heis, t, 1e-3)
    Ot = heis(t)
    assert np.max(np.abs(deriv - 1j * (Hf @ Ot - Ot @ Hf))) <= 1e-8


# -- states ------------------------------------------------------------------------

def test_product_density_examples(rng):
    ens = gs.StatisticalEnsemble(np.eye(3), np.full(3, 0.5))
    np.testing.assert_allclose(fo.product_density_matrix(ens), np.eye(8) / 8, atol=1e-15)
    rho = fo.product_density_matrix(gs.StatisticalEnsemble.site_basis([1, 0, 0]))
    expected = np.zeros((8, 8))
    expected[1, 1] = 1.0
    np.testing.assert_array_equal(rho, expected)
    rho = fo.product_density_matrix(random_ensemble(rng, 4))
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_product_density_factor_order_irrelevant(rng):
    ens = random_ensemble(rng, 4)
    rev = gs.StatisticalEnsemble(ens.V[:, ::-1], ens.f[::-1])
    np.testing.assert_allclose(fo.product_density_matrix(ens), fo.product_density_matrix(rev), atol=1e-13)


def test_product_density_correlations_fermi_dirac():
    spec = models.ChainSpec(N=6, boundary="open", temperature=0.6)
    ens = models.gibbs_ensemble(spec)
    rho = fo.product_density_matrix(ens)
    M = gs.correlation_matrix(ens)
    for n in range(6):
        for m in range(6):
            val = np.trace(rho @ fo.creation(n, 6) @ fo.annihilation(m, 6))
            assert abs(val - M[m, n]) <= 1e-12
    assert fo.von_neumann_entropy(rho) == pytest.approx(gs.total_entropy(ens.f), abs=1e-10)


def test_von_neumann_examples():
    pure = np.zeros((4, 4))
    pure[2, 2] = 1.0
    assert fo.von_neumann_entropy(pure) == 0.0
    assert fo.von_neumann_entropy(np.eye(16) / 16) == pytest.approx(4 * np.log(2), abs=1e-13)
    with pytest.raises(NumericalConsistencyError):
        fo.von_neumann_entropy(np.eye(4))
    with pytest.raises(NumericalConsistencyError):
        fo.von_neumann_entropy(np.diag([1.5, -0.5]))


def test_partial_trace_product_state():
    f = np.array([0.2, 0.7, 0.4])
    rho = fo.product_density_matrix(gs.StatisticalEnsemble.site_basis(f))
    red = fo.partial_trace(rho, [0, 2])
    # region modes (0, 2) become bits (0, 1)
    expected = np.diag(np.kron([1 - f[2], f[2]], [1 - f[0], f[0]]))
    np.testing.assert_allclose(red, expected, atol=1e-15)


def test_partial_trace_chain_single_site():
    ens = models.gibbs_ensemble(models.ChainSpec(N=8, temperature=0.4))
    rho = fo.product_density_matrix(ens)
    assert fo.entanglement_entropy(rho, [3]) == pytest.approx(np.log(2), abs=1e-10)


def test_partial_trace_ground_state_block():
    ens = models.gibbs_ensemble(models.ChainSpec(N=8, boundary="open", temperature=0.0))
    rho = fo.product_density_matrix(ens)
    M = gs.correlation_matrix(ens)
    for region in ([0, 1, 2, 3], [1, 3, 4, 6]):
        assert fo.entanglement_entropy(rho, region) == pytest.approx(gs.reduced_entropy(M, region), abs=1e-10)
    red = fo.partial_trace(rho, [1, 3, 4, 6])
    # off-diagonal one-body elements of the reduced state carry the JW signs correctly
    c = [fo.annihilation(j, 4) for j in range(4)]
    sub = M[np.ix_([1, 3, 4, 6], [1, 3, 4, 6])]
    for a in range(4):
        for b in range(4):
            assert abs(np.trace(red @ c[a].conj().T @ c[b]) - sub[b, a]) < 1e-12


def test_partial_trace_rejects_non_number_conserving():
    psi = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
    with pytest.raises(NumericalConsistencyError):
        fo.partial_trace(np.outer(psi, psi), [0])
    assert fo.entanglement_entropy(np.eye(4) / 4, []) == 0.0
