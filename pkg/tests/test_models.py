import numpy as np
import pytest

from hspart import gaussian_state as gs
from hspart import models

LN2 = np.log(2.0)


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        models.ChainSpec(N=1)
    with pytest.raises(ValueError):
        models.ChainSpec(boundary="twisted")
    with pytest.raises(ValueError):
        models.ChainSpec(temperature=-1.0)


def test_chain_hamiltonian_examples():
    np.testing.assert_array_equal(
        models.chain_hamiltonian(models.ChainSpec(N=2, boundary="open")), [[0, -1], [-1, 0]]
    )
    H4 = models.chain_hamiltonian(models.ChainSpec(N=4))
    np.testing.assert_allclose(np.linalg.eigvalsh(H4), [-2, 0, 0, 2], atol=1e-14)
    shifted = models.chain_hamiltonian(models.ChainSpec(N=4, mu=0.3))
    np.testing.assert_allclose(np.linalg.eigvalsh(shifted), np.array([-2, 0, 0, 2]) - 0.3, atol=1e-14)
    H = models.chain_hamiltonian(models.ChainSpec(N=5, hopping=0.5))
    assert H[0, 4] == -0.5 and H[1, 3] == 0 and np.all(H == H.T)


@pytest.mark.parametrize("N", [3, 8, 17, 64])
def test_dispersion(N):
    spec = models.ChainSpec(N=N, hopping=1.3, mu=-0.2)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(models.chain_hamiltonian(spec)), np.sort(models.dispersion(spec)), atol=1e-10
    )


def test_fermi_occupations():
    f = models.fermi_occupations([-1e3, 0.0, 1e3], 1.0)
    np.testing.assert_array_equal(f, [1.0, 0.5, 0.0])
    np.testing.assert_array_equal(models.fermi_occupations([-1.0, 1e-12, 2.0], 0.0), [1.0, 0.5, 0.0])


def test_gibbs_examples():
    hot = models.gibbs_ensemble(models.ChainSpec(N=16, temperature=1e8))
    np.testing.assert_allclose(hot.f, 0.5, atol=1e-8)
    spec = models.ChainSpec(N=16, temperature=0.7)
    energies = np.linalg.eigvalsh(models.chain_hamiltonian(spec))
    f = models.gibbs_ensemble(spec).f
    # particle-hole partners: energies -e and e pair up in the sorted spectrum
    np.testing.assert_allclose(f + f[::-1], 1.0, atol=1e-14)
    np.testing.assert_allclose(energies + energies[::-1], 0.0, atol=1e-13)
    zero_T = models.gibbs_ensemble(models.ChainSpec(N=4, temperature=0.0))
    np.testing.assert_array_equal(zero_T.f, [1.0, 0.5, 0.5, 0.0])


@pytest.mark.parametrize("N,boundary", [(8, "periodic"), (128, "periodic"), (33, "open"), (64, "open")])
@pytest.mark.parametrize("T", [0.05, 1.0, 20.0])
def test_particle_hole_half_filling(N, boundary, T):
    M = gs.correlation_matrix(models.gibbs_ensemble(models.ChainSpec(N=N, boundary=boundary, temperature=T)))
    np.testing.assert_allclose(np.diagonal(M).real, 0.5, atol=1e-12)


def test_odd_ring_is_not_particle_hole_symmetric():
    # a ring of odd length is not bipartite, so the symmetry protecting f = 1/2 is absent
    M = gs.correlation_matrix(models.gibbs_ensemble(models.ChainSpec(N=33, temperature=0.05)))
    assert abs(M[0, 0].real - 0.5) > 1e-3


def test_domain_wall():
    ens = models.domain_wall_ensemble(4, 0.9, 0.1)
    np.testing.assert_array_equal(ens.f, [0.9, 0.9, 0.1, 0.1])
    np.testing.assert_array_equal(ens.V, np.eye(4))
    assert gs.reduced_entropy(gs.correlation_matrix(ens), [0]) == pytest.approx(0.325082973391448, abs=1e-14)
    flat = models.domain_wall_ensemble(6, 0.3, 0.3)
    np.testing.assert_array_equal(gs.correlation_matrix(flat), 0.3 * np.eye(6))


def test_log_grid():
    np.testing.assert_array_equal(models.log_grid(2.0, 2.0, 10), [2.0])
    g = models.log_grid(0.01, 100, 5)
    np.testing.assert_allclose(g, [0.01, 0.1, 1, 10, 100])
    with pytest.raises(ValueError):
        models.log_grid(0.0, 1.0, 3)


@pytest.fixture(scope="module")
def fig1():
    temps = models.log_grid(0.01, 100.0, 60)
    return models.fig1_curve(models.ChainSpec(N=512), temps)


def test_fig1_curve(fig1):
    assert len(fig1) == 60
    for row in fig1:
        assert row.reduced_entropy == pytest.approx(LN2, abs=1e-12)
        assert row.occupancy == pytest.approx(0.5, abs=1e-12)
        assert row.gap >= 0.0
    density = np.array([r.entropy_density for r in fig1])
    assert np.all(np.diff(density) > 0)
    assert density[0] < 0.02
    assert abs(density[-1] - LN2) < 1e-3


def test_fig1_regression_value():
    # density at T = 0.5 from the closed-form dispersion, 30-digit arithmetic
    (row,) = models.fig1_curve(models.ChainSpec(N=512), [0.5])
    assert row.entropy_density == pytest.approx(0.297265802506087, abs=1e-12)
