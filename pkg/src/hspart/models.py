"""Tight-binding chains, thermal and domain-wall ensembles, and the entropy-vs-T curve.

Energies are in units of the hopping ``t`` and times in units of ``1/t``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .gaussian_state import (
    StatisticalEnsemble,
    correlation_matrix,
    reduced_entropy,
    site_occupancy,
    total_entropy,
)

#: eigenvalues with |energy| below this are treated as zero modes at T = 0
ZERO_MODE_ATOL = 1e-10


@dataclass(frozen=True)
class ChainSpec:
    """Nearest-neighbour chain ``H = -t sum (c_n^+ c_{n+1} + h.c.) - mu N``."""

    N: int = 512
    hopping: float = 1.0
    boundary: str = "periodic"
    mu: float = 0.0
    temperature: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError("a chain needs N >= 2 sites")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if not self.temperature >= 0:
            raise ValueError("temperature must be non-negative")
        if not self.hopping >= 0:
            raise ValueError("hopping must be non-negative")

    def with_temperature(self, T):
        return ChainSpec(self.N, self.hopping, self.boundary, self.mu, T)


def chain_hamiltonian(spec):
    """Real symmetric ``N x N`` single-particle Hamiltonian of ``spec``.

    Each bond ``(n, n+1)`` contributes ``-t``; the periodic wrap bond
    ``(N-1, 0)`` is added on top, so ``N = 2`` periodic carries ``-2t``.
    """
    N = spec.N
    H = np.zeros((N, N))
    bonds = [(n, n + 1) for n in range(N - 1)]
    if spec.boundary == "periodic":
        bonds.append((N - 1, 0))
    for a, b in bonds:
        H[a, b] -= spec.hopping
        H[b, a] -= spec.hopping
    H[np.diag_indices(N)] = -spec.mu
    return H


def fermi_occupations(energies, T):
    """``1 / (exp(e / T) + 1)``; at ``T = 0`` a step with zero modes set to 1/2."""
    energies = np.asarray(energies, dtype=np.float64)
    if T > 0:
        return expit(-energies / T)
    f = np.where(energies < 0, 1.0, 0.0)
    f[np.abs(energies) <= ZERO_MODE_ATOL] = 0.5
    return f


def gibbs_ensemble(spec):
    """Thermal state of the chain: eigenbasis of ``H`` with Fermi-Dirac occupations."""
    energies, V = np.linalg.eigh(chain_hamiltonian(spec))
    return StatisticalEnsemble(V, fermi_occupations(energies, spec.temperature))


def domain_wall_ensemble(N, f_left, f_right):
    """Site-basis product state, ``f_left`` on sites ``< N // 2`` and ``f_right`` elsewhere."""
    f = np.where(np.arange(N) < N // 2, f_left, f_right).astype(np.float64)
    return StatisticalEnsemble.site_basis(f)


def dispersion(spec):
    """Closed-form periodic-chain spectrum ``-2 t cos(2 pi m / N) - mu``."""
    m = np.arange(spec.N)
    return -2.0 * spec.hopping * np.cos(2.0 * np.pi * m / spec.N) - spec.mu


class Fig1Row(NamedTuple):
    T: float
    entropy_density: float
    reduced_entropy: float
    gap: float
    occupancy: float  # <n_site>, not part of the exported columns


FIG1_COLUMNS = ("T", "entropy_density", "reduced_entropy", "gap")


def fig1_curve(spec, temperatures, site=0):
    """Rows ``(T, entropy_density, reduced_entropy, gap)`` over a temperature grid.

    ``entropy_density`` is the total entropy per site, ``reduced_entropy`` the
    entropy of the reduced state of ``site`` and ``gap`` their difference
    (entanglement entropy per site). The chain is diagonalised once.
    """
    energies, V = np.linalg.eigh(chain_hamiltonian(spec))
    rows = []
    for T in temperatures:
        ens = StatisticalEnsemble(V, fermi_occupations(energies, float(T)))
        M = correlation_matrix(ens)
        density = total_entropy(ens.f) / spec.N
        red = reduced_entropy(M, [site])
        rows.append(Fig1Row(float(T), density, red, red - density, site_occupancy(M, site)))
    return rows


def log_grid(lo, hi, points):
    """Logarithmic grid; a single point when ``lo == hi``."""
    if points < 1:
        raise ValueError("need at least one grid point")
    if lo <= 0 or hi <= 0 or hi < lo:
        raise ValueError("grid bounds must satisfy 0 < lo <= hi")
    if lo == hi:
        return np.array([float(lo)])
    return np.geomspace(lo, hi, points)
