"""Partitioned von Neumann entropy of free-fermion product states.

For occupations ``f_k`` on orbitals ``|k> = V[:, k]`` the entropy operator is

    S = -sum_k ln(f_k) d_k^dagger d_k - sum_k ln(1 - f_k) d_k d_k^dagger,

i.e. the particle-ordered quantisation of ``S^n = V diag(-ln f) V^dagger`` plus
the hole-ordered quantisation of ``S^p = V diag(-ln(1 - f)) V^dagger``. Its
Hilbert-space partition onto ``P`` is ``(1/2){S^n, P(t)}`` and
``(1/2){S^p, P(t)}``; the expectation obeys ``d/dt <S|_P> = <J_S|_P>`` with no
source term. Orbitals with ``f_k`` in {0, 1} make ``S`` singular; the
``alpha``-partitions other than ``alpha = 1/2`` then have divergent expectations.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels, settings
from .errors import DivergenceError
from .gaussian_state import (
    StatisticalEnsemble,
    TwoPartObservable,
    binary_entropy,
    correlation_matrix,
    expectation,
)
from .single_particle import Propagator, anticommutator, as_projector, commutator


@dataclass(frozen=True)
class EpsilonPolicy:
    """How pure occupations are treated before taking logarithms.

    ``exact`` keeps 0/1 as they are; ``clamp`` replaces ``f < eps`` by ``eps``
    and ``f > 1 - eps`` by ``1 - eps`` inside the logarithms only.
    """

    mode: str = "exact"
    eps: float = 1e-12

    def __post_init__(self):
        if self.mode not in ("exact", "clamp"):
            raise ValueError(f"unknown epsilon policy mode {self.mode!r}")
        if not 0.0 < self.eps < 0.5:
            raise ValueError("eps must satisfy 0 < eps < 1/2")

    @classmethod
    def clamp(cls, eps):
        return cls("clamp", eps)

    def log_occupations(self, f):
        f = np.asarray(f, dtype=np.float64)
        if self.mode == "clamp":
            return np.clip(f, self.eps, 1.0 - self.eps)
        return f


EXACT = EpsilonPolicy()


class Divergence(NamedTuple):
    """A weighted ``log 0``: weight from orbital ``k``, logarithm of orbital ``k_log``."""

    k: int
    k_log: int
    term: str  # "particle" (f = 0 orbital) or "hole" (f = 1 orbital)


def _neg_log(x):
    with np.errstate(divide="ignore"):
        return -np.log(x)


@dataclass(frozen=True, eq=False)
class EntropyOperator:
    """First-quantised particle and hole parts of ``-ln rho``."""

    ensemble: StatisticalEnsemble
    policy: EpsilonPolicy
    particle_log: np.ndarray  # -ln f_k (after the policy)
    hole_log: np.ndarray  # -ln(1 - f_k)
    clamped: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def particle_divergent(self):
        return tuple(int(k) for k in np.flatnonzero(np.isinf(self.particle_log)))

    @property
    def hole_divergent(self):
        return tuple(int(k) for k in np.flatnonzero(np.isinf(self.hole_log)))

    @property
    def divergent(self):
        return bool(self.particle_divergent or self.hole_divergent)

    def _matrix(self, logs):
        V = self.ensemble.V
        with np.errstate(invalid="ignore", over="ignore"):
            return (V * logs) @ V.conj().T

    @property
    def particle(self):
        """``S^n``; non-finite entries when some ``f_k = 0`` under the exact policy."""
        if "n" not in self._cache:
            self._cache["n"] = self._matrix(self.particle_log)
        return self._cache["n"]

    @property
    def hole(self):
        """``S^p``; non-finite entries when some ``f_k = 1`` under the exact policy."""
        if "p" not in self._cache:
            self._cache["p"] = self._matrix(self.hole_log)
        return self._cache["p"]

    def weighted_entropies(self):
        """``f_k(-ln f_k) + (1 - f_k)(-ln(1 - f_k))`` with ``0 * inf = 0``."""
        f = self.ensemble.f
        return _weighted(f, self.particle_log) + _weighted(1.0 - f, self.hole_log)

    def local_entropy_matrix(self):
        """``W = V diag(s_k) V^dagger`` so that ``<S|_P> = Tr(W P)`` for the Hilbert-space partition."""
        V = self.ensemble.V
        return (V * self.weighted_entropies()) @ V.conj().T


def _weighted(weight, logs):
    out = np.zeros(np.broadcast(weight, logs).shape)
    w = np.broadcast_to(weight, out.shape)
    lg = np.broadcast_to(logs, out.shape)
    nz = w != 0
    out[nz] = w[nz] * lg[nz]
    return out


def entropy_operator(ens, policy=EXACT):
    """Build the entropy operator of ``ens`` after applying ``policy``."""
    f = ens.f
    fl = policy.log_occupations(f)
    clamped = tuple(int(k) for k in np.flatnonzero(fl != f))
    return EntropyOperator(
        ensemble=ens,
        policy=policy,
        particle_log=_neg_log(fl),
        hole_log=_neg_log(1.0 - fl),
        clamped=clamped,
    )


def _check_finite(op, X):
    """Raise unless ``(1/2){S, X}`` has finite entries.

    In the statistical basis that means ``X`` has no off-diagonal elements in
    rows of divergent orbitals.
    """
    if not op.divergent:
        return
    V = op.ensemble.V
    Xk = V.conj().T @ X @ V
    tol = settings.projector_atol * max(1.0, float(np.max(np.abs(Xk))))
    reasons = []
    for term, ks in (("particle", op.particle_divergent), ("hole", op.hole_divergent)):
        for k in ks:
            row = np.abs(Xk[k]).copy()
            row[k] = 0.0
            for kp in np.flatnonzero(row > tol):
                reasons.append(Divergence(int(kp), int(k), term))
    if reasons:
        raise DivergenceError(
            f"partitioned entropy operator is singular: {len(reasons)} orbital pairs couple "
            "to pure orbitals (use a clamp EpsilonPolicy or alpha_entropy)",
            reasons,
        )


def _partitioned_expectation(op, X):
    """``<(1/2){S^n, X}>_particle + <(1/2){S^p, X}>_hole`` in the t=0 state."""
    _check_finite(op, X)
    if not op.divergent:
        obs = TwoPartObservable(0.5 * anticommutator(op.particle, X), 0.5 * anticommutator(op.hole, X))
        return expectation(obs, correlation_matrix(op.ensemble))
    # singular orbitals only meet X on the diagonal, where their weight vanishes
    V = op.ensemble.V
    diag = np.einsum("nk,nm,mk->k", V.conj(), X, V)
    return float(np.sum(op.weighted_entropies() * diag.real))


def partitioned_entropy(ens, P, H, t, policy=EXACT):
    """``<S|_P>(t)``: entropy assigned to the range of ``P`` at time ``t``."""
    prop = H if isinstance(H, Propagator) else Propagator(H)
    P = as_projector(P, prop.dim).matrix
    op = entropy_operator(ens, policy)
    return _partitioned_expectation(op, prop.heisenberg(P, t))


def entropy_current(ens, P, H, t, policy=EXACT):
    """``<J_S|_P>(t)`` with ``J(t) = U^dagger i[H, P] U``; equals ``d/dt <S|_P>``."""
    prop = H if isinstance(H, Propagator) else Propagator(H)
    P = as_projector(P, prop.dim).matrix
    op = entropy_operator(ens, policy)
    J = 1j * commutator(prop.H, P)
    return _partitioned_expectation(op, prop.heisenberg(J, t))


@dataclass(frozen=True, eq=False)
class EntropyProfile:
    """Site-resolved entropy density and current at a single time."""

    t: float
    occupancy: np.ndarray
    density: np.ndarray
    current: np.ndarray

    def rows(self):
        for n in range(self.density.shape[0]):
            yield n, float(self.density[n]), float(self.current[n])

    @property
    def total(self):
        return float(np.sum(self.density))


def entropy_density_profile(ens, H, t, policy=EXACT):
    """Entropy density and current for every single-site projector ``|n><n|``.

    ``density[n] = <S|_n>(t)`` and ``current[n] = <J_S|_n>(t)``; the mode basis
    is taken to be the site basis.
    """
    prop = H if isinstance(H, Propagator) else Propagator(H)
    op = entropy_operator(ens, policy)
    d = prop.dim
    if op.divergent:
        rows = [
            (partitioned_entropy(ens, [n], prop, t, policy), entropy_current(ens, [n], prop, t, policy))
            for n in range(d)
        ]
        density = np.array([r[0] for r in rows])
        current = np.array([r[1] for r in rows])
    else:
        # Tr(W U^+ |n><n| U) = (U W U^+)_nn and Tr(W U^+ i[H,|n><n|] U) = (i[W(t), H])_nn
        W_t = prop.schrodinger(op.local_entropy_matrix(), t)
        density = np.real(np.diagonal(W_t)).copy()
        current = np.real(_kernels.site_currents(W_t, prop.H))
    M_t = prop.schrodinger(correlation_matrix(ens), t)
    occupancy = np.real(np.diagonal(M_t)).copy()
    return EntropyProfile(float(t), occupancy, density, current)


class AlphaEntropy(NamedTuple):
    """Extended-real ``<S^alpha|_P>`` plus the pure-orbital terms that make it diverge."""

    value: float
    divergences: tuple = ()

    @property
    def finite(self):
        return bool(np.isfinite(self.value))

    def __float__(self):
        return float(self.value)


def _stat_basis_overlaps(ens, P):
    P = as_projector(P, ens.dim).matrix
    Pk = ens.V.conj().T @ P @ ens.V
    Pk[np.abs(Pk) <= settings.projector_atol] = 0.0
    return Pk


def alpha_entropy(ens, P, alpha, policy=EXACT):
    """Expectation of the ``alpha``-partition ``S_S + alpha S_SR`` of the entropy.

    Evaluates, with ``P_kk' = <k|P|k'>`` in the statistical basis,

        (1 - 2 alpha) sum_kk' [-f_k ln f_k' - (1 - f_k) ln(1 - f_k')] |P_kk'|^2
        + 2 alpha sum_k s_k P_kk.

    Cross-orbital logarithms use the policy-adjusted occupations and raw
    weights; same-orbital products ``f_k ln f_k`` are exact with ``0 ln 0 = 0``.
    A pure orbital coupled through ``P`` gives ``+inf`` for ``alpha < 1/2`` and
    ``-inf`` for ``alpha > 1/2``.
    """
    op = entropy_operator(ens, policy)
    f = ens.f
    s = binary_entropy(f)
    Pk = _stat_basis_overlaps(ens, P)
    ov = np.abs(Pk) ** 2
    local = float(np.sum(s * Pk.diagonal().real))
    coeff = 1.0 - 2.0 * alpha
    if coeff == 0.0:
        return AlphaEntropy(local)
    # same-orbital products use the exact entropies; only cross-orbital logs feel the policy
    diag = np.eye(ens.dim, dtype=bool)
    off = np.where(diag, 0.0, ov)
    particle = _weighted(f[:, None] * off, op.particle_log[None, :])
    hole = _weighted((1.0 - f)[:, None] * off, op.hole_log[None, :])
    particle[diag] = s * ov.diagonal()
    first = float(np.sum(particle) + np.sum(hole))
    reasons = tuple(
        Divergence(int(k), int(kp), term)
        for term, block in (("particle", particle), ("hole", hole))
        for k, kp in zip(*np.nonzero(np.isinf(block)))
    )
    return AlphaEntropy(coeff * first + 2.0 * alpha * local, reasons)


def divergence_weight(ens, P, alpha):
    """Coefficient of ``-ln eps`` in ``alpha_entropy`` under ``clamp(eps)``.

    ``(1 - 2 alpha) [sum_{k, f_k'=0} f_k |P_kk'|^2 + sum_{k, f_k'=1} (1 - f_k) |P_kk'|^2]``.
    """
    f = ens.f
    ov = np.abs(_stat_basis_overlaps(ens, P)) ** 2
    empty = f == 0.0
    full = f == 1.0
    w = np.sum(f[:, None] * ov[:, empty]) + np.sum((1.0 - f)[:, None] * ov[:, full])
    return float((1.0 - 2.0 * alpha) * w)


def alpha_divergence_slope(ens, P, alpha, eps_grid):
    """Fit ``alpha_entropy`` under ``clamp(eps)`` against ``-ln eps``.

    Returns ``(fitted_slope, analytic_weight)``. ``ens`` carries the exact 0/1
    occupations of the orbitals being driven pure.
    """
    eps = np.asarray(eps_grid, dtype=np.float64)
    if eps.ndim != 1 or eps.size < 4:
        raise ValueError("eps grid needs at least 4 points")
    if np.any(np.diff(eps) >= 0):
        raise ValueError("eps grid must be strictly decreasing")
    values = np.array([alpha_entropy(ens, P, alpha, EpsilonPolicy.clamp(e)).value for e in eps])
    slope = np.polyfit(-np.log(eps), values, 1)[0]
    return float(slope), divergence_weight(ens, P, alpha)
