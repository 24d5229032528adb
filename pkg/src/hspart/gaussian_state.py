"""Number-conserving free-fermion product states as correlation matrices.

Index convention (used by every module in the package)::

    <c_n^dagger c_m> = M[m, n],        M = V diag(f) V^dagger

so ``M`` is the single-particle density matrix. One-body observables come in
two orderings. For a first-quantised operator ``X``

* particle-ordered: ``sum_nm X[n, m] c_n^dagger c_m``,  ``<.> = Tr(X M)``
* hole-ordered:     ``sum_nm X[n, m] c_m c_n^dagger``,  ``<.> = Tr(X (I - M))``

The hole ordering keeps the same single-particle matrix elements, so the
entropy operator ``-sum_k ln(1 - f_k) d_k d_k^dagger`` is the hole-ordered
quantisation of ``V diag(-ln(1 - f)) V^dagger``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from . import settings
from .errors import DimensionError, InvalidEnsembleError, NumericalConsistencyError
from .single_particle import Propagator, as_operator


@dataclass(frozen=True, eq=False)
class StatisticalEnsemble:
    """Product state over orbitals ``V[:, k]`` with occupations ``f[k]``."""

    V: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=np.complex128)
        f = np.array(self.f, dtype=np.float64).reshape(-1)
        if V.ndim != 2 or V.shape[0] != V.shape[1]:
            raise InvalidEnsembleError(f"statistical basis must be square, got {V.shape}")
        if f.shape[0] != V.shape[0]:
            raise InvalidEnsembleError("need one occupation per orbital")
        if np.max(np.abs(V.conj().T @ V - np.eye(V.shape[0]))) > settings.unitary_atol:
            raise InvalidEnsembleError("statistical basis is not unitary")
        if not np.all(np.isfinite(f)) or np.any(f < 0.0) or np.any(f > 1.0):
            raise InvalidEnsembleError("occupations must lie in [0, 1]")
        V.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "f", f)

    @property
    def dim(self):
        return self.f.shape[0]

    @classmethod
    def site_basis(cls, f):
        f = np.asarray(f, dtype=np.float64)
        return cls(np.eye(f.shape[0]), f)


@dataclass(frozen=True, eq=False)
class TwoPartObservable:
    """``sum X[n,m] c_n^dagger c_m + sum Y[n,m] c_m c_n^dagger`` with ``X = particle``, ``Y = hole``."""

    particle: np.ndarray | None = None
    hole: np.ndarray | None = None

    def __post_init__(self):
        if self.particle is None and self.hole is None:
            raise ValueError("an observable needs a particle part, a hole part, or both")
        dims = set()
        for name in ("particle", "hole"):
            X = getattr(self, name)
            if X is not None:
                X = as_operator(X, name=f"{name} part")
                dims.add(X.shape[0])
                object.__setattr__(self, name, X)
        if len(dims) != 1:
            raise DimensionError("particle and hole parts differ in dimension")

    @property
    def dim(self):
        X = self.particle if self.particle is not None else self.hole
        return X.shape[0]

    def scaled(self, a):
        return TwoPartObservable(
            None if self.particle is None else a * self.particle,
            None if self.hole is None else a * self.hole,
        )

    def __add__(self, other):
        def add(x, y):
            if x is None:
                return y
            if y is None:
                return x
            return x + y

        return TwoPartObservable(add(self.particle, other.particle), add(self.hole, other.hole))


def correlation_matrix(ens):
    """``M = V diag(f) V^dagger`` with ``<c_n^dagger c_m> = M[m, n]``."""
    V = ens.V
    M = (V * ens.f) @ V.conj().T
    return 0.5 * (M + M.conj().T)


def _as_correlation(M):
    return as_operator(M, hermitian=True, name="correlation matrix")


def expectation(obs, M):
    """Expectation of a :class:`TwoPartObservable` in the Gaussian state ``M``."""
    M = _as_correlation(M)
    if obs.dim != M.shape[0]:
        raise DimensionError(f"observable has dimension {obs.dim}, state has {M.shape[0]}")
    value = 0j
    # sum_nm X[n,m] M[m,n]; fixed elementwise order keeps results reproducible
    if obs.particle is not None:
        value += np.sum(obs.particle * M.T)
    if obs.hole is not None:
        value += np.trace(obs.hole) - np.sum(obs.hole * M.T)
    scale = max(1.0, abs(value.real))
    if abs(value.imag) > settings.imag_atol * scale:
        raise NumericalConsistencyError(
            f"expectation has imaginary part {value.imag:.3e}; observable not Hermitian?"
        )
    return float(value.real)


def evolve_state(M, H, t):
    """Schrodinger evolution ``U M U^dagger`` with ``U = exp(-i H t)``."""
    prop = H if isinstance(H, Propagator) else Propagator(H)
    M = as_operator(M, prop.dim, name="correlation matrix")
    return prop.schrodinger(M, t)


def binary_entropy(f):
    """``-f ln f - (1 - f) ln(1 - f)`` elementwise, with ``0 ln 0 = 0``."""
    f = np.asarray(f, dtype=np.float64)
    return -xlogy(f, f) - xlogy(1.0 - f, 1.0 - f)


def total_entropy(f):
    """Von Neumann entropy of the product state with occupations ``f``."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0.0) or np.any(f > 1.0) or not np.all(np.isfinite(f)):
        raise InvalidEnsembleError("occupations must lie in [0, 1]")
    return float(np.sum(binary_entropy(f)))


def clamp_occupations(lam, atol=None):
    """Clip eigenvalues into [0, 1]; raise if any lies further than ``atol`` outside."""
    atol = settings.occupation_clamp_atol if atol is None else atol
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(lam < -atol) or np.any(lam > 1.0 + atol):
        raise NumericalConsistencyError(
            f"correlation eigenvalues outside [0, 1]: min={lam.min():.3e}, max={lam.max():.3e}"
        )
    return np.clip(lam, 0.0, 1.0)


def reduced_entropy(M, region):
    """Entanglement (reduced) entropy of the modes in ``region``.

    Uses the eigenvalues of the principal submatrix ``M[region, region]``.
    An empty region has zero entropy.
    """
    M = _as_correlation(M)
    idx = sorted({int(i) for i in region})
    if not idx:
        return 0.0
    if idx[0] < 0 or idx[-1] >= M.shape[0]:
        raise DimensionError(f"region {idx} out of range for {M.shape[0]} modes")
    lam = np.linalg.eigvalsh(M[np.ix_(idx, idx)])
    return float(np.sum(binary_entropy(clamp_occupations(lam))))


def site_occupancy(M, n):
    """``<n_n> = M[n, n]``."""
    M = np.asarray(M)
    if not 0 <= n < M.shape[0]:
        raise IndexError(f"site {n} out of range for {M.shape[0]} modes")
    return float(M[n, n].real)
