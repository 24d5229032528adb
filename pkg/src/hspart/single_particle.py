"""First-quantised operator algebra on the single-particle mode space.

Operators are plain complex ``(d, d)`` numpy arrays. Subspaces are described by
:class:`Projector`, which defaults to a set of basis indices but also accepts an
arbitrary Hermitian idempotent.

Time evolution uses ``U = exp(-i H t)`` built from the eigendecomposition of the
Hermitian single-particle Hamiltonian ``H``; Heisenberg operators are
``O_H(t) = U^dagger O U``.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import settings
from .errors import DimensionError, InvalidProjectorError, NotHermitianError


@dataclass(frozen=True)
class ModeBasis:
    """Labelled single-particle basis of ``d`` modes."""

    d: int
    labels: tuple = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("a mode basis needs at least one mode")
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(self.d))
        if len(labels) != self.d:
            raise ValueError(f"expected {self.d} labels, got {len(labels)}")
        if len(set(labels)) != self.d:
            raise ValueError("mode labels must be unique")
        object.__setattr__(self, "labels", labels)

    def index(self, label):
        return self.labels.index(label)


def as_operator(O, dim=None, hermitian=False, name="operator"):
    """Return ``O`` as a square complex128 array, optionally checking Hermiticity."""
    O = np.asarray(O, dtype=np.complex128)
    if O.ndim != 2 or O.shape[0] != O.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {O.shape}")
    if dim is not None and O.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {O.shape[0]}, expected {dim}")
    if hermitian and not is_hermitian(O):
        raise NotHermitianError(f"{name} is not Hermitian")
    return O


def is_hermitian(O, rtol=None):
    rtol = settings.hermitian_rtol if rtol is None else rtol
    scale = np.max(np.abs(O)) if O.size else 0.0
    return bool(np.max(np.abs(O - O.conj().T), initial=0.0) <= rtol * scale)


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector on ``C^dim``.

    Build with :meth:`from_indices` (diagonal 0/1 form) or :meth:`from_matrix`
    (validated Hermitian idempotent).
    """

    dim: int
    indices: tuple | None = None
    _matrix: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_indices(cls, indices, dim):
        idx = sorted({int(i) for i in indices})
        if any(i < 0 or i >= dim for i in idx):
            raise DimensionError(f"projector indices {idx} out of range for dim={dim}")
        return cls(dim=dim, indices=tuple(idx))

    @classmethod
    def from_matrix(cls, P):
        P = as_operator(P, name="projector")
        if not is_hermitian(P) and np.max(np.abs(P - P.conj().T)) > settings.projector_atol:
            raise InvalidProjectorError("projector is not Hermitian")
        if np.max(np.abs(P @ P - P), initial=0.0) > settings.projector_atol:
            raise InvalidProjectorError("projector is not idempotent")
        P = 0.5 * (P + P.conj().T)
        P.setflags(write=False)
        return cls(dim=P.shape[0], _matrix=P)

    @classmethod
    def from_vectors(cls, vectors):
        """Projector onto the span of orthonormal columns of ``vectors``."""
        Q = np.asarray(vectors, dtype=np.complex128)
        if Q.ndim == 1:
            Q = Q[:, None]
        return cls.from_matrix(Q @ Q.conj().T)

    @property
    def is_diagonal(self):
        return self.indices is not None

    @property
    def matrix(self):
        if self._matrix is not None:
            return self._matrix
        P = np.zeros((self.dim, self.dim), dtype=np.complex128)
        idx = list(self.indices)
        P[idx, idx] = 1.0
        P.setflags(write=False)
        object.__setattr__(self, "_matrix", P)
        return P

    def complement(self):
        if self.indices is not None:
            rest = sorted(set(range(self.dim)) - set(self.indices))
            return Projector(dim=self.dim, indices=tuple(rest))
        Q = np.eye(self.dim) - self.matrix
        Q.setflags(write=False)
        return Projector(dim=self.dim, _matrix=Q)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def as_projector(P, dim=None):
    """Coerce a :class:`Projector`, index sequence or matrix into a :class:`Projector`."""
    if isinstance(P, Projector):
        proj = P
    elif isinstance(P, np.ndarray) and P.ndim == 2:
        proj = Projector.from_matrix(P)
    elif isinstance(P, (Sequence, set, frozenset, range, np.ndarray)):
        if dim is None:
            raise DimensionError("dim is required to build a projector from indices")
        proj = Projector.from_indices(P, dim)
    else:
        raise TypeError(f"cannot interpret {type(P).__name__} as a projector")
    if dim is not None and proj.dim != dim:
        raise DimensionError(f"projector has dimension {proj.dim}, expected {dim}")
    return proj


def anticommutator(A, B):
    return A @ B + B @ A


def commutator(A, B):
    return A @ B - B @ A


def partition(O, P):
    """Hilbert-space partition ``(O P + P O) / 2`` of ``O`` onto the range of ``P``."""
    O = as_operator(O)
    P = as_projector(P, O.shape[0]).matrix
    return 0.5 * anticommutator(O, P)


def split_blocks(O, P):
    """Return ``(P O P, P O Q + Q O P, Q O Q)`` with ``Q = I - P``."""
    O = as_operator(O)
    P = as_projector(P, O.shape[0]).matrix
    Q = np.eye(O.shape[0]) - P
    return P @ O @ P, P @ O @ Q + Q @ O @ P, Q @ O @ Q


def alpha_partition(O, P, alpha):
    """``(1 - 2 alpha) P O P + alpha (P O + O P)``, i.e. ``O_S + alpha O_SR``.

    Only ``alpha = 1/2`` is additive over complementary projectors.
    """
    O = as_operator(O)
    P = as_projector(P, O.shape[0]).matrix
    return (1.0 - 2.0 * alpha) * (P @ O @ P) + alpha * anticommutator(P, O)


class Propagator:
    """Cached eigendecomposition of a Hermitian ``H`` for repeated evolution."""

    def __init__(self, H):
        H = as_operator(H, hermitian=True, name="Hamiltonian")
        self.H = H
        self.energies, self.modes = np.linalg.eigh(H)

    @property
    def dim(self):
        return self.H.shape[0]

    def unitary(self, t):
        """``exp(-i H t)``."""
        phases = np.exp(-1j * self.energies * t)
        return (self.modes * phases) @ self.modes.conj().T

    def heisenberg(self, O, t):
        """``U^dagger O U``."""
        if t == 0:
            return np.array(O, dtype=np.complex128)
        U = self.unitary(t)
        return U.conj().T @ O @ U

    def schrodinger(self, M, t):
        """``U M U^dagger``."""
        if t == 0:
            return np.array(M, dtype=np.complex128)
        U = self.unitary(t)
        return U @ M @ U.conj().T


def _propagator(H):
    return H if isinstance(H, Propagator) else Propagator(H)


def time_evolution(H, t):
    """Single-particle propagator ``exp(-i H t)``."""
    return _propagator(H).unitary(t)


def evolve_operator(O, H, t):
    """Heisenberg-evolved ``U^dagger O U``. ``H`` may be a :class:`Propagator`."""
    prop = _propagator(H)
    O = as_operator(O, prop.dim)
    return prop.heisenberg(O, t)


def probability_current(H, P):
    """``i [H, P]``; its second quantisation is ``dN_S/dt``."""
    H = as_operator(H, hermitian=True, name="Hamiltonian")
    P = as_projector(P, H.shape[0]).matrix
    return 1j * commutator(H, P)


def _current_pieces(O, H, P, t):
    prop = _propagator(H)
    d = prop.dim
    O = as_operator(O, d)
    P = as_projector(P, d).matrix
    return prop, O, P


def observable_current(O, H, P, t):
    """Transport term ``(1/2){O_H(t), U^dagger i[H, P] U}`` of the continuity equation."""
    prop, O, P = _current_pieces(O, H, P, t)
    J = 1j * commutator(prop.H, P)
    return 0.5 * anticommutator(prop.heisenberg(O, t), prop.heisenberg(J, t))


def source_term(O, H, P, t):
    """Local production ``(1/2){U^dagger i[H, O] U, U^dagger P U}``.

    Assumes ``O`` carries no explicit time dependence.
    """
    prop, O, P = _current_pieces(O, H, P, t)
    dO = 1j * commutator(prop.H, O)
    return 0.5 * anticommutator(prop.heisenberg(dO, t), prop.heisenberg(P, t))


def evolved_partition(O, H, P, t):
    """``U^dagger (1/2){O, P} U``, the correctly evolved partitioned operator."""
    prop, O, P = _current_pieces(O, H, P, t)
    return prop.heisenberg(0.5 * anticommutator(O, P), t)


def central_derivative(func, t, dt=None, richardson=True):
    """Central difference of ``func`` at ``t``; one Richardson step when requested.

    Works for scalar- or array-valued ``func``. Error is O(dt^2) raw and O(dt^4)
    with the Richardson step.
    """
    dt = settings.default_dt if dt is None else dt
    if dt <= 0:
        raise ValueError("dt must be positive")

    def diff(h):
        return (np.asarray(func(t + h)) - np.asarray(func(t - h))) / (2.0 * h)

    coarse = diff(dt)
    if not richardson:
        return coarse
    fine = diff(0.5 * dt)
    return (4.0 * fine - coarse) / 3.0


def continuity_residual(O, H, P, t, dt=None, richardson=True):
    """Frobenius norm of ``d/dt[U^dagger O|_S U] - J_O|_S - Sigma_O|_S`` at ``t``.

    The derivative is evaluated by finite differences, so the result measures
    the discretisation error: O(dt^2) for ``richardson=False``.
    """
    dt = settings.default_dt if dt is None else dt
    if dt <= 0:
        raise ValueError("dt must be positive")
    prop, O, P = _current_pieces(O, H, P, t)
    deriv = central_derivative(lambda s: evolved_partition(O, prop, P, s), t, dt, richardson)
    rhs = observable_current(O, prop, P, t) + source_term(O, prop, P, t)
    return float(np.linalg.norm(deriv - rhs))


def commutation_gap(O, H, P, t):
    """``|| (1/2){O_H(t), P} - U^dagger (1/2){O, P} U ||_F``.

    Zero when ``[H, P] = 0``; generally positive otherwise.
    """
    prop, O, P = _current_pieces(O, H, P, t)
    partition_of_evolved = 0.5 * anticommutator(prop.heisenberg(O, t), P)
    return float(np.linalg.norm(partition_of_evolved - evolved_partition(O, prop, P, t)))
