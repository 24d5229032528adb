"""Dense Fock-space oracle for the single-particle formalism.

Everything here works with explicit ``2**d x 2**d`` matrices under the
Jordan-Wigner convention of :mod:`hspart._kernels` (mode 0 = least significant
bit, ``c_j^dagger`` signed by the parity of occupied modes below ``j``). It is
meant for desk-scale cross-checks, not production sizes.

Operator polynomials are stored in canonical normal order: a term with
creation indices ``(i1 < ... < ip)`` and annihilation indices ``(j1 < ... < jq)``
denotes ``c_i1^+ ... c_ip^+ c_jq ... c_j1`` (annihilators written in descending
order, so ``c_i^+ c_j^+ c_j c_i = n_i n_j``).
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from . import _kernels
from .errors import DimensionError, NumericalConsistencyError, ResourceError
from .gaussian_state import TwoPartObservable
from .single_particle import as_operator, as_projector

MAX_MODES = 14
MAX_DENSITY_MODES = 12
MAX_TWOBODY_MODES = 8


def _check_modes(d, cap=MAX_MODES):
    if d < 1:
        raise DimensionError("need at least one mode")
    if d > cap:
        raise ResourceError(f"dense Fock oracle limited to d <= {cap} here, got d={d}")


def creation(j, d):
    """``c_j^dagger`` on ``d`` modes."""
    _check_modes(d)
    if not 0 <= j < d:
        raise DimensionError(f"mode {j} out of range for d={d}")
    return _kernels.ladder_string_matrix(d, [[j]], [True], [1.0])


def annihilation(j, d):
    """``c_j`` on ``d`` modes."""
    _check_modes(d)
    if not 0 <= j < d:
        raise DimensionError(f"mode {j} out of range for d={d}")
    return _kernels.ladder_string_matrix(d, [[j]], [False], [1.0])


def number_operator(d, modes=None):
    """``sum_{n in modes} c_n^dagger c_n`` (all modes by default); diagonal."""
    _check_modes(d)
    modes = range(d) if modes is None else sorted({int(m) for m in modes})
    states = np.arange(1 << d)
    occ = np.zeros(1 << d)
    for m in modes:
        occ += (states >> m) & 1
    return np.diag(occ.astype(np.complex128))


def car_max_deviation(d):
    """Largest violation of the canonical anticommutation relations on ``d`` modes."""
    c = [annihilation(j, d) for j in range(d)]
    cd = [creation(j, d) for j in range(d)]
    eye = np.eye(1 << d)
    worst = 0.0
    for i in range(d):
        for j in range(d):
            worst = max(worst, np.max(np.abs(c[i] @ c[j] + c[j] @ c[i])))
            target = eye if i == j else 0.0
            worst = max(worst, np.max(np.abs(c[i] @ cd[j] + cd[j] @ c[i] - target)))
    return float(worst)


def _one_body(X, d, hole):
    n, m = np.nonzero(X)
    coeffs = X[n, m]
    if hole:
        # sum X[n,m] c_m c_n^+
        return _kernels.ladder_string_matrix(d, np.stack([m, n], axis=1), [False, True], coeffs)
    return _kernels.ladder_string_matrix(d, np.stack([n, m], axis=1), [True, False], coeffs)


def second_quantize(obs, d=None):
    """Dense matrix of a one-body observable.

    ``obs`` is a :class:`TwoPartObservable` or a plain matrix (particle-ordered).
    """
    if not isinstance(obs, TwoPartObservable):
        obs = TwoPartObservable(obs)
    d = obs.dim if d is None else d
    if d != obs.dim:
        raise DimensionError(f"observable has {obs.dim} modes, asked for {d}")
    _check_modes(d)
    out = np.zeros((1 << d, 1 << d), dtype=np.complex128)
    if obs.particle is not None:
        out += _one_body(obs.particle, d, hole=False)
    if obs.hole is not None:
        out += _one_body(obs.hole, d, hole=True)
    return out


def second_quantize_twobody(A, d=None):
    """``sum_ijkl A[i,j,k,l] c_i^+ c_j^+ c_k c_l``."""
    A = np.asarray(A, dtype=np.complex128)
    d = A.shape[0] if d is None else d
    if A.shape != (d, d, d, d):
        raise DimensionError(f"two-body tensor must have shape {(d,) * 4}, got {A.shape}")
    _check_modes(d, MAX_TWOBODY_MODES)
    idx = np.argwhere(A != 0)
    return _kernels.ladder_string_matrix(d, idx, [True, True, False, False], A[tuple(idx.T)])


def twobody_partition(A, S, d=None):
    """Partition a two-body operator by ``(1/2){O, (P x I + I x P) / 2}`` then second-quantise."""
    A = np.asarray(A, dtype=np.complex128)
    d = A.shape[0] if d is None else d
    _check_modes(d, MAX_TWOBODY_MODES)
    P = as_projector(S, d).matrix
    O = A.reshape(d * d, d * d)
    eye = np.eye(d)
    Pt = 0.5 * (np.kron(P, eye) + np.kron(eye, P))
    part = 0.5 * (O @ Pt + Pt @ O)
    return second_quantize_twobody(part.reshape(d, d, d, d), d)


# --------------------------------------------------------------------------
# operator polynomials and normal ordering
# --------------------------------------------------------------------------

def normal_order_string(ops):
    """Reorder a product of ladder operators into canonical normal order.

    ``ops`` is a sequence of ``(mode, is_creation)`` read left to right. The
    result is ``(sign, creation_modes, annihilation_modes)`` obtained purely by
    anticommuting, i.e. with all contraction terms dropped, or ``None`` if the
    normal-ordered product vanishes by nilpotency.
    """
    ops = [(int(m), bool(dag)) for m, dag in ops]
    if len(set(ops)) != len(ops):
        return None
    keys = [(0, m) if dag else (1, -m) for m, dag in ops]
    order = sorted(range(len(ops)), key=keys.__getitem__)
    inversions = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
    cre = tuple(sorted(m for m, dag in ops if dag))
    ann = tuple(sorted(m for m, dag in ops if not dag))
    return (-1 if inversions % 2 else 1), cre, ann


def _term_ops(cre, ann):
    return [(i, True) for i in cre] + [(j, False) for j in reversed(ann)]


@dataclass(frozen=True)
class OperatorPolynomial:
    """Sum of canonical normal-ordered monomials ``(creation, annihilation, coeff)``."""

    terms: tuple

    def __post_init__(self):
        for cre, ann, _ in self.terms:
            for lst in (cre, ann):
                if any(a >= b for a, b in zip(lst, lst[1:])):
                    raise ValueError(f"index list {lst} is not strictly ascending")

    @classmethod
    def from_strings(cls, strings):
        """Build from ``[(ops, coeff), ...]`` with ``ops`` as in :func:`normal_order_string`.

        Strings must already be normal ordered up to sign (no contractions are produced).
        """
        acc = defaultdict(complex)
        for ops, coeff in strings:
            res = normal_order_string(ops)
            if res is None:
                continue
            sign, cre, ann = res
            acc[(cre, ann)] += sign * coeff
        return cls(tuple((cre, ann, c) for (cre, ann), c in sorted(acc.items()) if c != 0))

    @classmethod
    def from_one_body(cls, O):
        O = as_operator(O)
        n, m = np.nonzero(O)
        return cls.from_strings((((a, True), (b, False)), O[a, b]) for a, b in zip(n, m))

    @classmethod
    def from_two_body(cls, A):
        """``sum A[i,j,k,l] c_i^+ c_j^+ c_k c_l``."""
        A = np.asarray(A, dtype=np.complex128)
        return cls.from_strings(
            (((i, True), (j, True), (k, False), (l, False)), A[i, j, k, l])
            for i, j, k, l in np.argwhere(A != 0)
        )

    @property
    def body_orders(self):
        return {(len(cre), len(ann)) for cre, ann, _ in self.terms}

    def to_dense(self, d):
        _check_modes(d)
        groups = defaultdict(list)
        for cre, ann, c in self.terms:
            if any(i >= d for i in cre + ann):
                raise DimensionError(f"term {cre, ann} exceeds d={d}")
            groups[(len(cre), len(ann))].append((list(cre) + list(reversed(ann)), c))
        out = np.zeros((1 << d, 1 << d), dtype=np.complex128)
        for (p, q), items in groups.items():
            if p + q == 0:
                out += sum(c for _, c in items) * np.eye(1 << d)
                continue
            modes = np.array([m for m, _ in items], dtype=np.int64)
            coeffs = np.array([c for _, c in items])
            out += _kernels.ladder_string_matrix(d, modes, [True] * p + [False] * q, coeffs)
        return out


def normal_ordered_product(poly, S):
    """``:O N_S:`` for ``N_S = sum_{n in S} c_n^+ c_n``, contractions discarded."""
    strings = []
    for cre, ann, c in poly.terms:
        base = _term_ops(cre, ann)
        for n in sorted({int(s) for s in S}):
            strings.append((base + [(n, True), (n, False)], c))
    return OperatorPolynomial.from_strings(strings)


def nbody_partition_best(poly, S, N, d):
    """``(1/2N){O, N_S} - (1/N) :O N_S:`` as a dense matrix, for an ``N``-body ``poly``."""
    _check_modes(d, MAX_TWOBODY_MODES)
    if N < 1:
        raise ValueError("body order must be positive")
    if poly.terms and poly.body_orders != {(N, N)}:
        raise ValueError(f"polynomial has body orders {sorted(poly.body_orders)}, expected ({N}, {N})")
    O = poly.to_dense(d)
    NS = number_operator(d, S)
    wick = normal_ordered_product(poly, S).to_dense(d)
    return (O @ NS + NS @ O) / (2.0 * N) - wick / N


# --------------------------------------------------------------------------
# states and entropies
# --------------------------------------------------------------------------

def product_density_matrix(ens, d=None):
    """``prod_k [f_k n_k + (1 - f_k)(1 - n_k)]`` with ``n_k`` the orbital number operator."""
    d = ens.dim if d is None else d
    if d != ens.dim:
        raise DimensionError(f"ensemble has {ens.dim} modes, asked for {d}")
    _check_modes(d, MAX_DENSITY_MODES)
    eye = np.eye(1 << d, dtype=np.complex128)
    rho = eye.copy()
    for k in range(d):
        v = ens.V[:, k]
        nk = second_quantize(np.outer(v, v.conj()), d)
        rho = rho @ (ens.f[k] * nk + (1.0 - ens.f[k]) * (eye - nk))
    return 0.5 * (rho + rho.conj().T)


def fock_expectation(rho, X):
    """``Tr(rho X)``; real part, after checking the imaginary part is negligible."""
    value = np.sum(np.asarray(rho).T * np.asarray(X))
    if abs(value.imag) > 1e-9 * max(1.0, abs(value.real)):
        raise NumericalConsistencyError(f"Tr(rho X) has imaginary part {value.imag:.3e}")
    return float(value.real)


def _check_density(rho, atol=1e-10):
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise NumericalConsistencyError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise NumericalConsistencyError(f"density matrix has trace {np.trace(rho).real:.12g}")
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < -atol:
        raise NumericalConsistencyError(f"density matrix has eigenvalue {lam.min():.3e}")
    return rho, np.clip(lam, 0.0, None)


def von_neumann_entropy(rho):
    """``-Tr(rho ln rho)``."""
    _, lam = _check_density(rho)
    return float(-np.sum(xlogy(lam, lam)))


def _modes_of(rho):
    d = int(round(np.log2(rho.shape[0])))
    if 1 << d != rho.shape[0]:
        raise DimensionError(f"matrix size {rho.shape[0]} is not a power of two")
    return d


def partial_trace(rho, region):
    """Reduced density matrix of the modes in ``region`` (ordered ascending).

    The modes are first relabelled so that ``region`` occupies the lowest bits;
    with that ordering the Jordan-Wigner strings of region operators stay inside
    the region, and an ordinary tensor partial trace is exact. Restricted to
    number-conserving ``rho``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    d = _modes_of(rho)
    region = sorted({int(r) for r in region})
    if any(r < 0 or r >= d for r in region):
        raise DimensionError(f"region {region} out of range for d={d}")
    occ = np.diagonal(number_operator(d)).real
    if np.max(np.abs(rho * (occ[None, :] - occ[:, None])), initial=0.0) > 1e-10:
        raise NumericalConsistencyError("partial trace supported only for number-conserving states")
    r = len(region)
    rest = [m for m in range(d) if m not in region]
    new_position = np.empty(d, dtype=np.int64)
    new_position[region] = np.arange(r)
    new_position[rest] = np.arange(r, d)
    target, signs = _kernels.reorder_signs(d, new_position)
    moved = np.empty_like(rho)
    moved[np.ix_(target, target)] = signs[:, None] * signs[None, :] * rho
    blocks = moved.reshape(1 << (d - r), 1 << r, 1 << (d - r), 1 << r)
    return np.einsum("iaib->ab", blocks)


def entanglement_entropy(rho, region):
    """Von Neumann entropy of :func:`partial_trace` (zero for an empty region)."""
    if not list(region):
        return 0.0
    return von_neumann_entropy(partial_trace(rho, region))
