"""Inner loops with a numba path and a pure-numpy path.

Every public kernel exists twice: ``_nb_<name>`` is a scalar loop compiled by
numba, ``_np_<name>`` is a vectorised numpy equivalent written independently.
The module-level name (``ladder_string_matrix`` etc.) is bound to the numba
version unless numba is missing or ``HSPART_DISABLE_NUMBA`` is set.

Jordan-Wigner convention: mode 0 is the least significant bit of a basis index,
and ``c_j^dagger`` picks up ``(-1)**(number of occupied modes with index < j)``.
"""

import numpy as np

from . import settings

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

USING_NUMBA = numba is not None and settings.numba_requested()


# --------------------------------------------------------------------------
# pure-numpy implementations
# --------------------------------------------------------------------------

def _popcount(x, nbits):
    x = np.asarray(x, dtype=np.int64)
    count = np.zeros_like(x)
    for b in range(nbits):
        count += (x >> b) & 1
    return count


def _np_ladder_string_matrix(d, modes, dagger, coeffs):
    dim = 1 << d
    out = np.zeros((dim, dim), dtype=np.complex128)
    states = np.arange(dim, dtype=np.int64)
    length = modes.shape[1]
    for term in range(modes.shape[0]):
        c = coeffs[term]
        if c == 0:
            continue
        s = states.copy()
        amp = np.ones(dim, dtype=np.float64)
        # rightmost operator acts first
        for pos in range(length - 1, -1, -1):
            j = modes[term, pos]
            bit = np.int64(1) << j
            occupied = (s & bit) != 0
            alive = occupied != bool(dagger[pos])
            amp = np.where(alive, amp, 0.0)
            below = _popcount(s & (bit - 1), d)
            amp = amp * np.where(below % 2 == 1, -1.0, 1.0)
            s = s ^ bit
        keep = amp != 0
        np.add.at(out, (s[keep], states[keep]), c * amp[keep])
    return out


def _np_site_currents(W, H):
    # i [W, H]_{nn}
    return 1j * (np.sum(W * H.T, axis=1) - np.sum(H * W.T, axis=1))


def _np_reorder_signs(d, new_position):
    dim = 1 << d
    states = np.arange(dim, dtype=np.int64)
    bits = [(states >> j) & 1 for j in range(d)]
    target = np.zeros(dim, dtype=np.int64)
    for j in range(d):
        target |= bits[j] << int(new_position[j])
    inversions = np.zeros(dim, dtype=np.int64)
    for j in range(d):
        for l in range(j + 1, d):
            if new_position[j] > new_position[l]:
                inversions += bits[j] & bits[l]
    signs = np.where(inversions % 2 == 1, -1.0, 1.0)
    return target, signs


# --------------------------------------------------------------------------
# scalar loops (compiled by numba when available)
# --------------------------------------------------------------------------

def _loop_ladder_string_matrix(d, modes, dagger, coeffs):
    dim = 1 << d
    out = np.zeros((dim, dim), dtype=np.complex128)
    nterms, length = modes.shape
    for term in range(nterms):
        c = coeffs[term]
        if c == 0:
            continue
        for s0 in range(dim):
            s = s0
            sign = 1.0
            ok = True
            for pos in range(length - 1, -1, -1):
                j = modes[term, pos]
                bit = 1 << j
                occupied = (s & bit) != 0
                if occupied == dagger[pos]:
                    ok = False
                    break
                below = s & (bit - 1)
                parity = 0
                while below:
                    below &= below - 1
                    parity ^= 1
                if parity:
                    sign = -sign
                s ^= bit
            if ok:
                out[s, s0] += c * sign
    return out


def _loop_site_currents(W, H):
    n = W.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        acc = 0j
        for m in range(n):
            acc += W[i, m] * H[m, i] - H[i, m] * W[m, i]
        out[i] = 1j * acc
    return out


def _loop_reorder_signs(d, new_position):
    dim = 1 << d
    target = np.zeros(dim, dtype=np.int64)
    signs = np.ones(dim, dtype=np.float64)
    for s in range(dim):
        t = 0
        inv = 0
        for j in range(d):
            if (s >> j) & 1:
                t |= 1 << new_position[j]
                for l in range(j + 1, d):
                    if (s >> l) & 1 and new_position[j] > new_position[l]:
                        inv += 1
        target[s] = t
        if inv % 2:
            signs[s] = -1.0
    return target, signs


if numba is not None:
    _nb_ladder_string_matrix = numba.njit(cache=True)(_loop_ladder_string_matrix)
    _nb_site_currents = numba.njit(cache=True)(_loop_site_currents)
    _nb_reorder_signs = numba.njit(cache=True)(_loop_reorder_signs)
else:  # pragma: no cover
    _nb_ladder_string_matrix = _loop_ladder_string_matrix
    _nb_site_currents = _loop_site_currents
    _nb_reorder_signs = _loop_reorder_signs


def _prepare_strings(modes, dagger, coeffs):
    modes = np.ascontiguousarray(modes, dtype=np.int64)
    if modes.ndim == 1:
        modes = modes[None, :]
    dagger = np.ascontiguousarray(dagger, dtype=np.bool_)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128).reshape(-1)
    if modes.shape[0] != coeffs.shape[0] or modes.shape[1] != dagger.shape[0]:
        raise ValueError("modes, dagger and coeffs have inconsistent shapes")
    return modes, dagger, coeffs


def ladder_string_matrix(d, modes, dagger, coeffs, backend=None):
    """Dense Fock matrix of ``sum_t coeffs[t] * a_{modes[t,0]} ... a_{modes[t,L-1]}``.

    ``dagger[p]`` says whether the ladder operator at string position ``p`` is a
    creation operator. All terms share the same dagger pattern.
    """
    modes, dagger, coeffs = _prepare_strings(modes, dagger, coeffs)
    if modes.shape[0] == 0:
        return np.zeros((1 << d, 1 << d), dtype=np.complex128)
    impl = _select(backend, _nb_ladder_string_matrix, _np_ladder_string_matrix)
    return impl(int(d), modes, dagger, coeffs)


def site_currents(W, H, backend=None):
    """Diagonal of ``i [W, H]`` (complex; callers check the imaginary part)."""
    W = np.ascontiguousarray(W, dtype=np.complex128)
    H = np.ascontiguousarray(H, dtype=np.complex128)
    impl = _select(backend, _nb_site_currents, _np_site_currents)
    return impl(W, H)


def reorder_signs(d, new_position, backend=None):
    """Basis map and fermionic signs for relabelling mode ``j`` as ``new_position[j]``."""
    new_position = np.ascontiguousarray(new_position, dtype=np.int64)
    impl = _select(backend, _nb_reorder_signs, _np_reorder_signs)
    return impl(int(d), new_position)


def _select(backend, jitted, vectorised):
    if backend is None:
        backend = "numba" if USING_NUMBA else "numpy"
    if backend == "numba":
        return jitted
    if backend == "numpy":
        return vectorised
    raise ValueError(f"unknown backend {backend!r}")
