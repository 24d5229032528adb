import numpy as np
import pytest

from hspart.verification import random_ensemble, random_hermitian, random_twobody, random_unitary

__all__ = ["random_ensemble", "random_hermitian", "random_twobody", "random_unitary"]


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


def jw_annihilators(d):
    """Kronecker-product Jordan-Wigner annihilators, mode 0 = least significant bit.

    Written independently of the bit-loop kernels: the basis index is
    sum_j n_j 2**j, so mode j sits at kron position d-1-j (leftmost factor is
    the most significant bit) and carries parity strings on the lower modes.
    """
    Z = np.diag([1.0, -1.0])
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    eye = np.eye(2)
    ops = []
    for j in range(d):
        factors = []
        for pos in range(d - 1, -1, -1):
            factors.append(a if pos == j else (Z if pos < j else eye))
        out = np.array([[1.0]])
        for F in factors:
            out = np.kron(out, F)
        ops.append(out.astype(complex))
    return ops
