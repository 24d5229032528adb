"""Time the numba and numpy backends of the hot kernels side by side.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba timings exclude the first (compiling) call. Both backends are checked
to agree before anything is timed.
"""

import argparse
import timeit

import numpy as np

from hspart import _kernels
from hspart import models
from hspart.verification import random_hermitian, random_twobody


def cases(rng):
    d = 10
    A = random_twobody(rng, 6)
    idx = np.argwhere(A != 0)
    yield (
        "ladder_string_matrix two-body d=6",
        lambda b: _kernels.ladder_string_matrix(6, idx, [True, True, False, False], A[tuple(idx.T)], backend=b),
    )
    X = random_hermitian(rng, d)
    n, m = np.nonzero(X)
    yield (
        "ladder_string_matrix one-body d=10",
        lambda b: _kernels.ladder_string_matrix(d, np.stack([n, m], 1), [True, False], X[n, m], backend=b),
    )
    H = models.chain_hamiltonian(models.ChainSpec(N=512))
    W = random_hermitian(rng, 512)
    yield "site_currents N=512", lambda b: _kernels.site_currents(W, H, backend=b)
    perm = rng.permutation(12)
    yield "reorder_signs d=12", lambda b: _kernels.reorder_signs(12, perm, backend=b)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, fn in cases(rng):
        ref, fast = fn("numpy"), fn("numba")
        a, b = (ref, fast) if isinstance(ref, np.ndarray) else (ref[1], fast[1])
        assert np.allclose(a, b, atol=1e-12), name
        t_np = min(timeit.repeat(lambda: fn("numpy"), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fn("numba"), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<36}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
