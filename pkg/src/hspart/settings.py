"""Library-wide numerical tolerances and backend selection.

Values can be changed at runtime, e.g. ``hspart.settings.hermitian_rtol = 1e-10``.
The JIT backend is chosen once at import time from the ``HSPART_DISABLE_NUMBA``
environment variable (any of ``1``, ``true``, ``yes`` disables numba).
"""

import os

#: relative tolerance for Hermiticity checks, max|O - O^dagger| <= rtol * max|O|
hermitian_rtol = 1e-12

#: absolute tolerance for projector idempotence, max|P^2 - P|
projector_atol = 1e-12

#: absolute tolerance for unitarity of a statistical basis, max|V^dagger V - I|
unitary_atol = 1e-12

#: eigenvalues of correlation submatrices may overshoot [0, 1] by this much
occupation_clamp_atol = 1e-12

#: largest tolerated imaginary part of an expectation value (scaled by max(1, |value|))
imag_atol = 1e-9

#: default finite-difference step (inverse hopping units)
default_dt = 1e-3

_FALSY = {"", "0", "false", "no", "off"}


def numba_requested():
    """True unless the ``HSPART_DISABLE_NUMBA`` environment flag is set."""
    return os.environ.get("HSPART_DISABLE_NUMBA", "").strip().lower() in _FALSY
