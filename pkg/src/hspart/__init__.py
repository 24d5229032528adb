"""Hilbert-space partitioning of observables for free-fermion lattices."""

from . import settings
from ._kernels import USING_NUMBA
from .entropy_partition import (
    EXACT,
    AlphaEntropy,
    Divergence,
    EntropyOperator,
    EntropyProfile,
    EpsilonPolicy,
    alpha_divergence_slope,
    alpha_entropy,
    divergence_weight,
    entropy_current,
    entropy_density_profile,
    entropy_operator,
    partitioned_entropy,
)
from .errors import (
    DimensionError,
    DivergenceError,
    InvalidEnsembleError,
    InvalidProjectorError,
    NotHermitianError,
    NumericalConsistencyError,
    PartitionError,
    ResourceError,
)
from .gaussian_state import (
    StatisticalEnsemble,
    TwoPartObservable,
    binary_entropy,
    correlation_matrix,
    evolve_state,
    expectation,
    reduced_entropy,
    site_occupancy,
    total_entropy,
)
from .models import ChainSpec, chain_hamiltonian, domain_wall_ensemble, fig1_curve, gibbs_ensemble
from .single_particle import (
    ModeBasis,
    Projector,
    Propagator,
    alpha_partition,
    commutation_gap,
    continuity_residual,
    evolve_operator,
    observable_current,
    partition,
    probability_current,
    source_term,
    split_blocks,
)

__version__ = "0.1.0"
