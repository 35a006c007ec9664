"""Spectral decomposition, expansivity and shadowing for finite dynamical systems."""

from .chain import (
    ChainGraph,
    Decomposition,
    basic_sets,
    build_chain_graph,
    chain_recurrent,
    cyclic_decomposition,
    decompose,
    is_mixing,
    is_transitive,
    nonwandering_exact,
)
from .errors import (
    CapabilityError,
    DynamicsError,
    InputFormatError,
    InvarianceError,
    ParameterError,
    PreconditionError,
    ResourceError,
)
from .invlimit import (
    classify_expansivity,
    eventual_image,
    gamma_set,
    check_N_expansive,
    pair_invariant_set,
    window_invariant_pairs,
)
from .shadow import (
    PseudoOrbit,
    check_finite_tracing,
    check_forward_shadowing_exact,
    check_periodic_biinfinite_tracing,
    enumerate_pseudo_orbits,
    is_pseudo_orbit,
)
from .space import (
    FiniteMetricSpace,
    FiniteSystem,
    OrbitSegment,
    build_system,
    conjugate,
    discretize_interval_map,
    fixed_points,
    omega_limit,
    periodic_points,
    power,
    product,
    restrict,
    validate_metric,
)

__version__ = "0.1.0"
