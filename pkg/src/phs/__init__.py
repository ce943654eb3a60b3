"""Numerical toolkit for pure states on projective Hilbert space."""
from .borel import (
    FinitePartition,
    FiniteUniverse,
    GeneratorFamily,
    atoms,
    ball_generators,
    h_generators,
    misra_check,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .convergence import ConvergenceReport, StateSequence, analyze, completeness_check, orthonormal_counterexample
from .exceptions import *  # noqa: F401,F403
from .hilbert import inner, normalize, orthonormal_system, random_unit
from .projector import (
    PureState,
    dense_spectrum,
    diff_eigenvalues,
    materialize,
    norm_bound_check,
    rho_n,
    rho_tr,
    transition_probability,
)
from .ray import Ray, phase_align, ray_of, same_ray
from .topology import (
    BaseSetIndex,
    MetricBall,
    WeakNeighborhood,
    in_ball,
    in_base_set,
    in_weak_nbhd,
    inclusion_check,
    sample_base,
    separate,
    verify_ball_identity,
)

__version__ = "0.1.0"
