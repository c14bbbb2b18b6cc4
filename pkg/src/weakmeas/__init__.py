"""Two-port postselected weak measurement toolkit.

Simulates the exact conditional meter distributions arising when a qubit is
weakly coupled to a continuous meter through U = exp(-i g A p) and then
postselected on one member of an orthogonal pair parameterized by an angle
chi, verifies the equivalence between the pure entangled description and a
fully classical mixed-meter model, and estimates the small preselection
phase theta from simulated joint (port, momentum) detection records by
maximum likelihood.
"""

__version__ = "0.1.0"

from .estimation import (
    EstimationResult,
    SamplingError,
    ShotSample,
    Shots,
    crlb_stderr,
    fisher_information,
    log_likelihood,
    mle_theta,
    sample_shots,
)
from .meter_evolution import (
    InteractionParams,
    PostselectedMeter,
    RepresentationError,
    ZeroSuccessError,
    classical_mixed_postselect,
    conjugate_position_grid,
    evolve_and_postselect_p,
    evolve_and_postselect_q,
    gaussian_position_wavefunction,
    mean_p_final,
    mean_q_final,
    momentum_to_position_dft,
    position_sigma,
)
from .signals import (
    NoZerosError,
    PortLabel,
    amplification_weight,
    detection_zeros,
    difference_signal,
    general_signal,
    port_distribution,
    postselection_weight,
    sum_signal,
)
from .states_and_grids import (
    ChiRangeWarning,
    GridCoverageError,
    MeterState,
    MixedMeter,
    MomentumGrid,
    PureMeter,
    QubitState,
    SignalCurve,
    default_grid,
    gaussian_meter,
    gaussian_momentum_density,
    integrate,
    make_postselection_pair,
    make_preselection_phase,
    make_preselection_real,
    moment,
    trapezoid,
)
from .weak_values import NearOrthogonalError, WeakValue, overlap, weak_value

__all__ = [
    "ChiRangeWarning",
    "EstimationResult",
    "GridCoverageError",
    "InteractionParams",
    "MeterState",
    "MixedMeter",
    "MomentumGrid",
    "NearOrthogonalError",
    "NoZerosError",
    "PortLabel",
    "PostselectedMeter",
    "PureMeter",
    "QubitState",
    "RepresentationError",
    "SamplingError",
    "ShotSample",
    "Shots",
    "SignalCurve",
    "WeakValue",
    "ZeroSuccessError",
    "amplification_weight",
    "classical_mixed_postselect",
    "conjugate_position_grid",
    "crlb_stderr",
    "default_grid",
    "detection_zeros",
    "difference_signal",
    "evolve_and_postselect_p",
    "evolve_and_postselect_q",
    "fisher_information",
    "gaussian_meter",
    "gaussian_momentum_density",
    "gaussian_position_wavefunction",
    "general_signal",
    "integrate",
    "log_likelihood",
    "make_postselection_pair",
    "make_preselection_phase",
    "make_preselection_real",
    "mean_p_final",
    "mean_q_final",
    "mle_theta",
    "moment",
    "momentum_to_position_dft",
    "overlap",
    "port_distribution",
    "position_sigma",
    "postselection_weight",
    "sample_shots",
    "sum_signal",
    "trapezoid",
    "weak_value",
]
