"""Impulsive weak interaction and postselection of the meter.

The interaction is the single unitary U = exp(-i g A p) with A = diag(-1, +1),
applied to (qubit) x (meter) product states. In the momentum representation U
multiplies the |0> branch by exp(+i g p) and the |1> branch by exp(-i g p);
in the position representation it shifts the branches to q + g and q - g.

Postselecting the qubit on |post> leaves the meter in an unnormalized
conditional state whose squared norm is the success probability P. The
unnormalized amplitudes are the stored primitive: dark ports with P -> 0
stay representable, and the 1/sqrt(P) normalization enters only in moment
computations.

Fourier convention: psi_q(q) = (2 pi)^{-1/2} Integral dp e^{i p q} psi_p(p).
Under it exp(+i g p) in momentum space becomes the shift q -> q + g, which
fixes all signs below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states_and_grids import (
    MixedMeter,
    MomentumGrid,
    PureMeter,
    QubitState,
    SignalCurve,
    _read_only,
    _require_finite,
    trapezoid,
)

MIN_SUCCESS_PROBABILITY = 1e-300


class RepresentationError(ValueError):
    """Operation applied to a meter or representation it is not defined for."""


class ZeroSuccessError(ValueError):
    """Conditional meter state undefined: postselection never succeeds."""


@dataclass(frozen=True)
class InteractionParams:
    """Coupling strength g (inverse momentum) and preselection phase theta."""

    g: float
    theta: float = 0.0

    def __post_init__(self):
        _require_finite("g", self.g)
        _require_finite("theta", self.theta)


@dataclass(frozen=True)
class PostselectedMeter:
    """Unnormalized conditional meter state after postselection.

    ``representation`` is "momentum" or "position"; ``amplitudes`` live on
    ``grid`` in that representation. ``success_probability`` is the trapezoid
    integral of |amplitudes|^2, computed at construction.
    """

    representation: str
    grid: MomentumGrid
    amplitudes: np.ndarray
    success_probability: float = field(init=False)

    def __post_init__(self):
        if self.representation not in ("momentum", "position"):
            raise RepresentationError(
                f"representation must be 'momentum' or 'position', "
                f"got {self.representation!r}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if amps.shape != (self.grid.n_points,):
            raise ValueError("amplitudes shape does not match grid")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite everywhere")
        object.__setattr__(self, "amplitudes", _read_only(amps))
        prob = trapezoid(np.abs(amps) ** 2, self.grid)
        object.__setattr__(self, "success_probability", prob)

    def density(self) -> np.ndarray:
        """Unnormalized |amplitude|^2 on the grid."""
        return np.abs(self.amplitudes) ** 2

    def conditional_density(self) -> np.ndarray:
        """Normalized |amplitude|^2 / P; raises ZeroSuccessError for P ~ 0."""
        _require_success(self.success_probability)
        return self.density() / self.success_probability


def _require_success(prob: float):
    if prob <= MIN_SUCCESS_PROBABILITY:
        raise ZeroSuccessError(
            f"success probability {prob!r} is (numerically) zero; "
            "the conditional meter state is undefined"
        )


def _branch_weights(pre: QubitState, post: QubitState) -> tuple[complex, complex]:
    # weight of the exp(+igp) / exp(-igp) branch after projecting on <post|
    return post.c0.conjugate() * pre.c0, post.c1.conjugate() * pre.c1


def evolve_and_postselect_p(
    pre: QubitState, post: QubitState, g: float, meter: PureMeter
) -> PostselectedMeter:
    """Momentum-space conditional meter amplitude after the weak interaction.

    a(p) = (c0 d0* e^{+igp} + c1 d1* e^{-igp}) phi(p), where (c0, c1) are the
    preselection and (d0, d1) the postselection amplitudes. The success
    probability is the integral of |a(p)|^2.
    """
    _require_finite("g", g)
    if not isinstance(meter, PureMeter):
        raise RepresentationError(
            "momentum-space evolution needs a pure meter wavefunction"
        )
    w0, w1 = _branch_weights(pre, post)
    phase = np.exp(1j * g * meter.grid.points)
    amps = (w0 * phase + w1 * np.conj(phase)) * meter.psi_p
    return PostselectedMeter("momentum", meter.grid, amps)


def position_sigma(meter: PureMeter) -> float:
    """Position width of an analytic Gaussian meter: sigma_q = 1 / (2 sigma_p)."""
    if meter.sigma is None:
        raise RepresentationError(
            "closed-form position representation needs an analytic Gaussian "
            "meter; use momentum_to_position_dft for tabulated wavefunctions"
        )
    return 1.0 / (2.0 * meter.sigma)


def conjugate_position_grid(meter: PureMeter) -> MomentumGrid:
    """Default position grid for a Gaussian meter: [-10 sigma_q, 10 sigma_q]."""
    sq = position_sigma(meter)
    return MomentumGrid(-10.0 * sq, 10.0 * sq, meter.grid.n_points)


def gaussian_position_wavefunction(q, sigma_p: float):
    """Closed-form position wavefunction of the momentum-width-sigma Gaussian.

    The Fourier transform of (2 pi sigma_p^2)^{-1/4} exp(-p^2 / 4 sigma_p^2)
    is again a standard Gaussian with sigma_q = 1 / (2 sigma_p).
    """
    q = np.asarray(q, dtype=np.float64)
    sq = 1.0 / (2.0 * sigma_p)
    return (2.0 * math.pi * sq**2) ** (-0.25) * np.exp(-(q**2) / (4.0 * sq**2))


def evolve_and_postselect_q(
    pre: QubitState,
    post: QubitState,
    g: float,
    meter: PureMeter,
    q_grid: MomentumGrid | None = None,
) -> PostselectedMeter:
    """Position-space conditional meter amplitude after the weak interaction.

    b(q) = c0 d0* psi_q(q + g) + c1 d1* psi_q(q - g). Only analytic Gaussian
    meters are supported here; the closed-form conjugate Gaussian avoids
    transform noise in the interference terms. By Parseval the success
    probability matches the momentum-space one.
    """
    _require_finite("g", g)
    if not isinstance(meter, PureMeter):
        raise RepresentationError(
            "position-space evolution needs a pure meter wavefunction"
        )
    sigma_p = meter.sigma
    if sigma_p is None:
        raise RepresentationError(
            "closed-form position evolution needs an analytic Gaussian meter"
        )
    if q_grid is None:
        q_grid = conjugate_position_grid(meter)
    q = q_grid.points
    w0, w1 = _branch_weights(pre, post)
    amps = w0 * gaussian_position_wavefunction(q + g, sigma_p) + w1 * (
        gaussian_position_wavefunction(q - g, sigma_p)
    )
    return PostselectedMeter("position", q_grid, amps.astype(np.complex128))


def momentum_to_position_dft(
    meter: PureMeter, q_grid: MomentumGrid | None = None
) -> tuple[MomentumGrid, np.ndarray]:
    """Numerical transform psi_q(q) = (2 pi)^{-1/2} Integral dp e^{ipq} psi_p(p).

    Cross-check utility only (dense quadrature transform, O(N^2)); the
    evolution path uses the closed form for Gaussians.
    """
    if q_grid is None:
        if meter.sigma is None:
            raise ValueError("q_grid is required for non-Gaussian tabulated meters")
        q_grid = conjugate_position_grid(meter)
    p = meter.grid.points
    q = q_grid.points
    kernel = np.exp(1j * np.outer(q, p))
    psi_q = kernel @ meter.psi_p * meter.grid.spacing / math.sqrt(2.0 * math.pi)
    # trapezoid end-point correction
    psi_q -= 0.5 * meter.grid.spacing / math.sqrt(2.0 * math.pi) * (
        np.exp(1j * q * p[0]) * meter.psi_p[0] + np.exp(1j * q * p[-1]) * meter.psi_p[-1]
    )
    return q_grid, psi_q


def _conditional_mean(psm: PostselectedMeter, representation: str) -> float:
    if psm.representation != representation:
        raise RepresentationError(
            f"expected a {representation}-representation state, "
            f"got {psm.representation}"
        )
    _require_success(psm.success_probability)
    numerator = trapezoid(psm.grid.points * psm.density(), psm.grid)
    return numerator / psm.success_probability


def mean_p_final(psm: PostselectedMeter) -> float:
    """Conditional mean momentum of the postselected meter."""
    return _conditional_mean(psm, "momentum")


def mean_q_final(psm: PostselectedMeter) -> float:
    """Conditional mean position of the postselected meter."""
    return _conditional_mean(psm, "position")


def classical_mixed_postselect(
    theta: float, g: float, density: MixedMeter, post: QubitState
) -> SignalCurve:
    """Postselected momentum density in the fully classical mixed model.

    The system is prepared, per momentum value p, in the pure qubit state
    (e^{i theta} e^{igp} |0> + e^{-igp} |1>) / sqrt(2) with classical weight
    P_i(p); no system-meter entanglement exists. Postselecting on |post|
    weights each p by |<post|state(p)>|^2, giving the diagonal density

        w(p) * P_i(p),   w(p) = |d0* e^{i(theta+gp)} + d1* e^{-igp}|^2 / 2.

    For the chi-family ports this is (1 -+ cos(theta + 2gp + chi))/2 * P_i(p),
    identical pointwise to |a(p)|^2 from the pure entangled path with the
    phase-family preselection. The curve's ``total`` is the success
    probability.
    """
    _require_finite("theta", theta)
    _require_finite("g", g)
    if not isinstance(density, MixedMeter):
        raise RepresentationError("classical model needs a diagonal mixed meter")
    p = density.grid.points
    w0 = post.c0.conjugate() * complex(math.cos(theta), math.sin(theta))
    w1 = post.c1.conjugate()
    phase = np.exp(1j * g * p)
    weight = 0.5 * np.abs(w0 * phase + w1 * np.conj(phase)) ** 2
    return SignalCurve(density.grid, weight * density.density)
