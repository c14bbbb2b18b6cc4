"""Two-port momentum distributions and amplification signals.

For the phase-family preselection and the chi-family postselection pair the
port distributions are

    Pr_+-(p) = (1 +- cos(theta + 2 g p + chi)) / 2 * P_i(p),

where P_i(p) is the momentum density of the initial meter state (only the
diagonal enters, so pure and mixed meters with the same density are
indistinguishable here). The amplification signal combines the two ports as

    Pr_f(p) = cos(chi) * (Pr_+ + Pr_-) - (Pr_+ - Pr_-)
            = ((1 - cos(theta + 2gp)) cos(chi) + sin(theta + 2gp) sin(chi)) P_i(p).

chi = 0 is the single-dark-port arrangement, chi = pi/2 the balanced
two-port arrangement. Half-angle forms (1 - cos x = 2 sin^2(x/2)) are used
so that values near the dark-port zeros keep full relative accuracy.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .states_and_grids import (
    MeterState,
    MixedMeter,
    MomentumGrid,
    PureMeter,
    SignalCurve,
    _require_finite,
    check_chi,
)


class NoZerosError(ValueError):
    """Zero-location formula degenerates at g = 0 (no p dependence)."""


class PortLabel(enum.Enum):
    """Which member of the orthogonal postselection pair a detection used."""

    PLUS = +1
    MINUS = -1

    @property
    def sign(self) -> int:
        return self.value


def _meter_density(meter: MeterState) -> tuple[MomentumGrid, np.ndarray]:
    if isinstance(meter, (PureMeter, MixedMeter)):
        return meter.grid, meter.momentum_density()
    raise TypeError(f"expected a meter state, got {type(meter).__name__}")


def postselection_weight(p, theta: float, g: float, chi: float, port: PortLabel):
    """Port weight (1 +- cos(theta + 2 g p + chi)) / 2 at arbitrary momentum.

    Scalar/array helper, also used as the closed-form oracle in tests.
    Evaluated as cos^2 or sin^2 of the half angle for accuracy near zeros.
    """
    half = 0.5 * (theta + chi) + g * np.asarray(p, dtype=np.float64)
    if port is PortLabel.PLUS:
        return np.cos(half) ** 2
    return np.sin(half) ** 2


def amplification_weight(p, theta: float, g: float, chi: float):
    """Weight ((1 - cos(theta + 2gp)) cos(chi) + sin(theta + 2gp) sin(chi))."""
    x = theta + 2.0 * g * np.asarray(p, dtype=np.float64)
    return 2.0 * np.sin(0.5 * x) ** 2 * math.cos(chi) + np.sin(x) * math.sin(chi)


def _validated(theta: float, g: float, chi: float) -> tuple[float, float, float]:
    return _require_finite("theta", theta), _require_finite("g", g), check_chi(chi)


def port_distribution(
    theta: float, g: float, chi: float, port: PortLabel, meter: MeterState
) -> SignalCurve:
    """Detection density of one port: (1 +- cos(theta + 2gp + chi))/2 * P_i(p).

    Nonnegative everywhere; the curve total is that port's success
    probability.
    """
    theta, g, chi = _validated(theta, g, chi)
    grid, density = _meter_density(meter)
    return SignalCurve(grid, postselection_weight(grid.points, theta, g, chi, port) * density)


def sum_signal(theta: float, g: float, chi: float, meter: MeterState) -> SignalCurve:
    """Sum of the two port densities; equals P_i(p) pointwise (sum rule)."""
    plus = port_distribution(theta, g, chi, PortLabel.PLUS, meter)
    minus = port_distribution(theta, g, chi, PortLabel.MINUS, meter)
    return SignalCurve(plus.grid, plus.values + minus.values)


def difference_signal(theta: float, g: float, chi: float, meter: MeterState) -> SignalCurve:
    """Signed port difference -(Pr_+ - Pr_-) = -cos(theta + 2gp + chi) P_i(p).

    At chi = pi/2 this is the balanced two-port signal
    sin(theta + 2gp) P_i(p).
    """
    plus = port_distribution(theta, g, chi, PortLabel.PLUS, meter)
    minus = port_distribution(theta, g, chi, PortLabel.MINUS, meter)
    return SignalCurve(plus.grid, minus.values - plus.values)


def general_signal(theta: float, g: float, chi: float, meter: MeterState) -> SignalCurve:
    """Amplification signal for arbitrary chi and arbitrary meter density.

    values(p) = ((1 - cos(theta + 2gp)) cos(chi) + sin(theta + 2gp) sin(chi))
    * P_i(p). Equals cos(chi) * sum_signal - (Pr_+ - Pr_-) pointwise; at
    chi = 0 it reduces to the improved dark+bright signal
    (1 - cos(theta + 2gp)) P_i(p), at chi = pi/2 to the balanced signal.
    """
    theta, g, chi = _validated(theta, g, chi)
    grid, density = _meter_density(meter)
    return SignalCurve(grid, amplification_weight(grid.points, theta, g, chi) * density)


def detection_zeros(theta: float, g: float, chi: float, grid: MomentumGrid) -> np.ndarray:
    """Momenta where the minus-port density vanishes, ascending, within grid.

    The zeros solve theta + 2 g p + chi = 2 k pi, i.e.
    p_k = (2 k pi - theta - chi) / (2 g). Requires g != 0; at g = 0 the
    condition has no p dependence.
    """
    theta = _require_finite("theta", theta)
    g = _require_finite("g", g)
    chi = check_chi(chi)
    if g == 0.0:
        raise NoZerosError("dark-port zero locations are undefined at g = 0")
    # k range from p in [p_min, p_max]: 2 k pi in [2 g p + theta + chi] bounds
    bound_a = (2.0 * g * grid.p_min + theta + chi) / (2.0 * math.pi)
    bound_b = (2.0 * g * grid.p_max + theta + chi) / (2.0 * math.pi)
    k_lo = math.ceil(min(bound_a, bound_b) - 1e-12)
    k_hi = math.floor(max(bound_a, bound_b) + 1e-12)
    zeros = [
        p_k
        for k in range(k_lo, k_hi + 1)
        if grid.contains(p_k := (2.0 * math.pi * k - theta - chi) / (2.0 * g))
    ]
    return np.array(sorted(zeros), dtype=np.float64)
