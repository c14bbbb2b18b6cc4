"""System states, momentum grids, meter states, and quadrature primitives.

Conventions used throughout the package:

* hbar = 1, so position q and momentum p are conjugate without extra factors.
* The coupling g carries units of inverse momentum; products like g*p are
  dimensionless phases.
* All densities and wavefunctions are tabulated on uniform momentum grids and
  integrated with the trapezoid rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

QUBIT_NORM_TOL = 1e-12
METER_NORM_TOL = 1e-8

DEFAULT_GRID_POINTS = 4001
DEFAULT_GRID_HALF_WIDTH_SIGMAS = 10.0
MIN_GAUSSIAN_COVERAGE_SIGMAS = 6.0


class ChiRangeWarning(UserWarning):
    """Postselection angle chi outside the balanced-to-dark range [0, pi/2]."""


class GridCoverageError(ValueError):
    """Momentum grid does not cover enough of the requested distribution."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_chi(chi: float) -> float:
    """Validate a postselection angle, warning when outside [0, pi/2]."""
    chi = _require_finite("chi", chi)
    if not 0.0 <= chi <= math.pi / 2:
        warnings.warn(
            f"chi={chi} lies outside [0, pi/2]; accepted, but outside the "
            "range where the two-port scheme is defined in the usual way",
            ChiRangeWarning,
            stacklevel=3,
        )
    return chi


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform 1-D sampling of the momentum axis.

    Parameters
    ----------
    p_min, p_max : float
        Endpoints, included in the grid.
    n_points : int
        Number of samples, at least 3. The spacing is
        (p_max - p_min) / (n_points - 1).
    """

    p_min: float
    p_max: float
    n_points: int

    def __post_init__(self):
        _require_finite("p_min", self.p_min)
        _require_finite("p_max", self.p_max)
        if self.p_min >= self.p_max:
            raise ValueError(f"need p_min < p_max, got [{self.p_min}, {self.p_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError(f"n_points must be an integer >= 3, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @cached_property
    def points(self) -> np.ndarray:
        return _read_only(np.linspace(self.p_min, self.p_max, self.n_points))

    @property
    def spacing(self) -> float:
        return (self.p_max - self.p_min) / (self.n_points - 1)

    def contains(self, p: float) -> bool:
        return self.p_min <= p <= self.p_max


def default_grid(sigma: float = 1.0) -> MomentumGrid:
    """Default grid for a width-sigma meter: [-10 sigma, 10 sigma], 4001 points.

    The odd point count keeps p = 0 on the grid; the 10-sigma half width puts
    Gaussian truncation error far below every tolerance used in this package.
    """
    sigma = _require_finite("sigma", sigma)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    half = DEFAULT_GRID_HALF_WIDTH_SIGMAS * sigma
    return MomentumGrid(-half, half, DEFAULT_GRID_POINTS)


def trapezoid(values: np.ndarray, grid: MomentumGrid) -> float:
    """Trapezoid-rule integral of tabulated values over the grid."""
    values = np.asarray(values)
    if values.shape != (grid.n_points,):
        raise ValueError(
            f"values shape {values.shape} does not match grid ({grid.n_points},)"
        )
    return float(np.trapezoid(values, dx=grid.spacing))


@dataclass(frozen=True)
class SignalCurve:
    """Signed real values on a momentum grid plus their quadrature integral.

    ``total`` is computed at construction with the same trapezoid rule used
    everywhere else, so the stored metadata is self-consistent by
    construction. Difference signals may be negative; ``total`` is then a
    signed quantity rather than a probability.
    """

    grid: MomentumGrid
    values: np.ndarray
    total: float = field(init=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values shape {values.shape} does not match grid "
                f"({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("curve values must be finite everywhere")
        object.__setattr__(self, "values", _read_only(values))
        object.__setattr__(self, "total", trapezoid(values, self.grid))


def integrate(curve: SignalCurve) -> float:
    """Trapezoid integral of a curve (recomputed, not the stored total)."""
    return trapezoid(curve.values, curve.grid)


def moment(curve: SignalCurve, k: int) -> float:
    """k-th raw moment integral of a curve: integral of p**k * values(p) dp."""
    if int(k) != k or k < 0:
        raise ValueError(f"moment order must be a nonnegative integer, got {k}")
    if k == 0:
        return integrate(curve)
    return trapezoid(curve.grid.points**int(k) * curve.values, curve.grid)


@dataclass(frozen=True)
class QubitState:
    """Two-level system state with complex amplitudes on |0> and |1>.

    Must be normalized: |c0|^2 + |c1|^2 = 1 within 1e-12.
    """

    c0: complex
    c1: complex

    def __post_init__(self):
        c0, c1 = complex(self.c0), complex(self.c1)
        norm_sq = abs(c0) ** 2 + abs(c1) ** 2
        if not math.isfinite(norm_sq):
            raise ValueError("qubit amplitudes must be finite")
        if abs(norm_sq - 1.0) > QUBIT_NORM_TOL:
            raise ValueError(f"state not normalized: |c0|^2+|c1|^2 = {norm_sq!r}")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)


_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def make_preselection_phase(theta: float) -> QubitState:
    """Equal-weight preselection carrying a small relative phase.

    Returns (e^{i theta} |0> + |1>) / sqrt(2). Its overlap with the chi = 0
    dark port is (e^{i theta} - 1)/2, approximately i theta / 2 for small
    theta, which is the imaginary-weak-value configuration.
    """
    theta = _require_finite("theta", theta)
    return QubitState(_INV_SQRT2 * complex(math.cos(theta), math.sin(theta)), _INV_SQRT2)


def make_preselection_real(delta: float) -> QubitState:
    """Real-amplitude preselection (t |0> + r |1>) / sqrt(2).

    t and r are the real solutions of t - r = delta, t^2 + r^2 = 2 with
    t > 0 (both close to 1 for small delta). The overlap with the chi = 0
    dark port is delta / 2, the real-weak-value configuration.
    """
    delta = _require_finite("delta", delta)
    if abs(delta) >= 2.0:
        raise ValueError(f"|delta| must be < 2 for real t, r to exist, got {delta}")
    t = 0.5 * (delta + math.sqrt(4.0 - delta * delta))
    r = t - delta
    return QubitState(_INV_SQRT2 * t, _INV_SQRT2 * r)


def make_postselection_pair(chi: float) -> tuple[QubitState, QubitState]:
    """Orthogonal postselection pair (|0> +- e^{i chi} |1>) / sqrt(2).

    Returns (plus_port, minus_port). At chi = 0 the minus port is the dark
    port (|0> - |1>)/sqrt(2) and the plus port the bright port; at
    chi = pi/2 the pair is (|0> +- i |1>)/sqrt(2), the balanced two-port
    arrangement. Values of chi outside [0, pi/2] are accepted with a
    ChiRangeWarning.
    """
    chi = check_chi(chi)
    phase = complex(math.cos(chi), math.sin(chi))
    plus = QubitState(_INV_SQRT2, _INV_SQRT2 * phase)
    minus = QubitState(_INV_SQRT2, -_INV_SQRT2 * phase)
    return plus, minus


@dataclass(frozen=True)
class PureMeter:
    """Pure meter state tabulated as a momentum-space wavefunction.

    ``sigma`` is set when the state is a known analytic Gaussian; it enables
    the closed-form position representation. For a generic tabulated
    wavefunction leave it None.
    """

    grid: MomentumGrid
    psi_p: np.ndarray
    sigma: float | None = None

    def __post_init__(self):
        psi = np.array(self.psi_p, dtype=np.complex128, copy=True)
        if psi.shape != (self.grid.n_points,):
            raise ValueError("wavefunction shape does not match grid")
        if not np.all(np.isfinite(psi)):
            raise ValueError("wavefunction must be finite everywhere")
        norm = trapezoid(np.abs(psi) ** 2, self.grid)
        if abs(norm - 1.0) > METER_NORM_TOL:
            raise ValueError(f"wavefunction not normalized: integral = {norm!r}")
        object.__setattr__(self, "psi_p", _read_only(psi))

    def momentum_density(self) -> np.ndarray:
        return np.abs(self.psi_p) ** 2


@dataclass(frozen=True)
class MixedMeter:
    """Meter state diagonal in momentum: a classical density P_i(p) on a grid."""

    grid: MomentumGrid
    density: np.ndarray

    def __post_init__(self):
        dens = np.array(self.density, dtype=np.float64, copy=True)
        if dens.shape != (self.grid.n_points,):
            raise ValueError("density shape does not match grid")
        if not np.all(np.isfinite(dens)):
            raise ValueError("density must be finite everywhere")
        if np.any(dens < 0.0):
            raise ValueError("density must be nonnegative everywhere")
        norm = trapezoid(dens, self.grid)
        if abs(norm - 1.0) > METER_NORM_TOL:
            raise ValueError(f"density not normalized: integral = {norm!r}")
        object.__setattr__(self, "density", _read_only(dens))

    def momentum_density(self) -> np.ndarray:
        return self.density


MeterState = PureMeter | MixedMeter


def gaussian_momentum_density(p, sigma: float):
    """Gaussian momentum density (1 / sqrt(2 pi) sigma) exp(-p^2 / 2 sigma^2)."""
    p = np.asarray(p, dtype=np.float64)
    return np.exp(-0.5 * (p / sigma) ** 2) / (math.sqrt(2.0 * math.pi) * sigma)


def gaussian_meter(sigma: float, grid: MomentumGrid | None = None) -> PureMeter:
    """Pure Gaussian meter of momentum width sigma.

    The wavefunction is phi(p) = (2 pi sigma^2)^{-1/4} exp(-p^2 / 4 sigma^2),
    so |phi(p)|^2 is the normal density with standard deviation sigma.

    Parameters
    ----------
    sigma : float
        Momentum-space width, > 0.
    grid : MomentumGrid, optional
        Must span at least [-6 sigma, 6 sigma] so the tabulated norm meets
        the 1e-8 tolerance. Defaults to ``default_grid(sigma)``.
    """
    sigma = _require_finite("sigma", sigma)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if grid is None:
        grid = default_grid(sigma)
    cover = MIN_GAUSSIAN_COVERAGE_SIGMAS * sigma
    if grid.p_min > -cover or grid.p_max < cover:
        raise GridCoverageError(
            f"grid [{grid.p_min}, {grid.p_max}] must span at least "
            f"[-{cover}, {cover}] for a sigma={sigma} Gaussian"
        )
    p = grid.points
    psi = (2.0 * math.pi * sigma**2) ** (-0.25) * np.exp(-(p**2) / (4.0 * sigma**2))
    return PureMeter(grid, psi.astype(np.complex128), sigma=sigma)
