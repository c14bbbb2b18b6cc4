"""Shot simulation and maximum-likelihood estimation of the phase theta.

A detection shot is a joint record (port, p): which member of the
postselection pair fired and the momentum that was read out. Shots are
sampled exactly from the tabulated two-port distributions by inverse-CDF
with linear interpolation inside grid cells, driven by numpy's PCG64
generator, so a seed reproduces a shot record bit for bit.

The log-likelihood of a record drops the theta-independent meter-density
factor (a constant offset that cancels in the argmax):

    l(theta) = sum_i log((1 +- cos(theta + 2 g p_i + chi)) / 2).

It is strictly concave in theta between the isolated points where a factor
vanishes, which makes bracketed scalar maximization reliable inside any
window free of sign walls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .signals import PortLabel, port_distribution
from .states_and_grids import (
    MeterState,
    _read_only,
    _require_finite,
    check_chi,
    trapezoid,
)

LOGLIK_FLOOR = -1e300
GLOBAL_SCAN_POINTS = 1001
WINDOW_SCAN_POINTS = 101
DEFAULT_WINDOW_HALF_WIDTH = math.pi / 4
CURVATURE_STEP = 1e-4
BRENT_TOL = 1e-10


class SamplingError(ValueError):
    """Cannot sample: the requested distribution has no probability mass."""


class ShotSample(NamedTuple):
    """One joint detection record: port label and momentum reading."""

    port: PortLabel
    p: float


@dataclass(frozen=True)
class Shots:
    """Array-backed shot record; behaves as a sequence of ShotSample.

    ``p`` holds the momentum readings, ``signs`` +1 for plus-port and -1
    for minus-port detections, in detection order.
    """

    p: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64, copy=True)
        signs = np.array(self.signs, dtype=np.int8, copy=True)
        if p.ndim != 1 or p.shape != signs.shape:
            raise ValueError("p and signs must be 1-D arrays of equal length")
        if not np.all(np.isfinite(p)):
            raise ValueError("momentum readings must be finite")
        if not np.all(np.abs(signs) == 1):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "p", _read_only(p))
        object.__setattr__(self, "signs", _read_only(signs))

    def __len__(self) -> int:
        return self.p.size

    def __getitem__(self, i: int) -> ShotSample:
        port = PortLabel.PLUS if self.signs[i] > 0 else PortLabel.MINUS
        return ShotSample(port, float(self.p[i]))

    def __iter__(self) -> Iterator[ShotSample]:
        return (self[i] for i in range(len(self)))

    @property
    def n_plus(self) -> int:
        return int(np.count_nonzero(self.signs > 0))

    @property
    def n_minus(self) -> int:
        return len(self) - self.n_plus

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[PortLabel, float]]) -> "Shots":
        ports, ps = [], []
        for port, p in pairs:
            ports.append(1 if port is PortLabel.PLUS else -1)
            ps.append(p)
        return cls(np.asarray(ps, dtype=np.float64), np.asarray(ports, dtype=np.int8))


def as_shots(samples) -> Shots:
    if isinstance(samples, Shots):
        return samples
    return Shots.from_pairs(samples)


@dataclass(frozen=True)
class EstimationResult:
    """MLE output: estimate, curvature-based standard error, and diagnostics."""

    theta_hat: float
    stderr: float
    loglik: float
    n_shots: int
    converged: bool


def _cumulative_trapezoid(values: np.ndarray, dx: float) -> np.ndarray:
    cdf = np.empty(values.size, dtype=np.float64)
    cdf[0] = 0.0
    np.cumsum(0.5 * dx * (values[1:] + values[:-1]), out=cdf[1:])
    return cdf


def _invert_cdf(u: np.ndarray, cdf: np.ndarray, points: np.ndarray, dx: float) -> np.ndarray:
    targets = u * cdf[-1]
    idx = np.searchsorted(cdf, targets, side="right") - 1
    idx = np.clip(idx, 0, cdf.size - 2)
    seg = cdf[idx + 1] - cdf[idx]
    frac = np.where(seg > 0.0, (targets - cdf[idx]) / np.where(seg > 0.0, seg, 1.0), 0.0)
    return points[idx] + frac * dx


def sample_shots(
    n: int, theta_true: float, g: float, chi: float, meter: MeterState, seed: int
) -> Shots:
    """Draw n i.i.d. joint (port, p) shots from the two-port distributions.

    The port is drawn first with probability equal to that port's total
    detection probability, then p by inverse-CDF from the normalized port
    distribution with linear interpolation inside grid cells. The generator
    is numpy's PCG64 seeded with ``seed``; draws are two blocks of n
    uniforms (ports, then momenta), so identical seeds give identical
    records on any platform.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    n = int(n)
    _require_finite("theta_true", theta_true)
    _require_finite("g", g)
    plus = port_distribution(theta_true, g, chi, PortLabel.PLUS, meter)
    minus = port_distribution(theta_true, g, chi, PortLabel.MINUS, meter)
    total = plus.total + minus.total
    if not total > 0.0:
        raise SamplingError("both port distributions integrate to zero")
    q_minus = minus.total / total

    rng = np.random.Generator(np.random.PCG64(int(seed)))
    u_port = rng.random(n)
    u_p = rng.random(n)
    minus_mask = u_port < q_minus

    p_out = np.empty(n, dtype=np.float64)
    signs = np.where(minus_mask, -1, 1).astype(np.int8)
    for mask, curve in ((~minus_mask, plus), (minus_mask, minus)):
        if not np.any(mask):
            continue
        if not curve.total > 0.0:
            raise SamplingError("selected port has an all-zero distribution")
        cdf = _cumulative_trapezoid(curve.values, curve.grid.spacing)
        p_out[mask] = _invert_cdf(u_p[mask], cdf, curve.grid.points, curve.grid.spacing)
    return Shots(p_out, signs)


def _split_half_angles(shots: Shots, g: float, chi: float):
    h = g * shots.p + 0.5 * chi
    plus = shots.signs > 0
    ch, sh = np.cos(h), np.sin(h)
    return ch[plus], sh[plus], ch[~plus], sh[~plus]


def _scan(prepared, thetas: np.ndarray) -> np.ndarray:
    ch_p, sh_p, ch_m, sh_m = prepared
    raw, zeros = _kernels.loglik_scan(ch_p, sh_p, ch_m, sh_m, thetas)
    return np.where(zeros > 0, LOGLIK_FLOOR, 2.0 * raw)


def log_likelihood(samples, theta: float, g: float, chi: float, return_flag: bool = False):
    """Log-likelihood of a shot record at phase theta (density factor dropped).

    A shot whose port factor is exactly zero at this theta would contribute
    log(0); the returned value is then floored at -1e300. Pass
    ``return_flag=True`` to also receive a bool telling whether the floor
    was hit.
    """
    shots = as_shots(samples)
    if len(shots) == 0:
        raise ValueError("shot record is empty")
    _require_finite("theta", theta)
    _require_finite("g", g)
    chi = check_chi(chi)
    value = float(_scan(_split_half_angles(shots, g, chi), np.array([theta]))[0])
    if return_flag:
        return value, value <= LOGLIK_FLOOR
    return value


def mle_theta(
    samples,
    g: float,
    chi: float,
    search_window: tuple[float, float] | None = None,
) -> EstimationResult:
    """Maximum-likelihood estimate of theta from a shot record.

    With ``search_window=None`` a 1001-point scan over the full period
    [-pi, pi) locates a preliminary peak and the search proceeds in a
    pi/4-half-width window around it. Note that in the weak-coupling regime
    the likelihood has a near-degenerate mirror peak (theta and
    -theta - 2 chi give almost identical statistics at g ~ 0), so when prior
    knowledge localizes theta, pass an explicit window; the command-line
    tool uses (-pi/4, pi/4) for small-phase estimation.

    The scan argmax brackets a bounded Brent refinement (window tolerance
    1e-10); the standard error is (-d2l/dtheta2)^(-1/2) from central finite
    differences at the optimum. The result is flagged not converged when
    the best scan point sits in a boundary cell of an explicit window, when
    every scan point is floored, or when the curvature is not negative.
    """
    shots = as_shots(samples)
    if len(shots) == 0:
        raise ValueError("shot record is empty")
    _require_finite("g", g)
    chi = check_chi(chi)
    prepared = _split_half_angles(shots, g, chi)

    if search_window is None:
        coarse = np.linspace(-math.pi, math.pi, GLOBAL_SCAN_POINTS)
        values = _scan(prepared, coarse)
        center = float(coarse[int(np.argmax(values))])
        window = (center - DEFAULT_WINDOW_HALF_WIDTH, center + DEFAULT_WINDOW_HALF_WIDTH)
        boundary_suspect = False
    else:
        lo, hi = (float(search_window[0]), float(search_window[1]))
        _require_finite("search_window[0]", lo)
        _require_finite("search_window[1]", hi)
        if not lo < hi:
            raise ValueError(f"search window must satisfy lo < hi, got ({lo}, {hi})")
        window = (lo, hi)
        boundary_suspect = True

    thetas = np.linspace(window[0], window[1], WINDOW_SCAN_POINTS)
    values = _scan(prepared, thetas)
    best = int(np.argmax(values))
    if values[best] <= LOGLIK_FLOOR:
        return EstimationResult(
            theta_hat=float(thetas[best]),
            stderr=math.nan,
            loglik=LOGLIK_FLOOR,
            n_shots=len(shots),
            converged=False,
        )
    at_boundary = boundary_suspect and (best == 0 or best == thetas.size - 1)

    cell = (window[1] - window[0]) / (WINDOW_SCAN_POINTS - 1)
    lo = max(window[0], thetas[best] - cell)
    hi = min(window[1], thetas[best] + cell)

    def negative_loglik(theta: float) -> float:
        return -float(_scan(prepared, np.array([theta]))[0])

    opt = minimize_scalar(
        negative_loglik, bounds=(lo, hi), method="bounded", options={"xatol": BRENT_TOL}
    )
    theta_hat = float(opt.x)
    loglik_hat = -float(opt.fun)

    step = CURVATURE_STEP
    side = _scan(prepared, np.array([theta_hat - step, theta_hat + step]))
    curvature = (side[0] - 2.0 * loglik_hat + side[1]) / step**2
    floored = loglik_hat <= LOGLIK_FLOOR or np.any(side <= LOGLIK_FLOOR)
    good_curvature = math.isfinite(curvature) and curvature < 0.0
    converged = bool(opt.success) and good_curvature and not at_boundary and not floored
    stderr = (-curvature) ** -0.5 if good_curvature else math.nan
    return EstimationResult(
        theta_hat=theta_hat,
        stderr=float(stderr),
        loglik=loglik_hat,
        n_shots=len(shots),
        converged=converged,
    )


def fisher_information(theta: float, g: float, chi: float, meter: MeterState) -> float:
    """Per-shot classical Fisher information of the joint (port, p) outcome.

    I(theta) = sum over ports of Integral (d Pr/d theta)^2 / Pr dp by
    trapezoid quadrature. The integrand is taken as 0 wherever a port
    density vanishes (its theta-derivative vanishes there as well, so this
    is the usual removable-singularity convention).
    """
    _require_finite("theta", theta)
    _require_finite("g", g)
    chi = check_chi(chi)
    plus = port_distribution(theta, g, chi, PortLabel.PLUS, meter)
    minus = port_distribution(theta, g, chi, PortLabel.MINUS, meter)
    p = plus.grid.points
    half = 0.5 * (theta + chi) + g * p
    density = plus.values + minus.values
    # dPr_{+-}/dtheta = -+ sin(half) cos(half) * P_i(p)
    dpr_sq = (np.sin(half) * np.cos(half)) ** 2 * density**2
    info = 0.0
    for curve in (plus, minus):
        integrand = np.divide(
            dpr_sq,
            curve.values,
            out=np.zeros_like(dpr_sq),
            where=curve.values > 0.0,
        )
        info += trapezoid(integrand, curve.grid)
    return info


def crlb_stderr(n: int, info: float) -> float:
    """Cramer-Rao lower bound on the standard error for n shots."""
    return 1.0 / math.sqrt(n * info)
