"""Quadrature grids and the calibration of the spectral measure.

Spatial integrals use composite Gauss-Legendre panels on ``[-X, X]`` with a
panel edge at 0. Spectral integrals run in ``mu = sqrt(eps**2 - rho**2)``,
which removes the square-root edge of the density at ``|eps| = rho``; each
``mu`` node is mapped to both ``eps = +-sqrt(mu**2 + rho**2)``.

The Plancherel density is known up to its normalisation only in the
sense that it is easy to get wrong; :func:`calibrate` pins a single
multiplicative constant by matching ``int |f|**2 A dx`` against the
spectral energy for three probes and records how much the probes disagree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .jd_core import (
    JacobiParams,
    SampledFunction,
    SpectralGrid,
    TruncationError,
    inverse_c_squared,
    jd_transform,
    weight_A,
)

__all__ = [
    "SpatialGridSpec",
    "SpectralGridSpec",
    "CalibrationRecord",
    "CalibrationError",
    "PROBES",
    "FAMILIES",
    "default_spatial_spec",
    "suggest_half_width",
    "gauss_legendre_panels",
    "build_spatial_grid",
    "spatial_sample",
    "build_spectral_grid",
    "calibrate",
    "spectral_energy",
    "spatial_energy",
]

TAIL_TOL = 1e-12
CAL_FLAG_SPREAD = 5e-3
CAL_FAIL_SPREAD = 5e-2

PROBES: dict[str, Callable] = {
    "gauss": lambda x: np.exp(-x ** 2),
    "xgauss": lambda x: x * np.exp(-x ** 2),
    "shifted-gauss": lambda x: np.exp(-(x - 1.0) ** 2 / 2),
}

# (f, f') pairs for checks that want analytic derivatives
FAMILIES: dict[str, tuple[Callable, Callable]] = {
    "gauss": (PROBES["gauss"], lambda x: -2 * x * np.exp(-x ** 2)),
    "xgauss": (PROBES["xgauss"], lambda x: (1 - 2 * x ** 2) * np.exp(-x ** 2)),
    "shifted-gauss": (PROBES["shifted-gauss"], lambda x: -(x - 1.0) * np.exp(-(x - 1.0) ** 2 / 2)),
    "sin": (np.sin, np.cos),
}


class CalibrationError(RuntimeError):
    """Probes disagree on the measure constant by more than 5%."""


@dataclass(frozen=True)
class SpatialGridSpec:
    half_width: float = 12.0
    points_per_unit: int = 64
    panel_order: int = 16

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("half_width must be > 0")
        if self.points_per_unit < 1 or self.panel_order < 1:
            raise ValueError("points_per_unit and panel_order must be positive")
        if self.node_count() < 16:
            raise ValueError("spatial grid would have fewer than 16 nodes")

    def panels_per_side(self) -> int:
        width = self.panel_order / self.points_per_unit
        return max(1, math.ceil(self.half_width / width - 1e-9))

    def node_count(self) -> int:
        return 2 * self.panels_per_side() * self.panel_order


@dataclass(frozen=True)
class SpectralGridSpec:
    mu_max: float = 25.0
    mu_points: int = 400
    both_signs: bool = True
    panel_order: int = 16

    def __post_init__(self):
        if not self.mu_max > 0:
            raise ValueError("mu_max must be > 0")
        if self.mu_points < 16:
            raise ValueError("mu_points must be >= 16")


@dataclass(frozen=True)
class CalibrationRecord:
    """Measure constant, the cross-probe spread, and what it was computed for."""

    constant: float
    spread: float
    ratios: tuple
    fingerprint: tuple

    @property
    def flagged(self) -> bool:
        return self.spread > CAL_FLAG_SPREAD


def gauss_legendre_panels(lo: float, hi: float, n_panels: int, order: int):
    """Nodes and weights of composite Gauss-Legendre on ``[lo, hi]``."""
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = np.diff(edges)[:, None] / 2
    mid = (edges[:-1] + edges[1:])[:, None] / 2
    return (mid + half * t).ravel(), (half * w).ravel()


@lru_cache(maxsize=16)
def _spatial_nodes(spec: SpatialGridSpec):
    n = spec.panels_per_side()
    X = n * spec.panel_order / spec.points_per_unit
    xr, wr = gauss_legendre_panels(0.0, X, n, spec.panel_order)
    x = np.concatenate([-xr[::-1], xr])
    w = np.concatenate([wr[::-1], wr])
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def build_spatial_grid(spec: SpatialGridSpec, f_probe: Callable | None, p: JacobiParams):
    """Composite Gauss-Legendre nodes/weights on ``[-X, X]``, symmetric about 0.

    ``X`` is ``spec.half_width`` rounded up to a whole panel. Raises
    :class:`TruncationError` when ``|f_probe(+-X)| A(+-X) >= 1e-12``.
    """
    x, w = _spatial_nodes(spec)
    if f_probe is not None:
        # check at the interval ends, not just the outermost nodes
        X = spec.panels_per_side() * spec.panel_order / spec.points_per_unit
        ends = np.array([-X, X])
        tail = np.abs(np.asarray(f_probe(ends), dtype=complex)) * weight_A(ends, p)
        if np.any(tail >= TAIL_TOL):
            raise TruncationError(
                f"|f| A = {tail.max():.3g} at x = +-{X:g}; try a larger half_width "
                f"(e.g. {suggest_half_width(f_probe, p, spec):g})")
    return x, w


def suggest_half_width(f_probe: Callable, p: JacobiParams, spec: SpatialGridSpec = SpatialGridSpec(),
                       limit: float = 60.0) -> float:
    """Smallest panel-aligned ``X`` whose tail passes the decay test (``nan`` if none up to ``limit``)."""
    width = spec.panel_order / spec.points_per_unit
    X = width
    while X <= limit:
        ends = np.array([-X, X])
        try:
            tail = np.abs(np.asarray(f_probe(ends), dtype=complex)) * weight_A(ends, p)
        except OverflowError:
            break
        if np.all(tail < TAIL_TOL):
            return X
        X += width
    return float("nan")


def default_spatial_spec(p: JacobiParams, points_per_unit: int = 64, panel_order: int = 16,
                         minimum: float = 12.0) -> SpatialGridSpec:
    """Default grid: ``X = 12`` or wider if a built-in probe needs it for these parameters."""
    base = SpatialGridSpec(minimum, points_per_unit, panel_order)
    need = [suggest_half_width(f, p, base) for f in PROBES.values()]
    if any(np.isnan(need)):
        raise TruncationError("no half-width up to 60 contains the built-in probes for these parameters")
    return SpatialGridSpec(max([minimum] + need), points_per_unit, panel_order)


def spatial_sample(func: Callable, spec: SpatialGridSpec, p: JacobiParams, symmetry=None,
                   check: bool = True) -> SampledFunction:
    """Sample ``func`` on the spatial quadrature grid (weights attached)."""
    x, w = build_spatial_grid(spec, func if check else None, p)
    vals = np.asarray(func(x), dtype=complex) * np.ones_like(x)
    return SampledFunction(x, vals, w, symmetry)


@lru_cache(maxsize=16)
def _spectral_base(spec: SpectralGridSpec, p: JacobiParams):
    n_panels = max(1, math.ceil(spec.mu_points / spec.panel_order))
    mu, wmu = gauss_legendre_panels(0.0, spec.mu_max, n_panels, spec.panel_order)
    eps = np.sqrt(mu * mu + p.rho ** 2)
    # density in eps times |d eps/d mu| = mu/|eps|  ->  |c(mu)|**-2 / (8 pi)
    w = wmu * inverse_c_squared(mu, p) / (8 * np.pi)
    if spec.both_signs:
        eps = np.concatenate([-eps[::-1], eps])
        mu = np.concatenate([mu[::-1], mu])
        w = np.concatenate([w[::-1], w])
    return eps, mu, w


def build_spectral_grid(spec: SpectralGridSpec, p: JacobiParams,
                        calibration: CalibrationRecord | float | None) -> SpectralGrid:
    """Spectral nodes in ``eps`` with weights ``w_GL * density * constant * |d eps/d mu|``.

    ``calibration=None`` defers calibration (constant 1, analytic normalisation).
    Nodes are sorted by ``eps``; the number of ``mu`` nodes is ``mu_points``
    rounded up to whole panels.
    """
    const = 1.0
    if isinstance(calibration, CalibrationRecord):
        const = calibration.constant
    elif calibration is not None:
        const = float(calibration)
    if not const > 0:
        raise ValueError("calibration constant must be positive")
    eps, mu, w = _spectral_base(spec, p)
    return SpectralGrid(eps, mu, w * const, p.rho, const, w)


def spatial_energy(f: SampledFunction, p: JacobiParams) -> float:
    """``int |f|**2 A dx`` on the quadrature grid of ``f``."""
    return float(np.sum(np.abs(f.values) ** 2 * f.weights * weight_A(f.grid, p)))


def spectral_energy(values, sg: SpectralGrid, calibrated: bool = True) -> float:
    w = sg.weights if calibrated else sg.base_weights
    return float(np.sum(np.abs(values) ** 2 * w))


def _chirp_transform(f: SampledFunction, eps, p, a_over_b):
    g = f.with_values(np.exp(-0.5j * a_over_b * f.grid ** 2) * f.values)
    return jd_transform(g, eps, p).values


@lru_cache(maxsize=16)
def _calibrate_cached(p, a_over_b, sspec, gspec):
    sg = build_spectral_grid(gspec, p, None)
    ratios = []
    for name, probe in PROBES.items():
        f = spatial_sample(probe, sspec, p)
        F = _chirp_transform(f, sg.epsilon_nodes, p, a_over_b)
        ratios.append(spatial_energy(f, p) / spectral_energy(F, sg, calibrated=False))
    ratios = np.array(ratios)
    const = float(ratios.mean())
    spread = float(np.max(np.abs(ratios - const)) / const)
    return CalibrationRecord(const, spread, tuple(ratios.tolist()),
                             (p.alpha, p.beta, a_over_b, sspec, gspec))


def calibrate(p: JacobiParams, matrix=None, grids=None) -> CalibrationRecord:
    """Fit the global constant of the spectral measure by Parseval on three probes.

    ``matrix`` is any object with ``a`` and ``b`` attributes (or ``None`` for
    the plain transform); its chirp only changes phases, so the constant
    should not depend on it. ``grids`` is ``(SpatialGridSpec, SpectralGridSpec)``.
    Raises :class:`CalibrationError` if the probes spread by more than 5%.
    """
    sspec, gspec = grids if grids is not None else (SpatialGridSpec(), SpectralGridSpec())
    a_over_b = 0.0 if matrix is None else float(matrix.a) / float(matrix.b)
    rec = _calibrate_cached(p, a_over_b, sspec, gspec)
    if rec.spread > CAL_FAIL_SPREAD:
        raise CalibrationError(
            f"calibration probes disagree by {rec.spread:.2%}; grids too coarse or density wrong")
    return rec
