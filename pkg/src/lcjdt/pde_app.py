"""Evolution problems solved through the canonical transform.

Homogeneous problem
    ``d/dt u = P u`` on ``x > 0`` with ``u(x, 0) = h(x)``, where ``P`` is
    the operator whose bilinear transpose against ``A dx`` is ``-Lambda^M``.
    Explicitly ``P u = Lambda u - i (a/b) x u``; the transform turns the
    equation into ``d/dt L u(lam) = (i lam/c) L u(lam)``, i.e. every
    spectral component picks up ``exp(-i eps t)`` with ``eps = -lam/c``.

Nonhomogeneous problem
    the same spectral ODE with a source, ``Z' = kappa Z + G(lam, t)``,
    solved by the variation-of-constants formula
    ``Z(t) = exp(kappa t) Z(0) + int_0^t exp(kappa (t - tau)) G(lam, tau) dtau``.
    ``convention="adjoint"`` takes ``kappa = -i eps`` (consistent with the
    homogeneous solver), ``"direct"`` takes ``kappa = +i eps``.

Data on the half-line are extended to the whole line (odd by default, which
matches a zero boundary value) and the full-line transform is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .canonical import LcjdtContext, lc_forward_batch, lc_forward_grid, lc_inverse
from .jd_core import SampledFunction, jd_kernel, jd_kernel_dx, weight_A, weight_log_derivative
from .report import CheckReport

__all__ = [
    "HeatProblem",
    "HeatSolution",
    "heat_solve",
    "heat_residual",
    "heat_residual_report",
    "nonhom_solve",
    "spectral_ode_residual",
    "extend_half_line",
    "half_line_relative_l2",
    "spectral_energy_drift",
    "source_23",
]

DEFAULT_STEPS_PER_UNIT = 2000
MAX_PHASE_STEP = 0.5


def source_23(x, t):
    """The source ``exp(-x**2) cos(t)``."""
    return np.exp(-np.asarray(x, float) ** 2) * np.cos(t)


@dataclass(frozen=True)
class HeatProblem:
    """Initial data ``h`` on ``x > 0``, optional source ``g(x, t)`` and output times.

    ``initial`` is a callable or a :class:`SampledFunction` on the positive
    half of the context's spatial grid. ``extension`` is ``"odd"`` or ``"even"``.
    """

    initial: Callable | SampledFunction
    ctx: LcjdtContext
    times: Sequence[float] = (0.0,)
    source: Callable | None = None
    extension: str = "odd"
    convention: str = "adjoint"
    steps_per_unit: int = DEFAULT_STEPS_PER_UNIT

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("times must be a non-empty 1-D sequence")
        if np.any(t < 0) or np.any(np.diff(t) <= 0):
            raise ValueError("times must be nonnegative and strictly ascending")
        object.__setattr__(self, "times", tuple(t.tolist()))
        if self.extension not in ("odd", "even"):
            raise ValueError("extension must be 'odd' or 'even'")
        if self.convention not in ("adjoint", "direct"):
            raise ValueError("convention must be 'adjoint' or 'direct'")
        if self.steps_per_unit < 1:
            raise ValueError("steps_per_unit must be positive")


@dataclass
class HeatSolution:
    problem: HeatProblem
    times: np.ndarray
    spectra: list                      # SpectralFunction per output time
    slices: list                       # SampledFunction on x > 0 per output time
    kappa: np.ndarray
    tau: np.ndarray | None = None      # time nodes of the source integration
    trajectory: np.ndarray | None = None
    source_spectra: np.ndarray | None = None
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.slices)

    def __getitem__(self, k):
        return self.slices[k]

    def __iter__(self):
        return iter(self.slices)

    def time_index(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[k] - t) > 1e-12 * max(1.0, abs(t)):
            raise ValueError(f"t={t} is not one of the solved times")
        return k

    def evaluate(self, x, k: int, nderiv: int = 0):
        """``u(x, t_k)`` (and ``u_x``) at arbitrary points from the stored spectrum."""
        ctx = self.problem.ctx
        M = ctx.matrix
        F = self.spectra[k]
        sg = ctx.spectral_grid()
        x = np.atleast_1d(np.asarray(x, float))
        eps = F.epsilons
        coef = F.values * sg.weights
        if not M.jdt_branch:
            coef = coef * np.exp(0.5j * M.d / M.b * F.lambdas ** 2)
        psi = jd_kernel(x[:, None], eps[None, :], ctx.params)
        w = np.conj(psi) @ coef
        chirp = np.ones_like(x, dtype=complex) if M.jdt_branch else np.exp(0.5j * M.a / M.b * x * x)
        if nderiv == 0:
            return chirp * w
        dw = np.conj(jd_kernel_dx(x[:, None], eps[None, :], ctx.params)) @ coef
        k_ab = 0.0 if M.jdt_branch else M.a / M.b
        return chirp * w, chirp * (dw + 1j * k_ab * x * w)


def extend_half_line(initial, ctx: LcjdtContext, extension: str = "odd") -> SampledFunction:
    """Whole-line samples of half-line data on the context grid."""
    x, w = ctx.spatial_grid()
    sign = np.where(x < 0, -1.0 if extension == "odd" else 1.0, 1.0)
    if isinstance(initial, SampledFunction):
        pos = x > 0
        if not np.array_equal(initial.grid, x[pos]):
            raise ValueError("sampled initial data must live on the positive half of the spatial grid")
        half = initial.values
        vals = np.empty(x.size, complex)
        vals[pos] = half
        vals[~pos] = half[::-1][: np.count_nonzero(~pos)]
        vals = vals * sign
    else:
        vals = sign * np.asarray(initial(np.abs(x)), complex) * np.ones_like(x)
    return SampledFunction(x, vals, w)


def _kappa(eps, convention):
    return -1j * eps if convention == "adjoint" else 1j * eps


def _slices(problem, spectra, check):
    ctx = problem.ctx
    x, w = ctx.spatial_grid()
    pos = x > 0
    out = []
    for Z in spectra:
        u = lc_inverse(Z, x[pos], ctx, check_truncation=check)
        out.append(SampledFunction(x[pos], u.values, w[pos]))
    return out


def heat_solve(prob: HeatProblem) -> HeatSolution:
    """Spectral solution of the homogeneous problem at ``prob.times``."""
    if prob.source is not None:
        raise ValueError("heat_solve is for the source-free problem; use nonhom_solve")
    ctx = prob.ctx
    h = extend_half_line(prob.initial, ctx, prob.extension)
    Z0 = lc_forward_grid(h, ctx)
    kappa = _kappa(Z0.epsilons, "adjoint")
    times = np.asarray(prob.times)
    spectra = [Z0.with_values(Z0.values * np.exp(kappa * t)) for t in times]
    return HeatSolution(prob, times, spectra, _slices(prob, spectra, True), kappa)


def _tau_grid(times, steps_per_unit, max_eps):
    dt_max = min(1.0 / steps_per_unit, MAX_PHASE_STEP / max(max_eps, 1e-300))
    edges = np.concatenate([[0.0], [t for t in times if t > 0]])
    nodes = [np.array([0.0])]
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = max(1, math.ceil((hi - lo) / dt_max - 1e-9))
        nodes.append(np.linspace(lo, hi, n + 1)[1:])
    return np.concatenate(nodes)


def nonhom_solve(prob: HeatProblem, literal: bool = False) -> HeatSolution:
    """Solve ``Z' = kappa Z + G`` per spectral node and synthesise ``u`` at ``prob.times``.

    The source integral is advanced with the exponential trapezoid rule
    ``D_{k+1} = e^{kappa dt} D_k + dt/2 (e^{kappa dt} G_k + G_{k+1})`` on a
    time grid with ``prob.steps_per_unit`` steps per unit time (refined
    further if ``max|eps| dt > 0.5``) that contains every output time. The
    homogeneous part ``exp(kappa t) Z(0)`` is applied exactly, so a zero
    source reproduces :func:`heat_solve` when ``convention="adjoint"``.

    ``literal=True`` instead evaluates
    ``exp(i eps t) (Z(0) + int_0^t exp(i eps tau) G dtau)``, a phase pattern
    that does not solve the spectral ODE; it is kept for comparison only.
    """
    ctx = prob.ctx
    h = extend_half_line(prob.initial, ctx, prob.extension)
    Z0 = lc_forward_grid(h, ctx)
    eps = Z0.epsilons
    kappa = _kappa(eps, prob.convention)
    times = np.asarray(prob.times)
    notes = []
    if prob.source is None:
        spectra = [Z0.with_values(Z0.values * np.exp(kappa * t)) for t in times]
        return HeatSolution(prob, times, spectra, _slices(prob, spectra, True), kappa, notes=notes)

    tau = _tau_grid(times, prob.steps_per_unit, np.abs(eps).max())
    x, w = ctx.spatial_grid()
    sign = np.where(x < 0, -1.0 if prob.extension == "odd" else 1.0, 1.0)
    G = np.empty((tau.size, eps.size), complex)
    chunk = 256
    for s in range(0, tau.size, chunk):
        tt = tau[s:s + chunk]
        vals = sign[None, :] * np.asarray(prob.source(np.abs(x)[None, :], tt[:, None]), complex)
        G[s:s + chunk] = lc_forward_batch(x, w, vals, ctx)

    if literal:
        integ = cumulative_trapezoid(np.exp(1j * eps[None, :] * tau[:, None]) * G, tau, axis=0, initial=0)
        traj = np.exp(1j * eps[None, :] * tau[:, None]) * (Z0.values[None, :] + integ)
        notes.append("literal phase pattern; not a solution of the spectral ODE")
    else:
        traj = np.empty_like(G)
        D = np.zeros(eps.size, complex)
        traj[0] = Z0.values
        for k in range(tau.size - 1):
            dt = tau[k + 1] - tau[k]
            e = np.exp(kappa * dt)
            D = e * D + 0.5 * dt * (e * G[k] + G[k + 1])
            traj[k + 1] = np.exp(kappa * tau[k + 1]) * Z0.values + D
    idx = [int(np.argmin(np.abs(tau - t))) for t in times]
    spectra = [Z0.with_values(traj[i]) for i in idx]
    slices = _slices(prob, spectra, False)
    edge = np.abs(eps) >= np.abs(eps).max() * (1 - 1e-12)
    tail = max(float(np.abs(Z.values[edge]).max() / max(np.abs(Z.values).max(), 1e-300)) for Z in spectra)
    notes.append(f"spectral edge/peak ratio {tail:.2e} (extended source need not be smooth at x=0)")
    return HeatSolution(prob, times, spectra, slices, kappa, tau, traj, G, notes)


def _operator_terms(sol: HeatSolution, x: float, k: int):
    ctx = sol.problem.ctx
    u, du = sol.evaluate(np.array([x, -x]), k, nderiv=1)
    odd = (u[0] - u[1]) / 2
    lam_u = du[0] + weight_log_derivative(x, ctx.params) * odd
    k_ab = 0.0 if ctx.jdt_branch else ctx.matrix.a / ctx.matrix.b
    return u[0], lam_u, 1j * k_ab * x * u[0]


def heat_residual(prob: HeatProblem, sol: HeatSolution, t: float, x: float,
                  convention: str = "transpose") -> float:
    """``|d/dt u - P u|`` at ``(x, t)`` with a three-point time difference over solved times.

    ``convention="transpose"``: ``P u = Lambda u - i (a/b) x u`` (the operator
    the spectral solution actually satisfies). ``"negative"``:
    ``P u = -Lambda^M u = -Lambda u - i (a/b) x u``.
    """
    if x <= 0:
        raise ValueError("x must be > 0")
    k = sol.time_index(t)
    if k == 0 or k == len(sol.times) - 1:
        raise ValueError("t must be interior to the solved times")
    t0, t1, t2 = sol.times[k - 1:k + 2]
    u0 = sol.evaluate([x], k - 1)[0]
    u2 = sol.evaluate([x], k + 1)[0]
    u1, lam_u, chirp_u = _operator_terms(sol, x, k)
    h0, h1 = t1 - t0, t2 - t1
    dudt = (-h1 / (h0 * (h0 + h1)) * u0 + (h1 - h0) / (h0 * h1) * u1 + h0 / (h1 * (h0 + h1)) * u2)
    if convention == "transpose":
        rhs = lam_u - chirp_u
    elif convention == "negative":
        rhs = -lam_u - chirp_u
    else:
        raise ValueError("convention must be 'transpose' or 'negative'")
    return float(abs(dudt - rhs))


def heat_residual_report(prob: HeatProblem, sol: HeatSolution, t: float, x: float,
                         tol: float = 1e-3) -> CheckReport:
    rep = CheckReport()
    rep.add("evolution residual (transpose convention)", heat_residual(prob, sol, t, x, "transpose"), tol,
            "operator with bilinear transpose -Lambda^M; adopted")
    rep.add("evolution residual (negative convention)", heat_residual(prob, sol, t, x, "negative"), None,
            "literal -Lambda^M; reported only")
    return rep


def spectral_ode_residual(sol: HeatSolution, eps_sample=None) -> float:
    """``max |dZ/dt - kappa Z - G|`` over interior time nodes and sampled spectral nodes.

    ``dZ/dt`` is the three-point difference on the (possibly nonuniform)
    integration grid. ``eps_sample`` picks the nearest spectral nodes;
    ``None`` uses all of them.
    """
    if sol.trajectory is None:
        raise ValueError("solution has no source trajectory")
    eps = sol.spectra[0].epsilons
    cols = np.arange(eps.size) if eps_sample is None else np.unique(
        [int(np.argmin(np.abs(eps - e))) for e in np.atleast_1d(eps_sample)])
    Z = sol.trajectory[:, cols]
    G = sol.source_spectra[:, cols]
    kap = sol.kappa[cols]
    tau = sol.tau
    h0 = (tau[1:-1] - tau[:-2])[:, None]
    h1 = (tau[2:] - tau[1:-1])[:, None]
    dZ = (-h1 / (h0 * (h0 + h1)) * Z[:-2] + (h1 - h0) / (h0 * h1) * Z[1:-1] + h0 / (h1 * (h0 + h1)) * Z[2:])
    return float(np.max(np.abs(dZ - kap * Z[1:-1] - G[1:-1])))


def half_line_relative_l2(u: SampledFunction, h: Callable | SampledFunction, ctx: LcjdtContext) -> float:
    """Relative ``L2(A dx)`` distance of a half-line slice from the initial data."""
    ref = h.values if isinstance(h, SampledFunction) else np.asarray(h(u.grid), complex)
    wA = u.weights * weight_A(u.grid, ctx.params)
    den = math.sqrt(np.sum(np.abs(ref) ** 2 * wA))
    num = math.sqrt(np.sum(np.abs(u.values - ref) ** 2 * wA))
    return num / den if den else num


def spectral_energy_drift(sol: HeatSolution) -> float:
    """``max_t |E(t) - E(0)| / E(0)`` with ``E = int |L u|**2 dsigma``."""
    sg = sol.problem.ctx.spectral_grid()
    E = np.array([np.sum(np.abs(Z.values) ** 2 * sg.weights) for Z in sol.spectra])
    return float(np.max(np.abs(E - E[0])) / E[0]) if E[0] else float(np.max(np.abs(E)))
