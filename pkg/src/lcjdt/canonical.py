"""Linear canonical Jacobi-Dunkl transform.

For a unimodular matrix ``M = (a b; c d)`` with ``b != 0`` the kernel is

    Psi(x, lam) = exp(-i (a x**2 + d lam**2) / (2b)) * psi_{-lam/c}(x),   c != 0
    Psi(x, lam) = psi_lam(x),                                             c == 0

and the transform is ``L f(lam) = int f(x) Psi(x, lam) A(x) dx``. Spectral
quantities are stored against ``eps = -lam/c`` (``eps = lam`` when c = 0),
the Jacobi-Dunkl frequency the kernel actually sees.

Forward transforms go through the modulation identity

    L f(lam) = exp(-i d lam**2 / (2b)) * F[exp(-i a x**2 / (2b)) f](eps)

which reuses the cached Jacobi-Dunkl kernel table; a direct pointwise path
is kept as an independent cross-check. Every checker returns a
:class:`~lcjdt.report.CheckReport`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .jd_core import (
    JacobiParams,
    SampledFunction,
    SpectralFunction,
    SpectralGrid,
    TruncationError,
    jacobi_phi,
    jd_inverse,
    jd_kernel,
    jd_kernel_matrix,
    jd_kernel_dx,
    jd_operator_apply,
    jd_transform,
    weight_A,
)
from .report import CheckReport
from .spectral import (
    CalibrationRecord,
    SpatialGridSpec,
    SpectralGridSpec,
    build_spatial_grid,
    build_spectral_grid,
    calibrate,
    default_spatial_spec,
    spatial_energy,
)

__all__ = [
    "CanonicalMatrix",
    "LcjdtContext",
    "PathDisagreementWarning",
    "lc_operator_apply",
    "intertwining_residual",
    "lc_kernel",
    "lc_kernel_dx",
    "lc_eigen_residual",
    "lc_forward",
    "lc_forward_grid",
    "lc_forward_batch",
    "lc_inverse",
    "relative_l2",
    "parseval_report",
    "derivative_transform_report",
    "convolve_spectral",
    "convolution_report",
    "convolution_weight_diagnostic",
    "even_odd_relation_report",
    "uncertainty_ratio",
    "reduction_report",
    "rotation_case_report",
]

DET_TOL = 1e-12
PATH_TOL = 1e-8
SPECTRAL_EDGE_TOL = 1e-10


class PathDisagreementWarning(UserWarning):
    """Direct and modulation forward paths differ by more than 1e-8 relative."""


@dataclass(frozen=True)
class CanonicalMatrix:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_TOL:
            raise ValueError(f"matrix must have determinant 1, got {det!r}")
        if self.b == 0.0:
            raise ValueError("b = 0 matrices are not supported")

    @classmethod
    def rotation(cls, theta: float) -> "CanonicalMatrix":
        ct, st = math.cos(theta), math.sin(theta)
        return cls(ct, -st, st, ct)

    @property
    def jdt_branch(self) -> bool:
        return self.c == 0.0

    def eps_of(self, lam):
        """Jacobi-Dunkl frequency seen by the kernel at transform variable ``lam``."""
        lam = np.asarray(lam, dtype=float)
        return lam if self.jdt_branch else -lam / self.c

    def lam_of(self, eps):
        eps = np.asarray(eps, dtype=float)
        return eps if self.jdt_branch else -self.c * eps

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class LcjdtContext:
    """Parameters, matrix and grids for one transform.

    ``spatial=None`` picks :func:`~lcjdt.spectral.default_spatial_spec`.
    Calibration of the spectral measure is computed once per
    ``(alpha, beta, grids)`` and shared by every matrix.
    """

    params: JacobiParams
    matrix: CanonicalMatrix
    spatial: SpatialGridSpec | None = None
    spectral: SpectralGridSpec = field(default_factory=SpectralGridSpec)
    use_calibration: bool = True

    def __post_init__(self):
        if self.spatial is None:
            object.__setattr__(self, "spatial", default_spatial_spec(self.params))

    @property
    def jdt_branch(self) -> bool:
        return self.matrix.jdt_branch

    @property
    def rho(self) -> float:
        return self.params.rho

    def with_matrix(self, matrix: CanonicalMatrix) -> "LcjdtContext":
        return replace(self, matrix=matrix)

    def spatial_grid(self):
        return build_spatial_grid(self.spatial, None, self.params)

    def sample(self, func: Callable, symmetry=None, check: bool = True) -> SampledFunction:
        x, w = build_spatial_grid(self.spatial, func if check else None, self.params)
        return SampledFunction(x, np.asarray(func(x), complex) * np.ones_like(x), w, symmetry)

    def calibration(self) -> CalibrationRecord:
        return calibrate(self.params, None, (self.spatial, self.spectral))

    def spectral_grid(self) -> SpectralGrid:
        cal = self.calibration() if self.use_calibration else None
        return build_spectral_grid(self.spectral, self.params, cal)

    def grid_lambdas(self):
        return self.matrix.lam_of(self.spectral_grid().epsilon_nodes)


# --------------------------------------------------------------------------
# operator and kernel

def _chirp(x, ctx, sign=-1.0):
    M = ctx.matrix
    return np.exp(sign * 0.5j * M.a / M.b * np.asarray(x, float) ** 2)


def lc_operator_apply(f: Callable, x: float, ctx: LcjdtContext, df: Callable | None = None) -> complex:
    """``Lambda f(x) + i (a/b) x f(x)``."""
    M = ctx.matrix
    base = jd_operator_apply(f, x, ctx.params, df=df)
    return base + 1j * (M.a / M.b) * x * complex(f(x))


def intertwining_residual(f: Callable, x: float, ctx: LcjdtContext, df: Callable | None = None) -> float:
    """``|U (Lambda^M (U^-1 f))(x) - Lambda f(x)|`` with ``U(x) = exp(i a x**2 / (2b))``.

    With ``df`` both sides use analytic derivatives; otherwise central differences.
    """
    if x == 0:
        raise ValueError("intertwining residual is evaluated at x != 0")
    k = ctx.matrix.a / ctx.matrix.b
    g = lambda s: np.exp(-0.5j * k * s * s) * f(s)
    dg = None
    if df is not None:
        dg = lambda s: np.exp(-0.5j * k * s * s) * (df(s) - 1j * k * s * f(s))
    lhs = np.exp(0.5j * k * x * x) * lc_operator_apply(g, x, ctx, df=dg)
    rhs = jd_operator_apply(f, x, ctx.params, df=df)
    return float(abs(lhs - rhs))


def lc_kernel(x, lam, ctx: LcjdtContext):
    """Kernel ``Psi(x, lam)``; broadcasts over ``x`` and ``lam``."""
    M = ctx.matrix
    x, lam = np.broadcast_arrays(np.asarray(x, float), np.asarray(lam, float))
    psi = jd_kernel(x, M.eps_of(lam), ctx.params)
    if M.jdt_branch:
        return psi
    return np.exp(-0.5j * (M.a * x * x + M.d * lam * lam) / M.b) * psi


def lc_kernel_dx(x, lam, ctx: LcjdtContext):
    M = ctx.matrix
    x, lam = np.broadcast_arrays(np.asarray(x, float), np.asarray(lam, float))
    eps = M.eps_of(lam)
    dpsi = jd_kernel_dx(x, eps, ctx.params)
    if M.jdt_branch:
        return dpsi
    psi = jd_kernel(x, eps, ctx.params)
    phase = np.exp(-0.5j * (M.a * x * x + M.d * lam * lam) / M.b)
    return phase * (dpsi - 1j * (M.a / M.b) * x * psi)


def _apply_numeric(g: Callable, x: float, ctx: LcjdtContext) -> complex:
    return lc_operator_apply(g, x, ctx)


def lc_eigen_residual(x: float, lam: float, ctx: LcjdtContext, k: int = 1) -> float:
    """Relative residual of ``(Lambda^M)**k Psi = (-i lam/c)**k Psi`` at ``x != 0``.

    The innermost application uses the analytic x-derivative of the kernel;
    further applications use central differences with ``h = 1e-5 max(1, |x|)``.
    """
    if ctx.jdt_branch:
        raise ValueError("eigen-relation needs c != 0 (JDT branch)")
    if x == 0:
        raise ValueError("residual is evaluated at x != 0")
    if k < 1:
        raise ValueError("k must be a positive integer")
    psi = lambda s: complex(lc_kernel(s, lam, ctx))
    dpsi = lambda s: complex(lc_kernel_dx(s, lam, ctx))
    level = lambda s: lc_operator_apply(psi, s, ctx, df=dpsi)
    for _ in range(k - 1):
        level = (lambda inner: (lambda s: _apply_numeric(inner, s, ctx)))(level)
    val = psi(x)
    target = (-1j * lam / ctx.matrix.c) ** k * val
    return float(abs(level(x) - target) / max(1.0, abs(val)))


# --------------------------------------------------------------------------
# transforms

def _attach_grid(lam, eps, values, ctx):
    sg = ctx.spectral_grid()
    on_grid = eps.shape == sg.epsilon_nodes.shape and np.array_equal(eps, sg.epsilon_nodes)
    return SpectralFunction(lam, values, eps, sg if on_grid else None)


def _direct_forward(f: SampledFunction, lam, ctx):
    K = lc_kernel(f.grid[:, None], lam[None, :], ctx)
    return (f.values * f.weights * weight_A(f.grid, ctx.params)) @ K


def _modulation_forward(f: SampledFunction, lam, eps, ctx, check):
    M = ctx.matrix
    if M.jdt_branch:
        return jd_transform(f, lam, ctx.params, check=check).values
    h = f.with_values(_chirp(f.grid, ctx, -1.0) * f.values)
    F = jd_transform(h, eps, ctx.params, check=check).values
    return np.exp(-0.5j * M.d / M.b * lam * lam) * F


def lc_forward(f: SampledFunction, lambdas, ctx: LcjdtContext, path: str = "modulation",
               check_decay: bool = True, crosscheck: bool = False) -> SpectralFunction:
    """Forward transform at the requested ``lambdas``.

    ``path="modulation"`` (default) uses the chirp/modulation identity and
    the cached kernel table; ``path="direct"`` evaluates the kernel pointwise.
    ``crosscheck=True`` computes both and warns with
    :class:`PathDisagreementWarning` if they differ by more than 1e-8
    relative where ``|L f| > 1e-10``. Off-grid ``lambdas`` are evaluated
    exactly rather than interpolated.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    return _forward(f, lam, ctx.matrix.eps_of(lam), ctx, path, check_decay, crosscheck)


def _forward(f, lam, eps, ctx, path, check_decay, crosscheck):
    if f.weights is None:
        raise ValueError("forward transform needs quadrature weights")
    if path not in ("modulation", "direct"):
        raise ValueError(f"unknown path {path!r}")
    if path == "direct" or crosscheck:
        if check_decay:
            from .jd_core import check_decay as _check
            _check(f, ctx.params)
        direct = _direct_forward(f, lam, ctx)
    if path == "modulation" or crosscheck:
        modul = _modulation_forward(f, lam, eps, ctx, check_decay)
    if crosscheck:
        big = np.abs(modul) > 1e-10
        if np.any(big):
            rel = np.max(np.abs(direct[big] - modul[big]) / np.abs(modul[big]))
            if rel > PATH_TOL:
                warnings.warn(f"forward paths differ by {rel:.2e} relative", PathDisagreementWarning)
    values = modul if path == "modulation" else direct
    return _attach_grid(lam, eps, values, ctx)


def lc_forward_grid(f: SampledFunction, ctx: LcjdtContext, path: str = "modulation",
                    check_decay: bool = True, crosscheck: bool = False) -> SpectralFunction:
    """Forward transform on the nodes of the context's spectral grid."""
    # pass the nodes themselves: -(-c eps)/c need not reproduce eps bitwise
    eps = ctx.spectral_grid().epsilon_nodes
    return _forward(f, ctx.matrix.lam_of(eps), eps, ctx, path, check_decay, crosscheck)


def lc_forward_batch(grid, weights, values, ctx: LcjdtContext):
    """Forward transforms of many functions sampled on one grid, on the spectral nodes.

    ``values`` has shape ``(n_functions, len(grid))``; returns
    ``(n_functions, n_spectral)``. No decay check.
    """
    M = ctx.matrix
    grid = np.asarray(grid, float)
    sg = ctx.spectral_grid()
    eps = sg.epsilon_nodes
    K = jd_kernel_matrix(grid, eps, ctx.params)
    scale = np.asarray(weights, float) * weight_A(grid, ctx.params)
    if not M.jdt_branch:
        scale = scale * _chirp(grid, ctx, -1.0)
    out = (np.asarray(values, complex) * scale) @ K
    if not M.jdt_branch:
        lam = M.lam_of(eps)
        out = out * np.exp(-0.5j * M.d / M.b * lam * lam)
    return out


def lc_inverse(F: SpectralFunction, xs, ctx: LcjdtContext, check_truncation: bool = True) -> SampledFunction:
    """``int F(lam) conj(Psi(x, lam)) dsigma(eps)`` over the context's spectral grid.

    Raises :class:`TruncationError` if ``|F|`` at the outermost ``|eps|``
    nodes exceeds ``1e-10`` times its maximum.
    """
    sg = ctx.spectral_grid()
    eps = F.epsilons
    if eps.shape != sg.epsilon_nodes.shape or not np.array_equal(eps, sg.epsilon_nodes):
        raise ValueError("spectral function is not sampled on the context's spectral grid")
    if check_truncation:
        amp = np.abs(F.values)
        top = amp.max(initial=0.0)
        edge = np.abs(eps) >= np.abs(eps).max() * (1 - 1e-12)
        if top > 0 and amp[edge].max() > SPECTRAL_EDGE_TOL * top:
            raise TruncationError(
                f"|F| at the spectral edge is {amp[edge].max() / top:.2e} of its peak; raise mu_max")
    M = ctx.matrix
    if M.jdt_branch:
        return jd_inverse(F, xs, sg, ctx.params)
    lam = F.lambdas
    G = F.with_values(np.exp(0.5j * M.d / M.b * lam * lam) * F.values)
    w = jd_inverse(G, xs, sg, ctx.params)
    return SampledFunction(w.grid, _chirp(w.grid, ctx, 1.0) * w.values)


def relative_l2(u: SampledFunction, v: SampledFunction, p: JacobiParams) -> float:
    """``||u - v|| / ||v||`` in ``L2(A dx)`` on the grid/weights of ``v``."""
    if not np.array_equal(u.grid, v.grid):
        raise ValueError("functions live on different grids")
    w = v.weights * weight_A(v.grid, p)
    den = math.sqrt(np.sum(np.abs(v.values) ** 2 * w))
    num = math.sqrt(np.sum(np.abs(u.values - v.values) ** 2 * w))
    return num / den if den > 0 else num


# --------------------------------------------------------------------------
# theorem checks

def parseval_report(f: SampledFunction, h: SampledFunction, ctx: LcjdtContext, tol: float = 5e-3,
                    name: str = "Parseval identity") -> CheckReport:
    """Compare ``int f conj(h) A dx`` with ``int L f conj(L h) dsigma``.

    The residual is normalised by ``||f|| ||h||`` so that cross terms whose
    exact value is 0 still get a meaningful scale.
    """
    p = ctx.params
    A = weight_A(f.grid, p)
    lhs = np.sum(f.values * np.conj(h.values) * A * f.weights)
    sg = ctx.spectral_grid()
    F = lc_forward_grid(f, ctx).values
    H = lc_forward_grid(h, ctx).values
    rhs = np.sum(F * np.conj(H) * sg.weights)
    scale = math.sqrt(spatial_energy(f, p) * spatial_energy(h, p))
    rep = CheckReport()
    if scale == 0:
        rep.add(name, abs(lhs - rhs), tol, "zero input")
        return rep
    note = f"lhs={complex(lhs):.6g} rhs={complex(rhs):.6g}; measure constant {sg.constant:.12g} (calibrated)"
    rep.add(name, abs(lhs - rhs) / scale, tol, note)
    return rep


def derivative_transform_report(f: Callable, df: Callable, lambdas, ctx: LcjdtContext,
                                tol: float = 1e-5, h: float = 1e-5) -> CheckReport:
    """``L(f')(lam)`` by quadrature against ``-int f d/dx[Psi A] dx``.

    The inner derivative of ``Psi A`` is a central difference of the product.
    Residuals are scaled by ``int |f' Psi A| dx`` so that values which vanish
    by parity (even ``f`` at ``lam = 0``) are not divided by rounding noise.
    """
    x, w = ctx.spatial_grid()
    p = ctx.params
    lam = np.atleast_1d(np.asarray(lambdas, float))
    fx = np.asarray(f(x), complex) * np.ones_like(x)
    dfx = np.asarray(df(x), complex) * np.ones_like(x)
    prod = lambda s: lc_kernel(s[:, None], lam[None, :], ctx) * weight_A(s, p)[:, None]
    K = lc_kernel(x[:, None], lam[None, :], ctx)
    lhs = (dfx * w * weight_A(x, p)) @ K
    l1 = np.abs(dfx * w * weight_A(x, p)) @ np.abs(K)
    dprod = (prod(x + h) - prod(x - h)) / (2 * h)
    rhs = -(fx * w) @ dprod
    rep = CheckReport()
    for l_, a_, b_, s_ in zip(lam, lhs, rhs, l1):
        scale = max(abs(a_), abs(b_), s_)
        res = 0.0 if scale == 0 else abs(a_ - b_) / scale
        rep.add(f"differentiation identity (lambda={l_:.6g})", res, tol)
    return rep


def convolve_spectral(f: SampledFunction, r: SampledFunction, ctx: LcjdtContext) -> SampledFunction:
    """Operational convolution ``L^-1(L f * L r)`` on the grid of ``f``."""
    if not np.array_equal(f.grid, r.grid):
        raise ValueError("f and r must share a grid")
    F = lc_forward_grid(f, ctx)
    R = lc_forward_grid(r, ctx)
    out = lc_inverse(F.with_values(F.values * R.values), f.grid, ctx)
    return SampledFunction(f.grid, out.values, f.weights)


def convolution_report(f: SampledFunction, r: SampledFunction, ctx: LcjdtContext,
                       tol_factor: float = 1e-3, tol_commute: float = 1e-8) -> CheckReport:
    """Factorisation ``L(f*r) = L f L r`` and commutativity of the operational product."""
    sg = ctx.spectral_grid()
    fr = convolve_spectral(f, r, ctx)
    rf = convolve_spectral(r, f, ctx)
    target = lc_forward_grid(f, ctx).values * lc_forward_grid(r, ctx).values
    got = lc_forward_grid(fr, ctx, check_decay=False).values
    num = math.sqrt(np.sum(np.abs(got - target) ** 2 * sg.weights))
    den = math.sqrt(np.sum(np.abs(target) ** 2 * sg.weights))
    rep = CheckReport()
    rep.add("convolution factorisation", num / den if den else num, tol_factor,
            "spectral L2 norm; product defined operationally")
    rep.add("convolution commutativity", relative_l2(rf, fr, ctx.params), tol_commute)
    return rep


def convolution_weight_diagnostic(f: Callable, r: Callable, lam: float, ctx: LcjdtContext,
                                  half_width: float | None = None, points_per_unit: int = 24) -> CheckReport:
    """Evaluate the x-domain convolution integral with the lambda-dependent weight.

    ``B(x - t) = Psi(x-t) Psi(t) A(x-t) A(t) / (Psi(x) A(x))`` is substituted
    literally at one fixed ``lam``; the outer transform integral should then
    reproduce ``L f(lam) L r(lam)``. Reported only: the weight depends on
    ``lam`` and divides by ``A(x)``, which vanishes at 0, so this is not a
    usable definition of a convolution, only a test of the interchange step.
    """
    p = ctx.params
    if half_width is None:
        half_width = ctx.spatial.half_width
    n = max(1, math.ceil(half_width * points_per_unit / 16))
    from .spectral import gauss_legendre_panels
    xr, wr = gauss_legendre_panels(0.0, half_width, n, 16)
    x = np.concatenate([-xr[::-1], xr])
    w = np.concatenate([wr[::-1], wr])
    psi_x = lc_kernel(x, lam, ctx)
    A_x = weight_A(x, p)
    u = x[:, None] - x[None, :]                      # x - t
    au = np.abs(u)
    mask = au > 0
    psi_u = np.ones_like(u, dtype=complex)
    psi_u[mask] = lc_kernel(u[mask], lam, ctx)
    A_u = np.where(mask, weight_A(np.where(mask, u, 1.0), p), 0.0)
    B = psi_u * psi_x[None, :] * A_u / (psi_x * A_x)[:, None] * A_x[None, :]
    inner = (f(x)[None, :] * r(u) * B) @ w
    lhs = np.sum(psi_x * inner * A_x * w)
    rhs = np.sum(f(x) * psi_x * A_x * w) * np.sum(r(x) * psi_x * A_x * w)
    rep = CheckReport()
    rep.add("convolution weight interchange (diagnostic)", abs(lhs - rhs) / max(abs(rhs), 1e-300), None,
            f"lambda={lam:g}; weight is lambda-dependent and singular at x=0")
    return rep


def _half_line_lc(g, x, w, mu, lam, p, ctx):
    # int_0^inf g exp(-i(a x^2 + d lam^2)/(2b)) phi_mu A dx on the positive nodes
    M = ctx.matrix
    phi = jacobi_phi(x[:, None], mu[None, :], p)
    if M.jdt_branch:
        phase = np.ones((x.size, lam.size), complex)
    else:
        phase = np.exp(-0.5j * (M.a * x[:, None] ** 2 + M.d * lam[None, :] ** 2) / M.b)
    return (g * w * weight_A(x, p)) @ (phase * phi)


def even_odd_relation_report(f: SampledFunction, mu_values, ctx: LcjdtContext, tol: float = 1e-3,
                             name: str = "even/odd relation") -> CheckReport:
    """Residual of the splitting identity

        L f(lam) = 2 L+(f_e)(mu) + (i eps / (8 (alpha+1))) L+_{alpha+1,beta+1}(f_o / sinh 2x)(mu)

    where ``L+`` is the half-line transform with kernel
    ``exp(-i(a x**2 + d lam**2)/(2b)) phi_mu``, ``eps = -lam/c`` and
    ``eps**2 = mu**2 + rho**2``. For ``c = 1`` the coefficient is
    ``-i lam / (8 (alpha+1))``. ``lam`` is taken as ``|c| sqrt(mu**2 + rho**2)``.
    """
    p = ctx.params
    if not np.allclose(f.grid, -f.grid[::-1], rtol=0, atol=1e-12):
        raise ValueError("even/odd split needs a grid symmetric about 0")
    mu = np.atleast_1d(np.asarray(mu_values, float))
    M = ctx.matrix
    scale_c = 1.0 if M.jdt_branch else abs(M.c)
    lam = scale_c * np.sqrt(mu * mu + p.rho ** 2)
    eps = M.eps_of(lam)
    fe = (f.values + f.values[::-1]) / 2
    fo = (f.values - f.values[::-1]) / 2
    pos = f.grid > 0
    x, w = f.grid[pos], f.weights[pos]
    ratio = np.zeros(x.size, complex)
    nz = x > 0
    ratio[nz] = fo[pos][nz] / np.sinh(2 * x[nz])   # x = 0 carries A = 0 weight anyway
    lhs = lc_forward(f, lam, ctx).values
    t_even = _half_line_lc(fe[pos], x, w, mu, lam, p, ctx)
    t_odd = _half_line_lc(ratio, x, w, mu, lam, p.shifted(), ctx)
    rhs = 2 * t_even + 1j * eps / (8 * (p.alpha + 1)) * t_odd
    res = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)
    rep = CheckReport()
    rep.add(name, float(res.max()), tol, f"max over mu in {np.round(mu, 4).tolist()}")
    return rep


def uncertainty_ratio(f: SampledFunction, gamma: float, m: float, n: float, ctx: LcjdtContext) -> float:
    """``|| |x|^(gamma m) f ||^(n/(m+n)) || |lam|^n L f ||_sigma^(m/(m+n)) / ||f||``.

    Norms are ``L2(A dx)`` and ``L2(dsigma)``; a reported quantity, no lower
    bound is asserted.
    """
    if not (m > 0 and n > 0):
        raise ValueError("m and n must be positive")
    p = ctx.params
    A = weight_A(f.grid, p)
    with np.errstate(over="raise"):
        try:
            xw = np.abs(f.grid) ** (2 * gamma * m)
            xnorm = math.sqrt(np.sum(xw * np.abs(f.values) ** 2 * A * f.weights))
        except FloatingPointError as exc:
            raise OverflowError("|x|^(gamma m) overflows on this grid") from exc
    fnorm = math.sqrt(np.sum(np.abs(f.values) ** 2 * A * f.weights))
    sg = ctx.spectral_grid()
    F = lc_forward_grid(f, ctx)
    lnorm = math.sqrt(np.sum(np.abs(F.lambdas) ** (2 * n) * np.abs(F.values) ** 2 * sg.weights))
    if not all(map(math.isfinite, (xnorm, lnorm, fnorm))):
        raise OverflowError("norm overflow in uncertainty ratio")
    if fnorm == 0:
        raise ValueError("ratio undefined for f = 0")
    s = n / (m + n)
    return xnorm ** s * lnorm ** (1 - s) / fnorm


def reduction_report(ctx: LcjdtContext, f: SampledFunction, xs, lams, tol: float = 1e-12) -> CheckReport:
    """For ``M = (0 1; -1 0)`` the canonical kernel/transform must equal the plain ones."""
    red = ctx.with_matrix(CanonicalMatrix(0.0, 1.0, -1.0, 0.0))
    p = ctx.params
    xs = np.asarray(xs, float)
    lams = np.asarray(lams, float)
    k1 = lc_kernel(xs[:, None], lams[None, :], red)
    k0 = jd_kernel(xs[:, None], lams[None, :], p)
    rep = CheckReport()
    rep.add("reduction: kernel", float(np.max(np.abs(k1 - k0))), tol)
    F1 = lc_forward_grid(f, red).values
    F0 = jd_transform(f, red.grid_lambdas(), p).values
    rep.add("reduction: transform", float(np.max(np.abs(F1 - F0)) / max(np.max(np.abs(F0)), 1e-300)), tol)
    return rep


def rotation_case_report(ctx: LcjdtContext, xs, lams, theta: float = math.pi / 3,
                         tol: float = 1e-12) -> CheckReport:
    """Kernel for a rotation matrix against its explicit trigonometric form."""
    M = CanonicalMatrix.rotation(theta)
    rot = ctx.with_matrix(M)
    xs = np.asarray(xs, float)[:, None]
    lams = np.asarray(lams, float)[None, :]
    ct, st = math.cos(theta), math.sin(theta)
    expected = np.exp(-1j * (ct * xs ** 2 + ct * lams ** 2) / (2 * -st)) * jd_kernel(xs, -lams / st, ctx.params)
    got = lc_kernel(xs, lams, rot)
    rep = CheckReport()
    rep.add("rotation-matrix kernel", float(np.max(np.abs(got - expected))), tol,
            "structural identity only; no independent fractional transform")
    return rep
