"""Classical Jacobi-Dunkl layer.

Weight ``A``, the differential-difference operator, the Jacobi function
``phi_mu`` and its x-derivatives, the Jacobi-Dunkl kernel ``psi_lambda``,
the Plancherel density and the forward/inverse transform by quadrature.

Jacobi-function evaluation
--------------------------
``phi_mu(x) = 2F1((rho+i mu)/2, (rho-i mu)/2; alpha+1; -sinh(x)**2)``.

Two representations are used, chosen per point:

* Pfaff series in ``tanh(x)**2`` while ``tanh(x)**2 <= 0.9`` and
  ``|mu| tanh|x| <= 8`` (the series loses roughly ``exp(|mu| tanh|x|)`` to
  cancellation, so the bound keeps the loss below ~1e3 ulp);
* the connection formula in ``sech(x)**2``,
  ``phi = sum_{s=a,b} G_s (cosh x)**(-2s) 2F1(s, c-s'; s-s'+1; sech(x)**2)``
  with gamma-ratio coefficients ``G_s``, everywhere else.

The connection coefficients have poles where ``mu`` is in ``i*Z`` (the two
terms cancel). Within 0.25 of such a point the value is recovered from the
trapezoidal Cauchy integral over a circle of radius 0.5 around it, which is
exact to rounding for this entire function of ``mu``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .specfun import hyp2f1_series, ln_gamma

__all__ = [
    "JacobiParams",
    "SampledFunction",
    "SpectralGrid",
    "SpectralFunction",
    "TruncationError",
    "weight_A",
    "log_weight_A",
    "weight_log_derivative",
    "jd_operator_apply",
    "jacobi_phi",
    "jacobi_phi_dx",
    "jacobi_phi_dxx",
    "jacobi_phi_derivs",
    "mu_from_lambda",
    "jd_kernel",
    "jd_kernel_dx",
    "jd_kernel_matrix",
    "jd_eigen_residual",
    "c_function",
    "spectral_density",
    "jd_transform",
    "jd_inverse",
    "DECAY_TOL",
]

DECAY_TOL = 1e-12
_PFAFF_V_MAX = 0.9
_PFAFF_GROWTH_MAX = 8.0
_CAUCHY_TRIGGER = 0.25
_CAUCHY_RADIUS = 0.5
_CAUCHY_NODES = 48
_BLOCK = 8192
SMALL_LAMBDA = 0.1    # below this the odd kernel part avoids dividing by lambda
_SMALL_X = 1e-8


class TruncationError(ValueError):
    """A sampled function does not decay enough at the ends of its grid."""


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi-Dunkl parameters with ``alpha > -1/2``, ``beta >= -1/2``, ``alpha > beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (a > -0.5 and b >= -0.5 and a > b):
            raise ValueError(
                f"inadmissible Jacobi parameters alpha={a}, beta={b}: "
                "need alpha > -1/2, beta >= -1/2, alpha > beta")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    def shifted(self) -> "JacobiParams":
        """Parameters ``(alpha+1, beta+1)``."""
        return JacobiParams(self.alpha + 1.0, self.beta + 1.0)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on an increasing real grid.

    ``weights`` are the quadrature weights of the grid when it came from a
    quadrature rule; transforms need them. ``symmetry`` is ``"even"``,
    ``"odd"`` or ``None`` and is checked on construction.
    """

    grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray | None = None
    symmetry: str | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or values.shape != grid.shape:
            raise ValueError("grid and values must be 1-D and of equal length")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        weights = None if self.weights is None else np.asarray(self.weights, dtype=float)
        if weights is not None and weights.shape != grid.shape:
            raise ValueError("weights must match the grid")
        if self.symmetry not in (None, "even", "odd"):
            raise ValueError(f"unknown symmetry tag {self.symmetry!r}")
        if self.symmetry is not None:
            if not np.allclose(grid, -grid[::-1], rtol=0, atol=1e-12):
                raise ValueError("symmetry tag needs a grid symmetric about 0")
            sign = 1.0 if self.symmetry == "even" else -1.0
            if np.max(np.abs(values - sign * values[::-1]), initial=0.0) > 1e-10:
                raise ValueError(f"samples are not {self.symmetry}")
        for name, val in (("grid", grid), ("values", values), ("weights", weights)):
            if val is not None:
                val.setflags(write=False)
            object.__setattr__(self, name, val)

    @classmethod
    def from_callable(cls, func: Callable, grid, weights=None, symmetry=None):
        grid = np.asarray(grid, dtype=float)
        return cls(grid, np.asarray(func(grid), dtype=complex) * np.ones_like(grid), weights, symmetry)

    def with_values(self, values, symmetry=None) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.weights, symmetry)

    def __len__(self):
        return self.grid.size


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Discretised spectral measure on ``|epsilon| >= rho``.

    ``epsilon_nodes`` and ``mu_nodes`` satisfy ``mu = sqrt(epsilon**2 - rho**2)``;
    ``weights`` already contain the density, the Jacobian ``|d epsilon / d mu|``
    and the calibration constant. ``base_weights`` omit the constant.
    """

    epsilon_nodes: np.ndarray
    mu_nodes: np.ndarray
    weights: np.ndarray
    rho: float
    constant: float = 1.0
    base_weights: np.ndarray | None = None

    def __post_init__(self):
        eps = np.asarray(self.epsilon_nodes, float)
        mu = np.asarray(self.mu_nodes, float)
        w = np.asarray(self.weights, float)
        if not (eps.shape == mu.shape == w.shape):
            raise ValueError("spectral grid arrays must share a shape")
        if np.any(np.abs(eps) < self.rho * (1 - 1e-14)):
            raise ValueError("spectral nodes must satisfy |epsilon| >= rho")
        if np.any(mu < 0) or np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("mu must be >= 0 and weights positive and finite")
        base = w / self.constant if self.base_weights is None else np.asarray(self.base_weights, float)
        for name, val in (("epsilon_nodes", eps), ("mu_nodes", mu), ("weights", w), ("base_weights", base)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    def __len__(self):
        return self.epsilon_nodes.size


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Transform values at spectral points.

    ``lambdas`` are the transform variable of whichever transform produced
    the values; ``epsilons`` are the matching Jacobi-Dunkl frequencies
    (``epsilon = lambda`` for the plain transform, ``-lambda/c`` for the
    canonical one). ``grid`` is set when the points are the nodes of a
    :class:`SpectralGrid`.
    """

    lambdas: np.ndarray
    values: np.ndarray
    epsilons: np.ndarray | None = None
    grid: SpectralGrid | None = None

    def __post_init__(self):
        lam = np.asarray(self.lambdas, float)
        val = np.asarray(self.values, complex)
        if lam.shape != val.shape:
            raise ValueError("lambdas and values must match")
        eps = lam if self.epsilons is None else np.asarray(self.epsilons, float)
        for name, v in (("lambdas", lam), ("values", val), ("epsilons", eps)):
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    def with_values(self, values) -> "SpectralFunction":
        return SpectralFunction(self.lambdas, values, self.epsilons, self.grid)

    def __len__(self):
        return self.lambdas.size


# --------------------------------------------------------------------------
# weight and operator

def log_weight_A(x, p: JacobiParams):
    x = np.abs(np.asarray(x, dtype=float))
    with np.errstate(divide="ignore"):
        lsinh = np.where(x > 20, x - np.log(2.0) + np.log1p(-np.exp(-2 * x)), np.log(np.sinh(x)))
    lcosh = x - np.log(2.0) + np.log1p(np.exp(-2 * x))
    return 2 * p.rho * np.log(2.0) + (2 * p.alpha + 1) * lsinh + (2 * p.beta + 1) * lcosh


def weight_A(x, p: JacobiParams):
    """``A(x) = 2**(2 rho) sinh(|x|)**(2 alpha + 1) cosh(x)**(2 beta + 1)``.

    Raises :class:`OverflowError` instead of returning ``inf``.
    """
    la = log_weight_A(x, p)
    if np.any(la > 709.0):
        raise OverflowError("weight_A overflows double precision at this |x|")
    return np.exp(la)


def weight_log_derivative(x, p: JacobiParams):
    """``A'(x)/A(x) = (2 alpha + 1) coth|x| sign(x) + (2 beta + 1) tanh x`` for ``x != 0``."""
    x = np.asarray(x, dtype=float)
    return (2 * p.alpha + 1) / np.tanh(x) + (2 * p.beta + 1) * np.tanh(x)


def _central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def jd_operator_apply(f: Callable, x: float, p: JacobiParams, df: Callable | None = None,
                      h: float | None = None) -> complex:
    """Apply the Jacobi-Dunkl operator to ``f`` at a point ``x``.

    For ``x != 0``: ``f'(x) + A'/A(x) (f(x) - f(-x)) / 2``; at ``x = 0``:
    ``(2 alpha + 2) f'(0)``. ``df`` is the analytic derivative; without it a
    central difference with step ``h = 1e-5 max(1, |x|)`` is used.
    """
    x = float(x)
    if h is None:
        h = 1e-5 * max(1.0, abs(x))
    deriv = df if df is not None else (lambda s: _central_diff(f, s, h))
    if x == 0.0:
        return complex((2 * p.alpha + 2) * deriv(0.0))
    if abs(x) < _SMALL_X or (df is None and abs(x) < h):
        raise ValueError(f"|x|={abs(x):.3g} too close to 0 for the x != 0 branch; use x = 0 or shrink h")
    odd = (f(x) - f(-x)) / 2
    return complex(deriv(x) + weight_log_derivative(x, p) * odd)


# --------------------------------------------------------------------------
# Jacobi function

def _lncosh(x):
    ax = np.abs(x)
    return ax - np.log(2.0) + np.log1p(np.exp(-2 * ax))


def _assemble(logP, Lp, dLp, F, Fv, Fvv, dv, d2v, nderiv):
    P = np.exp(logP)
    val = P * F
    if nderiv == 0:
        return (val,)
    d1 = P * (Lp * F + Fv * dv)
    if nderiv == 1:
        return val, d1
    d2 = P * ((Lp * Lp + dLp) * F + 2 * Lp * Fv * dv + Fvv * dv * dv + Fv * d2v)
    return val, d1, d2


def _pfaff(x, mu, p, nderiv):
    rho, c = p.rho, p.alpha + 1
    a = (rho + 1j * mu) / 2
    b = (rho - 1j * mu) / 2
    t = np.tanh(x)
    s2 = 1 / np.cosh(x) ** 2
    v = t * t
    series = hyp2f1_series(a, c - b, c, v, nderiv=max(nderiv, 0))
    series = series + (None,) * (3 - len(series))
    return _assemble(-2 * a * _lncosh(x), -2 * a * t, -2 * a * s2, *series,
                     2 * t * s2, 2 * s2 * (s2 - 2 * v), nderiv)


def _at_pole(z):
    return (z.real < 0.5) & (np.abs(z - np.round(z.real)) < 1e-10)


def _connection(x, mu, p, nderiv):
    rho, c = p.rho, p.alpha + 1
    a = (rho + 1j * mu) / 2
    b = (rho - 1j * mu) / 2
    t = np.tanh(x)
    s2 = 1 / np.cosh(x) ** 2
    du = -2 * s2 * t
    d2u = 4 * s2 * t * t - 2 * s2 * s2
    lnch = _lncosh(x)
    lg_c = ln_gamma(np.full(np.shape(a), c, dtype=complex))
    total = None
    for s, o in ((a, b), (b, a)):
        # 1/Gamma vanishes at non-positive integers: that term drops out
        dead = _at_pole(o) | _at_pole(c - s)
        K = (lg_c + ln_gamma(o - s) - ln_gamma(np.where(dead, 1.0, o))
             - ln_gamma(np.where(dead, 1.0, c - s)))
        series = hyp2f1_series(s, c - o, s - o + 1, s2, nderiv=nderiv)
        series = series + (None,) * (3 - len(series))
        part = _assemble(K - 2 * s * lnch, -2 * s * t, -2 * s * s2, *series, du, d2u, nderiv)
        part = tuple(np.where(dead, 0.0, q) for q in part)
        total = part if total is None else tuple(u + w for u, w in zip(total, part))
    return total


def _connection_safe(x, mu, p, nderiv):
    centre = 1j * np.round(mu.imag)
    near = np.abs(mu - centre) < _CAUCHY_TRIGGER
    out = [np.empty(x.shape, complex) for _ in range(nderiv + 1)]
    far = ~near
    if np.any(far):
        for o, v in zip(out, _connection(x[far], mu[far], p, nderiv)):
            o[far] = v
    if np.any(near):
        theta = 2 * np.pi * (np.arange(_CAUCHY_NODES) + 0.5) / _CAUCHY_NODES
        ring = _CAUCHY_RADIUS * np.exp(1j * theta)
        xs = np.repeat(x[near][:, None], _CAUCHY_NODES, axis=1)
        nodes = centre[near][:, None] + ring[None, :]
        vals = _connection(xs.ravel(), nodes.ravel(), p, nderiv)
        kern = ring[None, :] / (nodes - mu[near][:, None]) / _CAUCHY_NODES
        for o, v in zip(out, vals):
            o[near] = np.sum(v.reshape(nodes.shape) * kern, axis=1)
    return tuple(out)


def jacobi_phi_derivs(x, mu, p: JacobiParams, nderiv: int = 2):
    """Return ``(phi, phi', phi'')`` (first ``nderiv+1`` of them) at broadcast ``x, mu``."""
    x, mu = np.broadcast_arrays(np.asarray(x, float), np.asarray(mu, complex))
    shape = x.shape
    x = x.ravel()
    mu = mu.ravel()
    if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(x))):
        raise ValueError("non-finite x or mu (|lambda/c| overflowed?)")
    out = [np.empty(x.shape, complex) for _ in range(nderiv + 1)]
    # blocks bound the memory of the Cauchy route (48 evaluations per point)
    for lo in range(0, x.size, _BLOCK):
        xb, mb = x[lo:lo + _BLOCK], mu[lo:lo + _BLOCK]
        t = np.abs(np.tanh(xb))
        use_pfaff = (t * t <= _PFAFF_V_MAX) & (np.abs(mb) * t <= _PFAFF_GROWTH_MAX)
        for mask, fn in ((use_pfaff, _pfaff), (~use_pfaff, _connection_safe)):
            if np.any(mask):
                idx = lo + np.flatnonzero(mask)
                for o, v in zip(out, fn(xb[mask], mb[mask], p, nderiv)):
                    o[idx] = v
    return tuple(o.reshape(shape) for o in out)


def _scalarize(v):
    return v[()] if np.ndim(v) == 0 else v


def jacobi_phi(x, mu, p: JacobiParams):
    """Jacobi function ``2F1((rho+i mu)/2, (rho-i mu)/2; alpha+1; -sinh(x)**2)``."""
    return _scalarize(jacobi_phi_derivs(x, mu, p, 0)[0])


def jacobi_phi_dx(x, mu, p: JacobiParams):
    return _scalarize(jacobi_phi_derivs(x, mu, p, 1)[1])


def jacobi_phi_dxx(x, mu, p: JacobiParams):
    return _scalarize(jacobi_phi_derivs(x, mu, p, 2)[2])


# --------------------------------------------------------------------------
# kernel

def mu_from_lambda(lam, rho):
    """Principal ``sqrt(lambda**2 - rho**2)``; imaginary for ``|lambda| < rho``."""
    lam = np.asarray(lam, dtype=complex)
    return np.sqrt(lam * lam - rho * rho)


def _kernel_parts(x, lam, p, nderiv):
    x, lam = np.broadcast_arrays(np.asarray(x, float), np.asarray(lam, float))
    zero = lam == 0
    safe = np.where(zero, 1.0, lam)
    derivs = jacobi_phi_derivs(x, mu_from_lambda(safe, p.rho), p, nderiv + 1)
    return zero, safe, derivs


def _small_lambda_odd(x, lam, p, nderiv):
    """``-(i/lam) phi'`` (and its x-derivative) without dividing by ``lam``.

    Uses ``phi_mu' = -(lam**2 / (4 (alpha+1))) sinh(2x) phi_mu^(alpha+1, beta+1)``,
    valid since ``mu**2 + rho**2 = lam**2``.
    """
    g = jacobi_phi_derivs(x, mu_from_lambda(lam, p.rho), p.shifted(), nderiv)
    k = 1j * lam / (4 * (p.alpha + 1))
    odd = k * np.sinh(2 * x) * g[0]
    if nderiv == 0:
        return (odd,)
    return odd, k * (2 * np.cosh(2 * x) * g[0] + np.sinh(2 * x) * g[1])


def jd_kernel(x, lam, p: JacobiParams):
    """Jacobi-Dunkl kernel ``phi_mu(x) - (i/lambda) phi_mu'(x)``, ``1`` at ``lambda = 0``."""
    zero, safe, (phi, dphi) = _kernel_parts(x, lam, p, 0)
    with np.errstate(over="ignore", invalid="ignore"):  # small-lambda entries are replaced below
        out = np.where(zero, 1.0 + 0j, phi - 1j / safe * dphi)
    small = ~zero & (np.abs(safe) < SMALL_LAMBDA)
    if np.any(small):
        xs = np.broadcast_to(np.asarray(x, float), out.shape)[small]
        out[small] = phi[small] + _small_lambda_odd(xs, safe[small], p, 0)[0]
    return _scalarize(out)


def jd_kernel_dx(x, lam, p: JacobiParams):
    """x-derivative of :func:`jd_kernel`, from ``phi'`` and ``phi''``."""
    zero, safe, (_, dphi, d2phi) = _kernel_parts(x, lam, p, 1)
    with np.errstate(over="ignore", invalid="ignore"):  # small-lambda entries are replaced below
        out = np.where(zero, 0j, dphi - 1j / safe * d2phi)
    small = ~zero & (np.abs(safe) < SMALL_LAMBDA)
    if np.any(small):
        xs = np.broadcast_to(np.asarray(x, float), out.shape)[small]
        out[small] = dphi[small] + _small_lambda_odd(xs, safe[small], p, 1)[1]
    return _scalarize(out)


def _mu_of_eps(eps, rho):
    # real mu on |eps| >= rho, imaginary below; 0 at eps = 0 (value unused there)
    mu = np.sqrt(np.maximum(eps * eps - rho * rho, 0.0)).astype(complex)
    below = (np.abs(eps) < rho) & (eps != 0)
    mu[below] = 1j * np.sqrt(rho * rho - eps[below] ** 2)
    return mu


@lru_cache(maxsize=16)
def _phi_table(p, axb, mub):
    ax = np.frombuffer(axb, dtype=float)
    mu = np.frombuffer(mub, dtype=complex)
    phi, dphi = jacobi_phi_derivs(ax[:, None], mu[None, :], p, 1)
    phi.setflags(write=False)
    dphi.setflags(write=False)
    return phi, dphi


@lru_cache(maxsize=16)
def _kernel_matrix_cached(p, xb, eb):
    x = np.frombuffer(xb, dtype=float)
    eps = np.frombuffer(eb, dtype=float)
    ax, xinv = np.unique(np.abs(x), return_inverse=True)
    umu, minv = np.unique(_mu_of_eps(eps, p.rho), return_inverse=True)
    phi, dphi = _phi_table(p, ax.tobytes(), umu.tobytes())
    zero = eps == 0
    safe = np.where(zero, 1.0, eps)
    out = phi[xinv][:, minv] - (1j / safe)[None, :] * (dphi[xinv][:, minv] * np.sign(x)[:, None])
    out[:, zero] = 1.0
    small = np.flatnonzero(~zero & (np.abs(eps) < SMALL_LAMBDA))
    if small.size:
        xx, ee = np.meshgrid(x, eps[small], indexing="ij")
        out[:, small] = phi[xinv][:, minv[small]] + _small_lambda_odd(xx, ee, p, 0)[0]
    out.setflags(write=False)
    return out


def jd_kernel_matrix(x, eps, p: JacobiParams):
    """``psi_eps_k(x_j)`` as an ``(len(x), len(eps))`` matrix (cached, read-only).

    ``phi`` and ``phi'`` are tabulated once per distinct ``|x|`` and ``mu``
    (grids that share ``|x|`` values share the table); the odd part is
    restored through the sign of ``x``.
    """
    x = np.ascontiguousarray(x, dtype=float)
    eps = np.ascontiguousarray(eps, dtype=float)
    return _kernel_matrix_cached(p, x.tobytes(), eps.tobytes())


def jd_eigen_residual(x, lam, p: JacobiParams) -> float:
    """``|Lambda psi - i lambda psi| / max(1, |psi|)`` at ``x != 0``, analytic derivatives."""
    if x == 0:
        raise ValueError("the residual is defined for x != 0")
    psi = lambda s: jd_kernel(s, lam, p)
    dpsi = lambda s: jd_kernel_dx(s, lam, p)
    lhs = jd_operator_apply(psi, x, p, df=dpsi)
    val = psi(x)
    return float(abs(lhs - 1j * lam * val) / max(1.0, abs(val)))


# --------------------------------------------------------------------------
# spectral measure

def c_function(mu, p: JacobiParams):
    """Harish-Chandra c-function ``c(mu)`` of the Jacobi transform."""
    mu = np.asarray(mu, dtype=complex)
    im = 1j * mu
    logc = ((p.rho - im) * np.log(2.0) + ln_gamma(np.full(mu.shape, p.alpha + 1, complex))
            + ln_gamma(im) - ln_gamma((p.rho + im) / 2) - ln_gamma((p.alpha - p.beta + 1 + im) / 2))
    return _scalarize(np.exp(logc))


def inverse_c_squared(mu, p: JacobiParams):
    """``|c(mu)|**-2`` for real ``mu > 0``."""
    return _scalarize(1.0 / np.abs(c_function(mu, p)) ** 2)


def spectral_density(epsilon, p: JacobiParams):
    """Plancherel density with respect to ``d epsilon`` on ``|epsilon| > rho``.

    ``|eps| / (8 pi sqrt(eps**2 - rho**2) |c(sqrt(eps**2 - rho**2))|**2)``.
    """
    eps = np.asarray(epsilon, dtype=float)
    if np.any(np.abs(eps) <= p.rho):
        raise ValueError("spectral_density is supported on |epsilon| > rho only")
    mu = np.sqrt(eps * eps - p.rho ** 2)
    return _scalarize(np.abs(eps) / (8 * np.pi * mu) * inverse_c_squared(mu, p))


# --------------------------------------------------------------------------
# transforms

def check_decay(f: SampledFunction, p: JacobiParams, tol: float = DECAY_TOL):
    """Raise :class:`TruncationError` unless ``|f| A < tol`` at both grid ends."""
    ends = np.array([f.grid[0], f.grid[-1]])
    tail = np.abs(f.values[[0, -1]]) * weight_A(ends, p)
    if np.any(tail >= tol):
        raise TruncationError(
            f"|f| A = {tail.max():.3g} at the grid ends (needs < {tol:g}); widen the grid")


def _require_weights(f: SampledFunction):
    if f.weights is None:
        raise ValueError("transform needs quadrature weights on the sampled function")
    return f.weights


def jd_transform(f: SampledFunction, lambdas, p: JacobiParams, check: bool = True) -> SpectralFunction:
    """Jacobi-Dunkl transform ``int f(x) psi_lambda(x) A(x) dx`` by quadrature."""
    w = _require_weights(f)
    if check:
        check_decay(f, p)
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    K = jd_kernel_matrix(f.grid, lam, p)
    vals = (f.values * w * weight_A(f.grid, p)) @ K
    return SpectralFunction(lam, vals)


def jd_inverse(F: SpectralFunction, xs, sg: SpectralGrid, p: JacobiParams) -> SampledFunction:
    """``sum_k F(eps_k) conj(psi_eps_k(x)) sigma_k`` over the nodes of ``sg``."""
    eps = F.epsilons
    if eps.shape != sg.epsilon_nodes.shape or not np.array_equal(eps, sg.epsilon_nodes):
        raise ValueError("spectral function is not sampled on this spectral grid")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    K = jd_kernel_matrix(xs, eps, p)
    vals = np.conj(K) @ (F.values * sg.weights)
    return SampledFunction(xs, vals)
