"""Complex log-gamma and the Gauss hypergeometric series.

Everything here is vectorised over numpy broadcasting and free of shared
state. ``hyp2f1_series`` is the workhorse used by the Jacobi-function
evaluator in :mod:`lcjdt.jd_core`; ``gauss_2f1`` is the public entry point
for real arguments ``z <= 0.95``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "SpecialFunctionError",
    "ln_gamma",
    "gauss_2f1",
    "gauss_2f1_dz",
    "hyp2f1_series",
]

Z_MAX_DIRECT = 0.95
SERIES_RTOL = 1e-16
SERIES_CAP = 10_000
POLE_ATOL = 1e-10

# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LN_2PI = 0.5 * np.log(2.0 * np.pi)
_LN_PI = np.log(np.pi)


class SpecialFunctionError(ValueError):
    """Raised on poles, invalid parameters or series non-convergence."""


def _lanczos_lngamma(z):
    # valid for Re z >= 0.5
    zm = z - 1.0
    acc = np.full_like(zm, _LANCZOS_P[0])
    for k in range(1, len(_LANCZOS_P)):
        acc = acc + _LANCZOS_P[k] / (zm + k)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _ln_sinpi_upper(z):
    # log(sin(pi z)) continued analytically through Im z >= 0
    return -np.log(2.0) + 0.5j * np.pi - 1j * np.pi * z + np.log1p(-np.exp(2j * np.pi * z))


def ln_gamma(z):
    """Principal branch of log Gamma for complex ``z``.

    Lanczos approximation on ``Re z >= 1/2``; reflection elsewhere, with the
    log-sine continued through the upper half plane so that the result is
    analytic off the negative real axis. Raises :class:`SpecialFunctionError`
    at the poles ``z = 0, -1, -2, ...``.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    near = np.abs(z - np.round(z.real))
    if np.any((z.real < 0.5) & (near < POLE_ATOL)):
        raise SpecialFunctionError("ln_gamma: pole at non-positive integer")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_lngamma(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        flip = zl.imag < 0
        zu = np.where(flip, np.conj(zl), zl)
        val = _LN_PI - _ln_sinpi_upper(zu) - _lanczos_lngamma(1.0 - zu)
        out[left] = np.where(flip, np.conj(val), val)
    return out[0] if scalar else out


def _check_c(c):
    c = np.asarray(c, dtype=complex)
    nearest = np.minimum(np.round(c.real), 0.0)
    if np.any(np.abs(c - nearest) < POLE_ATOL):
        raise SpecialFunctionError("2F1: c is a non-positive integer")


def hyp2f1_series(a, b, c, v, nderiv=0, cap=SERIES_CAP, rtol=SERIES_RTOL):
    """Sum the Gauss series of 2F1(a, b; c; v) and up to two v-derivatives.

    ``v`` must satisfy ``|v| < 1``; it may be complex. Arguments broadcast.
    Returns a tuple ``(F,)``, ``(F, F_v)`` or ``(F, F_v, F_vv)``.

    Termination: each running sum is stopped once its newest term, inflated
    by the geometric tail factor ``1/(1-|v|)``, falls below ``rtol`` times
    the partial sum on two consecutive terms.
    """
    a, b, c, v = np.broadcast_arrays(*(np.asarray(q, dtype=complex) for q in (a, b, c, v)))
    shape = a.shape
    a, b, c, v = (q.ravel() for q in (a, b, c, v))
    _check_c(c)
    av = np.abs(v)
    if np.any(av >= 1.0):
        raise SpecialFunctionError("2F1 series: |v| must be < 1")
    tail = 1.0 / (1.0 - av)

    n_el = a.size
    sums = [np.ones(n_el, complex)] + [np.zeros(n_el, complex) for _ in range(nderiv)]
    # coef holds d_n = (a)_n (b)_n / ((c)_n n!); vp holds v**(n-k) for k = 0..nderiv
    coef = np.ones(n_el, complex)
    quiet = np.zeros(n_el, int)
    active = np.arange(n_el)
    vpow = [np.ones(n_el, complex) for _ in range(nderiv + 1)]  # v^(n-k), n=0
    for n in range(1, cap + 1):
        ai, bi, ci, vi = a[active], b[active], c[active], v[active]
        coef[active] = coef[active] * (ai + n - 1) * (bi + n - 1) / ((ci + n - 1) * n)
        # update powers: v^(n-k); for n-k == 0 it is 1, for n-k < 0 unused
        for k in range(nderiv + 1):
            if n - k == 0:
                vpow[k][active] = 1.0
            elif n - k > 0:
                vpow[k][active] = vpow[k][active] * vi
        small = np.ones(active.size, bool)
        falling = 1.0
        for k in range(nderiv + 1):
            falling = falling * (n - k + 1) if k > 0 else 1.0
            if n - k < 0:
                continue
            term = falling * coef[active] * vpow[k][active]
            sums[k][active] += term
            small &= np.abs(term) * tail[active] <= rtol * np.abs(sums[k][active])
        quiet[active] = np.where(small, quiet[active] + 1, 0)
        active = active[quiet[active] < 2]
        if active.size == 0:
            break
    else:
        raise SpecialFunctionError(f"2F1 series did not converge in {cap} terms")
    return tuple(s.reshape(shape) for s in sums)


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real ``z <= 0.95``.

    ``0 <= z <= 0.95`` uses the power series directly. ``z < 0`` goes through
    the Pfaff transformation

        2F1(a, b; c; z) = (1 - z)**(-a) 2F1(a, c - b; c; z / (z - 1)),

    whose argument lies in ``[0, 1)``.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z > Z_MAX_DIRECT):
        raise SpecialFunctionError(f"gauss_2f1: z must be <= {Z_MAX_DIRECT}")
    a, b, c, z = np.broadcast_arrays(np.asarray(a, complex), np.asarray(b, complex),
                                     np.asarray(c, complex), z)
    neg = z < 0
    w = np.where(neg, z / (z - 1.0), z)
    b_eff = np.where(neg, c - b, b)
    (F,) = hyp2f1_series(a, b_eff, c, w)
    pref = np.where(neg, np.exp(-a * np.log1p(-z)), 1.0)
    out = pref * F
    return out[()] if out.ndim == 0 else out


def gauss_2f1_dz(a, b, c, z):
    """d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)."""
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    c = np.asarray(c, complex)
    _check_c(c)
    return a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z)
