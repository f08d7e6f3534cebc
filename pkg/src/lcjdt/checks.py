"""The full verification suite, one function per property group.

Each ``check_*`` function takes an :class:`~lcjdt.canonical.LcjdtContext`
and returns a :class:`~lcjdt.report.CheckReport`. :func:`run_suite` runs
them all with per-check isolation: an exception inside one group becomes a
failed entry and the remaining groups still run.
"""
from __future__ import annotations

import math
import traceback

import numpy as np

from . import canonical as lc
from .jd_core import JacobiParams, jd_eigen_residual, jd_kernel, jd_transform, weight_A
from .pde_app import (
    HeatProblem,
    half_line_relative_l2,
    heat_residual_report,
    heat_solve,
    nonhom_solve,
    source_23,
    spectral_energy_drift,
    spectral_ode_residual,
)
from .report import CheckReport
from .specfun import gauss_2f1, ln_gamma
from .spectral import FAMILIES, PROBES, SpatialGridSpec, SpectralGridSpec, calibrate, suggest_half_width

__all__ = ["SUITE", "CAVEATS", "run_suite"] + [
    "check_special_functions", "check_eigen", "check_intertwining", "check_reduction",
    "check_boundedness", "check_weight_asymptotics", "check_parseval", "check_inversion",
    "check_linearity_derivative_paths", "check_convolution", "check_even_odd",
    "check_uncertainty", "check_heat", "check_nonhomogeneous",
]

CAVEATS = (
    "The normalisation of the spectral measure is not stated by the source theory; the analytic "
    "c-function density is used and one global constant is calibrated by Parseval (reported).",
    "The kernel bound |Psi| <= 1 is asserted only for |lambda/c| >= rho; below that the Jacobi "
    "function has imaginary mu and the bound is not claimed.",
    "The convolution is defined operationally as L^-1(L f . L r); the x-domain weight formula "
    "depends on lambda and divides by A(x) (zero at x = 0), so it is run as a diagnostic only.",
    "The evolution operator written as an adjoint is implemented as the operator whose bilinear "
    "transpose is -Lambda^M; the literal -Lambda^M residual is reported alongside.",
    "The even/odd splitting identity involves operators that are not defined term by term; it is "
    "tested end to end with coefficient i eps / (8 (alpha+1)), eps = -lambda/c.",
    "The uncertainty inequality's constant K and admissible gamma set are not specified; only "
    "positivity, finiteness and scale invariance of the ratio are asserted.",
)


def check_special_functions(ctx=None) -> CheckReport:
    rep = CheckReport()
    zs = np.array([-100, -10, -1, -0.5, 0.25, 0.5])
    got = gauss_2f1(1, 1, 2, zs)
    exact = -np.log1p(-zs) / zs
    rep.add("2F1(1,1;2;z) against -log(1-z)/z", float(np.max(np.abs(got - exact) / np.abs(exact))), 1e-11)
    re, im = np.meshgrid(np.linspace(0.1, 20, 40), np.linspace(-20, 20, 41))
    z = (re + 1j * im).ravel()
    g0 = np.exp(ln_gamma(z))
    g1 = np.exp(ln_gamma(z + 1))
    rep.add("gamma recurrence Gamma(z+1) = z Gamma(z)", float(np.max(np.abs(g1 - z * g0) / np.abs(g1))), 1e-12)
    return rep


def _eigen_grid(rho):
    xs = np.linspace(0.1, 3.0, 20)
    mags = np.linspace(rho + 0.1, rho + 5.0, 10)
    eps = np.concatenate([-mags[::-1], mags])
    return xs, eps


def check_eigen(ctx) -> CheckReport:
    rep = CheckReport()
    p = ctx.params
    xs, eps = _eigen_grid(p.rho)
    rep.add("Jacobi-Dunkl kernel eigen-equation", max(jd_eigen_residual(x, e, p) for x in xs for e in eps), 1e-7,
            "20x20 grid, analytic derivatives")
    if ctx.jdt_branch:
        rep.skip("canonical kernel eigen-equation", "skipped: JDT branch (c = 0)")
        rep.skip("iterated eigen-relation (k=2)", "skipped: JDT branch (c = 0)")
        return rep
    c = ctx.matrix.c
    res = max(lc.lc_eigen_residual(x, -c * e, ctx, 1) for x in xs for e in eps)
    rep.add("canonical kernel eigen-equation", res, 1e-7, "20x20 grid, analytic derivatives")
    rep.add("iterated eigen-relation (k=2)", lc.lc_eigen_residual(0.8, c * (p.rho + 1), ctx, 2), 1e-5,
            "outer application by central differences")
    return rep


def _random_matrix(rng):
    while True:
        a, b, c = rng.uniform(-2, 2, 3)
        if abs(a) > 0.2 and abs(b) > 0.2:
            return lc.CanonicalMatrix(a, b, c, (1 + b * c) / a)


def check_intertwining(ctx, seed: int = 7) -> CheckReport:
    rng = np.random.default_rng(seed)
    names = list(FAMILIES)
    worst = 0.0
    for _ in range(10):
        f, df = FAMILIES[names[rng.integers(len(names))]]
        x = rng.uniform(0.1, 3.0) * rng.choice([-1.0, 1.0])
        worst = max(worst, lc.intertwining_residual(f, x, ctx.with_matrix(_random_matrix(rng)), df=df))
    rep = CheckReport()
    rep.add("intertwining with the chirp", worst, 1e-9, "10 random (f, x, M), analytic derivatives")
    return rep


def check_reduction(ctx) -> CheckReport:
    f = ctx.sample(PROBES["gauss"])
    rep = lc.reduction_report(ctx, f, np.linspace(-4, 4, 17), np.linspace(-6, 6, 13))
    return rep.extend(lc.rotation_case_report(ctx, np.linspace(-3, 3, 13), np.linspace(-6, 6, 13)))


def check_boundedness(ctx) -> CheckReport:
    rep = CheckReport()
    p = ctx.params
    xs = np.linspace(-5, 5, 200)
    mags = np.linspace(p.rho, p.rho + 10, 25)
    eps = np.concatenate([-mags[::-1], mags])
    lam = ctx.matrix.lam_of(eps)
    val = np.abs(lc.lc_kernel(xs[:, None], lam[None, :], ctx)).max()
    rep.add("kernel bound |Psi| <= 1", float(max(val - 1.0, 0.0)), 1e-9,
            f"max |Psi| = {val:.15f} over 200x50 points with |lambda/c| >= rho")
    low = np.linspace(0.05, 0.95, 5) * p.rho
    below = np.abs(jd_kernel(xs[:, None], low[None, :], p)).max()
    rep.add("kernel modulus for |eps| < rho", float(below), None, "reported only")
    return rep


def check_weight_asymptotics(ctx) -> CheckReport:
    p = ctx.params
    rep = CheckReport()
    xl = np.linspace(15, 25, 101)
    r = weight_A(xl, p) * np.exp(-2 * p.rho * xl)
    rep.add("A(x) exp(-2 rho x) on [15, 25]", float((r.max() - r.min()) / r.mean()), 1e-2)
    xs = np.linspace(1e-4, 1e-3, 101)
    r = weight_A(xs, p) * xs ** (-(2 * p.alpha + 1))
    rep.add("A(x) x^-(2 alpha+1) on [1e-4, 1e-3]", float((r.max() - r.min()) / r.mean()), 1e-2)
    return rep


PARSEVAL_PROBES = {
    "gauss": PROBES["gauss"],
    "cos-gauss": lambda x: np.exp(-(x + 0.5) ** 2) * np.cos(2 * x),
    "poly-halfgauss": lambda x: x * (1 + 0.3 * x) * np.exp(-x ** 2 / 2),
}


def check_parseval(ctx) -> CheckReport:
    rep = CheckReport()
    cal = ctx.calibration()
    rep.add("calibration spread across probes", cal.spread, 5e-3, f"constant {cal.constant:.15g}")
    rep.add("calibrated constant vs analytic normalisation", abs(cal.constant - 1.0), None,
            "density |c(mu)|^-2/(8 pi) in mu; reported")
    other = calibrate(ctx.params, ctx.matrix, (ctx.spatial, ctx.spectral))
    rep.add("calibration constant independent of the matrix", abs(other.constant - cal.constant) / cal.constant,
            max(cal.spread, other.spread, 1e-12) + 1e-12)
    for name, fn in PARSEVAL_PROBES.items():
        f = ctx.sample(fn)
        rep.extend(lc.parseval_report(f, f, ctx, name=f"Parseval identity ({name})"))
    g = ctx.sample(PROBES["gauss"])
    rep.extend(lc.parseval_report(g, g.with_values(1j * g.values), ctx, name="Parseval identity (f, i f)"))
    rep.extend(lc.parseval_report(g, ctx.sample(PROBES["xgauss"]), ctx, tol=None,
                                  name="Parseval identity (even, odd cross term)"))
    return rep


def check_inversion(ctx) -> CheckReport:
    rep = CheckReport()
    p = ctx.params
    for name in ("gauss", "xgauss"):
        f = ctx.sample(PROBES[name])
        back = lc.lc_inverse(lc.lc_forward_grid(f, ctx), f.grid, ctx)
        rep.add(f"round trip ({name})", lc.relative_l2(back, f, p), 1e-3)
    errs = []
    for n in (48, 96):
        c2 = lc.LcjdtContext(p, ctx.matrix, ctx.spatial, SpectralGridSpec(12.0, n))
        f = c2.sample(PROBES["gauss"])
        back = lc.lc_inverse(lc.lc_forward_grid(f, c2), f.grid, c2, check_truncation=False)
        errs.append(lc.relative_l2(back, f, p))
    rep.add("round trip refinement (error ratio, spacing halved)", errs[1] / errs[0], 0.25,
            f"errors {errs[0]:.3e} -> {errs[1]:.3e} (mu_max 12, 48 -> 96 nodes)")
    return rep


def check_linearity_derivative_paths(ctx) -> CheckReport:
    rep = CheckReport()
    p = ctx.params
    f = ctx.sample(PROBES["gauss"])
    g = ctx.sample(PROBES["shifted-gauss"])
    Ff = lc.lc_forward_grid(f, ctx).values
    Fg = lc.lc_forward_grid(g, ctx).values
    Fs = lc.lc_forward_grid(f.with_values(2 * f.values + 3 * g.values), ctx).values
    rep.add("linearity", float(np.max(np.abs(Fs - 2 * Ff - 3 * Fg)) / np.max(np.abs(Fs))), 1e-10)
    lam0 = 1.0 if ctx.jdt_branch else ctx.matrix.c
    fn, dfn = FAMILIES["gauss"]
    der = lc.derivative_transform_report(fn, dfn, [lam0 * (p.rho + 1), 0.0], ctx)
    rep.extend(der)
    lams = np.array([lam0 * (p.rho + 1), -2.5 * lam0, 0.7, 4.0 * lam0])
    m = lc.lc_forward(f, lams, ctx).values
    d = lc.lc_forward(f, lams, ctx, path="direct").values
    big = np.abs(m) > 1e-10
    rep.add("modulation path vs direct path", float(np.max(np.abs(m[big] - d[big]) / np.abs(m[big]))), 1e-8)
    return rep


def check_convolution(ctx) -> CheckReport:
    f = ctx.sample(PROBES["gauss"])
    r = ctx.sample(PROBES["shifted-gauss"])
    rep = lc.convolution_report(f, r, ctx)
    lam = (ctx.rho + 1) * (1.0 if ctx.jdt_branch else ctx.matrix.c)
    rep.extend(lc.convolution_weight_diagnostic(PROBES["gauss"], PROBES["shifted-gauss"], lam, ctx))
    return rep


def check_even_odd(ctx) -> CheckReport:
    mus = [0.5, 1.0, 2.0, 3.5]
    rep = CheckReport()
    rep.extend(lc.even_odd_relation_report(ctx.sample(PROBES["gauss"]), mus, ctx, 1e-3, "even/odd relation (even f)"))
    rep.extend(lc.even_odd_relation_report(ctx.sample(PROBES["xgauss"]), mus, ctx, 1e-3, "even/odd relation (odd f)"))
    mixed = ctx.sample(lambda x: np.exp(-(x - 0.5) ** 2))
    rep.extend(lc.even_odd_relation_report(mixed, mus, ctx, 1e-2, "even/odd relation (mixed f)"))
    return rep


DILATIONS = (0.5, 0.75, 1.0, 1.5, 2.0)


def dilation_context(ctx, s: float):
    """Context whose spatial window contains ``exp(-(s x)**2)`` and its double."""
    fn = lambda x: np.exp(-(s * x) ** 2)
    X = max(ctx.spatial.half_width, suggest_half_width(lambda x: 2 * fn(x), ctx.params, ctx.spatial))
    spatial = SpatialGridSpec(X, ctx.spatial.points_per_unit, ctx.spatial.panel_order)
    return lc.LcjdtContext(ctx.params, ctx.matrix, spatial, ctx.spectral, ctx.use_calibration), fn


def check_uncertainty(ctx, gamma: float = 1.0, m: float = 1.0, n: float = 1.0) -> CheckReport:
    rep = CheckReport()
    ratios, drift = [], 0.0
    for s in DILATIONS:
        c2, fn = dilation_context(ctx, s)
        f = c2.sample(fn)
        r1 = lc.uncertainty_ratio(f, gamma, m, n, c2)
        r2 = lc.uncertainty_ratio(f.with_values(2 * f.values), gamma, m, n, c2)
        ratios.append(r1)
        drift = max(drift, abs(r2 - r1) / r1)
    bad = sum(not (r > 0 and math.isfinite(r)) for r in ratios)
    rep.add("uncertainty ratio: dilations with a non-positive or non-finite value", bad, 0.0,
            "ratios " + ", ".join(f"s={s:g}: {r:.6g}" for s, r in zip(DILATIONS, ratios)))
    rep.add("uncertainty ratio scale invariance", drift, 1e-10)
    rep.add("empirical lower constant (min ratio over dilations)", min(ratios), None, "reported only")
    return rep


def check_heat(ctx) -> CheckReport:
    rep = CheckReport()
    h = PROBES["xgauss"]
    prob = HeatProblem(h, ctx, (0.0, 0.49, 0.5, 0.51, 1.0))
    sol = heat_solve(prob)
    rep.add("homogeneous problem: t=0 recovery", half_line_relative_l2(sol[0], h, ctx), 1e-3)
    rep.add("homogeneous problem: spectral energy drift", spectral_energy_drift(sol), 1e-10)
    rep.extend(heat_residual_report(prob, sol, 0.5, 1.0))
    return rep


def check_nonhomogeneous(ctx) -> CheckReport:
    rep = CheckReport()
    h = PROBES["xgauss"]
    times = (0.0, 0.5, 1.0)
    prob = HeatProblem(h, ctx, times, source=source_23)
    sol = nonhom_solve(prob)
    sample = ctx.rho + np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    sample = np.concatenate([-sample, sample])
    rep.add("source problem: spectral ODE residual", spectral_ode_residual(sol, sample), 1e-4,
            f"{prob.steps_per_unit} steps per unit time, interior nodes")
    zero = nonhom_solve(HeatProblem(h, ctx, times, source=lambda x, t: np.zeros(np.broadcast(x, t).shape)))
    ref = heat_solve(HeatProblem(h, ctx, times))
    diff = max(float(np.max(np.abs(a.values - b.values))) for a, b in zip(zero, ref))
    rep.add("source problem: zero source matches homogeneous solver", diff, 1e-10)
    rep.add("source problem: t=0 recovery", half_line_relative_l2(sol[0], h, ctx), 1e-3)
    return rep


SUITE = (
    ("special-function oracles", check_special_functions),
    ("kernel eigen-equation", check_eigen),
    ("intertwining", check_intertwining),
    ("reduction to the plain transform", check_reduction),
    ("kernel boundedness", check_boundedness),
    ("weight asymptotics", check_weight_asymptotics),
    ("Parseval", check_parseval),
    ("inversion", check_inversion),
    ("linearity, differentiation, forward paths", check_linearity_derivative_paths),
    ("convolution", check_convolution),
    ("even/odd relation", check_even_odd),
    ("uncertainty ratio", check_uncertainty),
    ("homogeneous evolution", check_heat),
    ("evolution with source", check_nonhomogeneous),
)


def run_suite(ctx, groups=None, echo=None) -> dict:
    """Run the suite; returns ``{group: CheckReport}``.

    ``groups`` restricts to a subset of names; ``echo`` is called with each
    finished group name and report (for progress output).
    """
    results = {}
    for name, fn in SUITE:
        if groups is not None and name not in groups:
            continue
        try:
            rep = fn(ctx)
        except Exception as exc:  # isolation: one failure does not stop the suite
            rep = CheckReport()
            rep.fail(name, f"{type(exc).__name__}: {exc}; {traceback.format_exc(limit=1).strip().splitlines()[-1]}")
        results[name] = rep
        if echo is not None:
            echo(name, rep)
    return results
