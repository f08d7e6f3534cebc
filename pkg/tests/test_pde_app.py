import numpy as np
import pytest

from lcjdt.canonical import CanonicalMatrix, lc_forward_batch
from lcjdt.pde_app import (
    HeatProblem,
    extend_half_line,
    half_line_relative_l2,
    heat_residual,
    heat_solve,
    nonhom_solve,
    source_23,
    spectral_energy_drift,
    spectral_ode_residual,
)
from lcjdt.spectral import PROBES

h = PROBES["xgauss"]


@pytest.fixture(scope="module")
def homogeneous(ctx):
    prob = HeatProblem(h, ctx, (0.0, 0.49, 0.495, 0.5, 0.505, 0.51, 1.0))
    return prob, heat_solve(prob)


@pytest.fixture(scope="module")
def forced(ctx):
    prob = HeatProblem(h, ctx, (0.0, 0.5, 1.0), source=source_23, steps_per_unit=1000)
    return prob, nonhom_solve(prob)


def test_problem_validation(ctx):
    for kw in ({"times": ()}, {"times": (0.5, 0.2)}, {"times": (-1.0,)}, {"extension": "periodic"},
               {"convention": "sideways"}, {"steps_per_unit": 0}):
        with pytest.raises(ValueError):
            HeatProblem(h, ctx, **kw)
    with pytest.raises(ValueError):
        heat_solve(HeatProblem(h, ctx, source=source_23))


def test_extension_parity(ctx):
    odd = extend_half_line(h, ctx, "odd")
    even = extend_half_line(h, ctx, "even")
    assert np.allclose(odd.values, -odd.values[::-1])
    assert np.allclose(even.values, even.values[::-1])


def test_initial_recovery_and_energy(homogeneous, ctx):
    prob, sol = homogeneous
    assert half_line_relative_l2(sol[0], h, ctx) <= 1e-10
    assert spectral_energy_drift(sol) <= 1e-12


def test_evaluate_matches_slices(homogeneous):
    _, sol = homogeneous
    k = sol.time_index(0.5)
    s = sol[k]
    assert np.allclose(sol.evaluate(s.grid[::50], k), s.values[::50], atol=1e-13)
    with pytest.raises(ValueError):
        sol.time_index(0.3)


def test_residual_converges_with_time_step(homogeneous):
    prob, sol = homogeneous
    # the stencil uses adjacent solved times: +-0.005 here, +-0.01 in `sub`
    coarse = heat_residual(prob, sol, 0.5, 1.0)
    sub = HeatProblem(h, prob.ctx, (0.0, 0.49, 0.5, 0.51, 1.0))
    wide = heat_residual(sub, heat_solve(sub), 0.5, 1.0)
    assert coarse <= 1e-4
    assert wide / coarse >= 3.5            # second-order stencil
    assert heat_residual(prob, sol, 0.5, 1.0, "negative") > 0.1


def test_residual_arguments(homogeneous):
    prob, sol = homogeneous
    with pytest.raises(ValueError):
        heat_residual(prob, sol, 0.0, 1.0)
    with pytest.raises(ValueError):
        heat_residual(prob, sol, 0.5, -1.0)
    with pytest.raises(ValueError):
        heat_residual(prob, sol, 0.5, 1.0, "other")


def test_duhamel_against_closed_form(forced, ctx):
    # the source exp(-x^2) cos t transforms to cos t * G, so per spectral node
    # Z(t) = e^{kt} Z0 + G (sin t - k cos t + k e^{kt}) / (k^2 + 1)
    prob, sol = forced
    x, w = ctx.spatial_grid()
    ghat = lc_forward_batch(x, w, (np.sign(x) * np.exp(-x ** 2))[None, :], ctx)[0]
    k = sol.kappa
    sw = ctx.spectral_grid().weights
    for j, t in enumerate(sol.times):
        exact = np.exp(k * t) * sol.spectra[0].values + ghat * (np.sin(t) - k * np.cos(t) + k * np.exp(k * t)) / (k * k + 1)
        err = np.sqrt(np.sum(np.abs(sol.spectra[j].values - exact) ** 2 * sw) / np.sum(np.abs(exact) ** 2 * sw))
        assert err <= 1e-6


def test_ode_residual_halves(forced, ctx):
    prob, sol = forced
    fine = nonhom_solve(HeatProblem(h, ctx, prob.times, source=source_23, steps_per_unit=2000))
    r1, r2 = spectral_ode_residual(sol), spectral_ode_residual(fine)
    assert r2 <= 1e-4
    assert r1 / r2 >= 2


def test_zero_source_reduces_to_homogeneous(ctx):
    times = (0.0, 0.5, 1.0)
    zero = nonhom_solve(HeatProblem(h, ctx, times, source=lambda x, t: 0 * x * t, steps_per_unit=200))
    ref = heat_solve(HeatProblem(h, ctx, times))
    for a, b in zip(zero, ref):
        assert np.max(np.abs(a.values - b.values)) <= 1e-12


def test_literal_phase_pattern_is_not_a_solution(forced, ctx):
    prob, sol = forced
    lit = nonhom_solve(prob, literal=True)
    assert spectral_ode_residual(lit) > 100 * spectral_ode_residual(sol)
    assert any("literal" in n for n in lit.notes)


def test_jdt_branch_and_even_extension(ctx):
    c0 = ctx.with_matrix(CanonicalMatrix(1.0, 1.0, 0.0, 1.0))
    prob = HeatProblem(PROBES["gauss"], c0, (0.0, 0.245, 0.25, 0.255), extension="even")
    sol = heat_solve(prob)
    assert half_line_relative_l2(sol[0], PROBES["gauss"], c0) <= 1e-10
    assert heat_residual(prob, sol, 0.25, 0.8) <= 1e-3
