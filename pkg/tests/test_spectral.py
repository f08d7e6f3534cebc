import numpy as np
import pytest
from scipy import integrate

from lcjdt.jd_core import JacobiParams, TruncationError, inverse_c_squared, jd_inverse, jd_transform
from lcjdt.spectral import (
    PROBES,
    SpatialGridSpec,
    SpectralGridSpec,
    build_spatial_grid,
    build_spectral_grid,
    calibrate,
    default_spatial_spec,
    gauss_legendre_panels,
    spatial_energy,
    spatial_sample,
    spectral_energy,
    suggest_half_width,
)

P = JacobiParams(0.5, -0.5)


def test_panels_exact_for_polynomials():
    x, w = gauss_legendre_panels(-1.0, 3.0, 5, 8)
    for k in range(16):
        exact = (3.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1)
        assert np.sum(w * x ** k) == pytest.approx(exact, rel=1e-13)


def test_spatial_grid_symmetric_and_weighted():
    x, w = build_spatial_grid(SpatialGridSpec(), PROBES["gauss"], P)
    assert np.array_equal(x, -x[::-1])
    assert np.all(np.diff(x) > 0) and np.all(w > 0)
    assert np.sum(w) == pytest.approx(2 * 12.0, rel=1e-14)
    # weighted energy against adaptive quadrature
    f = spatial_sample(PROBES["gauss"], SpatialGridSpec(), P)
    ref = integrate.quad(lambda t: np.exp(-2 * t * t) * 4 * np.sinh(t) ** 2, -12, 12, epsabs=0, epsrel=1e-13)[0]
    assert spatial_energy(f, P) == pytest.approx(ref, rel=1e-12)


def test_tail_check_and_suggestion():
    wide = lambda x: np.exp(-x ** 2 / 20)
    with pytest.raises(TruncationError, match="half_width"):
        build_spatial_grid(SpatialGridSpec(), wide, P)
    X = suggest_half_width(wide, P)
    build_spatial_grid(SpatialGridSpec(X), wide, P)
    assert np.isnan(suggest_half_width(lambda x: np.ones_like(x), P))


def test_default_spec_widens_for_heavy_weights():
    assert default_spatial_spec(P).half_width == 12.0
    assert default_spatial_spec(JacobiParams(1.5, 0.2)).half_width > 12.0


def test_spec_validation():
    with pytest.raises(ValueError):
        SpatialGridSpec(half_width=-1)
    with pytest.raises(ValueError):
        SpatialGridSpec(half_width=0.05, points_per_unit=16, panel_order=4)
    with pytest.raises(ValueError):
        SpectralGridSpec(mu_points=4)


def test_spectral_weights_match_density():
    spec = SpectralGridSpec(mu_max=10.0, mu_points=64)
    sg = build_spectral_grid(spec, P, None)
    pos = sg.epsilon_nodes > 0
    assert np.all(sg.weights > 0) and sg.constant == 1.0
    # sum of weights times a test function against scipy quad in mu
    g = lambda mu: np.exp(-mu ** 2)
    approx = np.sum(sg.weights[pos] * g(sg.mu_nodes[pos]))
    ref = integrate.quad(lambda m: g(m) * inverse_c_squared(m, P) / (8 * np.pi), 0, 10)[0]
    assert approx == pytest.approx(ref, rel=1e-12)
    assert np.array_equal(sg.epsilon_nodes, -sg.epsilon_nodes[::-1])


@pytest.mark.parametrize("params", [JacobiParams(0.5, -0.5), JacobiParams(1.5, 0.2), JacobiParams(0.0, -0.5)])
def test_calibration_matches_analytic_constant(params):
    rec = calibrate(params, None, (default_spatial_spec(params), SpectralGridSpec()))
    assert rec.spread <= 5e-3
    assert abs(rec.constant - 1.0) <= 1e-8
    assert not rec.flagged


def test_plain_transform_parseval_and_inverse():
    sspec = SpatialGridSpec()
    sg = build_spectral_grid(SpectralGridSpec(), P, 1.0)
    f = spatial_sample(PROBES["shifted-gauss"], sspec, P)
    F = jd_transform(f, sg.epsilon_nodes, P)
    assert spectral_energy(F.values, sg) == pytest.approx(spatial_energy(f, P), rel=1e-10)
    back = jd_inverse(F, f.grid[::97], sg, P)
    assert np.allclose(back.values, f.values[::97], atol=1e-10)
