import warnings

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from lcjdt import canonical as lc
from lcjdt.jd_core import JacobiParams, TruncationError, jd_kernel
from lcjdt.spectral import FAMILIES, PROBES, SpectralGridSpec

finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def matrices(draw):
    a = draw(st.floats(0.2, 3, **finite)) * draw(st.sampled_from([-1, 1]))
    b = draw(st.floats(0.2, 3, **finite)) * draw(st.sampled_from([-1, 1]))
    mag = draw(st.floats(0.05, 3, **finite))
    c = draw(st.sampled_from([0.0, mag, -mag]))
    return lc.CanonicalMatrix(a, b, c, (1 + b * c) / a)


def test_matrix_validation():
    with pytest.raises(ValueError, match="determinant"):
        lc.CanonicalMatrix(1, 1, 1, 3)
    with pytest.raises(ValueError):
        lc.CanonicalMatrix(1, 0, 0, 1)
    M = lc.CanonicalMatrix.rotation(0.7)
    assert M.a * M.d - M.b * M.c == pytest.approx(1.0, abs=1e-15)
    lam = np.array([-2.0, 0.5, 3.0])
    assert np.allclose(M.lam_of(M.eps_of(lam)), lam)
    assert lc.CanonicalMatrix(1, 1, 0, 1).jdt_branch


@given(M=matrices(), x=st.floats(-4, 4), lam=st.floats(-15, 15))
def test_kernel_modulus_is_chirp_free(M, x, lam, ctx):
    c = ctx.with_matrix(M)
    assert abs(lc.lc_kernel(x, lam, c)) == pytest.approx(abs(jd_kernel(x, M.eps_of(lam), ctx.params)), abs=1e-13)


@given(M=matrices(), lam=st.floats(-15, 15))
def test_kernel_unimodular_at_origin(M, lam, ctx):
    assert abs(lc.lc_kernel(0.0, lam, ctx.with_matrix(M))) == pytest.approx(1.0, abs=1e-14)


def test_jdt_branch_kernel_is_plain(ctx):
    c0 = ctx.with_matrix(lc.CanonicalMatrix(1, 2, 0, 1))
    x = np.linspace(-2, 2, 5)[:, None]
    lam = np.array([-3.0, 0.0, 1.5])[None, :]
    assert np.array_equal(lc.lc_kernel(x, lam, c0), jd_kernel(x, lam, ctx.params))


@given(M=matrices(), fam=st.sampled_from(sorted(FAMILIES)), x=st.floats(0.1, 3), s=st.sampled_from([-1.0, 1.0]))
def test_intertwining(M, fam, x, s, ctx):
    f, df = FAMILIES[fam]
    assert lc.intertwining_residual(f, s * x, ctx.with_matrix(M), df=df) <= 1e-9


@given(M=matrices(), x=st.floats(0.1, 3), mag=st.floats(1.05, 8))
def test_eigen_relation(M, x, mag, ctx):
    assume(not M.jdt_branch)
    lam = -M.c * mag
    assert lc.lc_eigen_residual(x, lam, ctx.with_matrix(M)) <= 1e-7


def test_eigen_relation_rejects_jdt_branch(ctx):
    with pytest.raises(ValueError):
        lc.lc_eigen_residual(1.0, 2.0, ctx.with_matrix(lc.CanonicalMatrix(1, 1, 0, 1)))


@pytest.mark.parametrize("M", [lc.CanonicalMatrix(1, 1, 1, 2), lc.CanonicalMatrix.rotation(2.1),
                               lc.CanonicalMatrix(2, -0.5, 0.0, 0.5), lc.CanonicalMatrix(-1.5, 1, -2, 2 / 3)])
def test_round_trip(M, ctx):
    c = ctx.with_matrix(M)
    for name in ("gauss", "shifted-gauss"):
        f = c.sample(PROBES[name])
        back = lc.lc_inverse(lc.lc_forward_grid(f, c), f.grid, c)
        assert lc.relative_l2(back, f, c.params) <= 1e-10


def test_paths_agree_and_crosscheck_is_quiet(ctx):
    f = ctx.sample(PROBES["shifted-gauss"])
    lam = np.array([-7.0, -1.2, 0.0, 0.3, 2.0, 9.5])
    with warnings.catch_warnings():
        warnings.simplefilter("error", lc.PathDisagreementWarning)
        m = lc.lc_forward(f, lam, ctx, crosscheck=True).values
    d = lc.lc_forward(f, lam, ctx, path="direct").values
    assert np.allclose(m, d, rtol=1e-10, atol=1e-14)
    with pytest.raises(ValueError):
        lc.lc_forward(f, lam, ctx, path="fast")


def test_forward_rejects_slow_decay(ctx):
    f = ctx.sample(lambda s: np.exp(-np.abs(s)), check=False)
    with pytest.raises(TruncationError):
        lc.lc_forward(f, [1.0], ctx)


def test_inverse_flags_spectral_truncation(ctx):
    c = lc.LcjdtContext(ctx.params, ctx.matrix, ctx.spatial, SpectralGridSpec(mu_max=3.0, mu_points=64))
    f = c.sample(PROBES["gauss"])
    with pytest.raises(TruncationError, match="mu_max"):
        lc.lc_inverse(lc.lc_forward_grid(f, c), f.grid, c)


@given(M=matrices())
def test_parseval_polarised(M, ctx):
    # strong chirps push spectral content past mu_max; keep |a/b| resolvable
    assume(abs(M.a / M.b) <= 2)
    c = ctx.with_matrix(M)
    f = c.sample(PROBES["gauss"])
    h = c.sample(lambda x: (1 + 1j * x) * np.exp(-(x - 0.3) ** 2))
    assert lc.parseval_report(f, h, c, tol=1e-8).passed


def test_linearity_and_batch(ctx):
    f = ctx.sample(PROBES["gauss"])
    g = ctx.sample(PROBES["xgauss"])
    F = lc.lc_forward_grid(f, ctx).values
    G = lc.lc_forward_grid(g, ctx).values
    B = lc.lc_forward_batch(f.grid, f.weights, np.vstack([f.values, g.values]), ctx)
    assert np.allclose(B, np.vstack([F, G]), rtol=0, atol=1e-14)
    S = lc.lc_forward_grid(f.with_values(f.values - 2j * g.values), ctx).values
    assert np.max(np.abs(S - (F - 2j * G))) <= 1e-12


@pytest.mark.parametrize("lam", [-3.0, 0.0, 0.5, 2.5])
def test_derivative_identity(lam, ctx):
    f, df = FAMILIES["shifted-gauss"]
    assert lc.derivative_transform_report(f, df, [lam], ctx).passed


def test_convolution_other_matrix(ctx):
    c = ctx.with_matrix(lc.CanonicalMatrix(0.5, 2.0, -0.25, 1.0))
    rep = lc.convolution_report(c.sample(PROBES["gauss"]), c.sample(PROBES["shifted-gauss"]), c)
    assert rep.passed, rep.text()


@pytest.mark.parametrize("M", [lc.CanonicalMatrix(1, 1, 1, 2), lc.CanonicalMatrix(0.5, 1, -2, -2)])
def test_even_odd_relation(M, ctx):
    c = ctx.with_matrix(M)
    f = c.sample(lambda x: np.exp(-(x - 0.5) ** 2))
    assert lc.even_odd_relation_report(f, [0.4, 1.7, 3.0], c, 1e-10).passed


def test_even_odd_relation_other_parameters():
    c = lc.LcjdtContext(JacobiParams(1.5, 0.2), lc.CanonicalMatrix(1, 1, 1, 2))
    f = c.sample(lambda x: np.exp(-(x - 0.5) ** 2))
    assert lc.even_odd_relation_report(f, [0.4, 1.7, 3.0], c, 1e-10).passed


@given(s=st.floats(0.05, 50))
def test_uncertainty_amplitude_invariant(s, ctx):
    f = ctx.sample(PROBES["gauss"])
    r1 = lc.uncertainty_ratio(f, 1.0, 1.0, 1.0, ctx)
    r2 = lc.uncertainty_ratio(f.with_values(s * f.values), 1.0, 1.0, 1.0, ctx)
    assert r1 > 0 and abs(r2 - r1) <= 1e-10 * r1


def test_uncertainty_frozen_and_validation(ctx):
    f = ctx.sample(PROBES["gauss"])
    # regression value at the default grids
    assert lc.uncertainty_ratio(f, 1.0, 1.0, 1.0, ctx) == pytest.approx(1.4070378024830688, rel=1e-10)
    with pytest.raises(ValueError):
        lc.uncertainty_ratio(f, 1.0, 0.0, 1.0, ctx)


def test_reduction_and_rotation(ctx):
    f = ctx.sample(PROBES["xgauss"])
    assert lc.reduction_report(ctx, f, [-1.0, 0.5, 2.0], [-3.0, 0.0, 4.0]).passed
    assert lc.rotation_case_report(ctx, [-1.0, 0.5, 2.0], [-3.0, 0.5, 4.0]).passed
