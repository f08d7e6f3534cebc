import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from lcjdt.jd_core import (
    JacobiParams,
    SampledFunction,
    TruncationError,
    c_function,
    check_decay,
    jacobi_phi,
    jacobi_phi_dx,
    jacobi_phi_dxx,
    jd_eigen_residual,
    jd_kernel,
    jd_kernel_dx,
    jd_kernel_matrix,
    jd_operator_apply,
    spectral_density,
    weight_A,
    weight_log_derivative,
)

mp.mp.dps = 30
P = JacobiParams(0.5, -0.5)


def mp_phi(x, mu, a, b):
    rho = a + b + 1
    return complex(mp.hyp2f1((rho + 1j * mu) / 2, (rho - 1j * mu) / 2, a + 1, -mp.sinh(x) ** 2))


# reference values: mpmath hyp2f1 at 30 digits
FROZEN_PHI = [
    (0.7, 1.3, 0.80058478388023236802),
    (2.5, 4.0, -0.022479451421610233704),
    (1.0, 0.5j, 0.88681888397007390866),
    (4.0, 12.0, -0.0023459661425323206463),
    (0.3, 1j, 1.0),
]
FROZEN_PSI = [
    (0.8, 2.0, 0.63898000898732317112 + 0.37748571224419296474j),
    (-1.2, -3.0, -0.05851984950254276169 + 0.19042700662036990249j),
]


@pytest.mark.parametrize("x,mu,ref", FROZEN_PHI)
def test_phi_frozen(x, mu, ref):
    assert abs(jacobi_phi(x, mu, P) - ref) <= 1e-12


@pytest.mark.parametrize("x,lam,ref", FROZEN_PSI)
def test_kernel_frozen(x, lam, ref):
    assert abs(jd_kernel(x, lam, P) - ref) <= 1e-12


def test_phi_other_parameters_frozen():
    assert abs(jacobi_phi(1.1, 2.2, JacobiParams(1.5, 0.2)) - 0.23164337322087383574) <= 1e-12


@given(st.floats(0.01, 6), st.floats(0.05, 30))
def test_phi_closed_form(x, mu):
    # alpha = 1/2, beta = -1/2: phi_mu(x) = sin(mu x) / (mu sinh x)
    ref = np.sin(mu * x) / (mu * np.sinh(x))
    assert abs(jacobi_phi(x, mu, P) - ref) <= 1e-10 * max(1.0, abs(ref))


@pytest.mark.parametrize("a,b", [(0.0, -0.5), (1.5, 0.2), (3.0, 1.0), (-0.25, -0.5)])
@pytest.mark.parametrize("x,mu", [(0.2, 0.7), (1.3, 5.0), (3.0, 2.0), (0.9, 1.0j), (2.0, 1.9j), (1.5, 0.001), (0.6, 15.0)])
def test_phi_matches_mpmath(a, b, x, mu):
    if b >= a:
        pytest.skip("inadmissible")
    p = JacobiParams(a, b)
    ref = mp_phi(x, mu, a, b)
    # relative where phi is not small; absolute floor at the cancellation level
    assert abs(jacobi_phi(x, mu, p) - ref) <= 1e-10 * max(abs(ref), 1e-2)


@pytest.mark.parametrize("mu", [2j, 2.1j, 1.95j + 0.1, 3j])
def test_phi_near_connection_poles(mu):
    # mu in i*Z is where the connection coefficients blow up
    p = JacobiParams(1.5, 0.2)
    for x in (2.0, 3.5):
        ref = mp_phi(x, mu, 1.5, 0.2)
        assert abs(jacobi_phi(x, mu, p) - ref) <= 1e-9 * abs(ref)


@pytest.mark.parametrize("x,mu", [(0.4, 1.1), (2.2, 3.0), (-1.7, 6.0)])
def test_phi_derivatives(x, mu):
    p = JacobiParams(1.5, 0.2)
    f = lambda t: mp.hyp2f1((p.rho + 1j * mu) / 2, (p.rho - 1j * mu) / 2, p.alpha + 1, -mp.sinh(t) ** 2)
    d1 = complex(mp.diff(f, x))
    d2 = complex(mp.diff(f, x, 2))
    assert abs(jacobi_phi_dx(x, mu, p) - d1) <= 1e-10 * max(1, abs(d1))
    assert abs(jacobi_phi_dxx(x, mu, p) - d2) <= 1e-9 * max(1, abs(d2))


def test_phi_at_zero_is_one():
    assert np.allclose(jacobi_phi(0.0, np.array([0.3, 2.0, 1j]), P), 1.0, atol=1e-15)


@given(st.floats(-4, 4), st.floats(1.05, 20), st.sampled_from([-1.0, 1.0]))
def test_kernel_parity(x, lam, s):
    # psi_lambda(-x) = psi_{-lambda}(x)
    lam = s * lam
    assert abs(jd_kernel(-x, lam, P) - jd_kernel(x, -lam, P)) <= 1e-12


@given(st.floats(-4, 4), st.floats(1.0, 20))
def test_kernel_bounded_on_real_spectrum(x, lam):
    assert abs(jd_kernel(x, lam, P)) <= 1 + 1e-9


def test_kernel_at_zero_frequency():
    assert np.all(jd_kernel(np.linspace(-3, 3, 7), 0.0, P) == 1.0)
    assert np.all(jd_kernel_dx(np.linspace(-3, 3, 7), 0.0, P) == 0.0)


@given(st.floats(0.05, 3).map(lambda v: v * np.random.default_rng(0).choice([-1, 1])), st.floats(-12, 12))
def test_eigen_equation(x, lam):
    assert jd_eigen_residual(x, lam, JacobiParams(1.0, 0.25)) <= 1e-9


def test_kernel_dx_against_differences():
    x = np.array([-2.0, -0.3, 0.5, 1.7])
    h = 1e-6
    fd = (jd_kernel(x + h, 2.5, P) - jd_kernel(x - h, 2.5, P)) / (2 * h)
    assert np.allclose(jd_kernel_dx(x, 2.5, P), fd, atol=1e-8)


def test_kernel_matrix_matches_pointwise():
    x = np.array([-3.0, -1.0, 0.0, 0.5, 1.0, 3.0])
    eps = np.array([-4.0, -1.5, 0.0, 0.5, 2.0])
    K = jd_kernel_matrix(x, eps, P)
    assert not K.flags.writeable
    assert np.allclose(K, jd_kernel(x[:, None], eps[None, :], P), atol=1e-14)


def test_weight_log_derivative():
    x = np.array([0.3, 1.0, 4.0])
    h = 1e-6
    fd = (np.log(weight_A(x + h, P)) - np.log(weight_A(x - h, P))) / (2 * h)
    assert np.allclose(weight_log_derivative(x, P), fd, rtol=1e-8)


def test_weight_overflow_is_reported():
    with pytest.raises(OverflowError):
        weight_A(400.0, P)


def test_operator_on_linear_function():
    p = JacobiParams(1.0, 0.25)
    for x in (-1.3, 0.7, 2.0):
        expect = 1 + weight_log_derivative(x, p) * x
        assert abs(jd_operator_apply(lambda s: s, x, p, df=lambda s: 1.0) - expect) <= 1e-13
        assert abs(jd_operator_apply(lambda s: s, x, p) - expect) <= 1e-8
    assert jd_operator_apply(lambda s: s, 0.0, p, df=lambda s: 1.0) == pytest.approx(2 * p.alpha + 2)


def test_operator_kills_constants_and_rejects_tiny_x():
    assert abs(jd_operator_apply(lambda s: 3.0 + 0 * s, 0.8, P)) <= 1e-9
    with pytest.raises(ValueError):
        jd_operator_apply(np.sin, 1e-9, P)


def test_c_function_closed_form():
    mu = np.array([0.5, 1.5, 6.0])
    assert np.allclose(c_function(mu, P), -1j / mu, rtol=1e-13)


def test_c_function_matches_mpmath():
    a, b = 1.5, 0.2
    p = JacobiParams(a, b)
    for mu in (0.3, 2.0, 9.0):
        im = 1j * mu
        ref = complex(2 ** (p.rho - im) * mp.gamma(a + 1) * mp.gamma(im)
                      / (mp.gamma((p.rho + im) / 2) * mp.gamma((a - b + 1 + im) / 2)))
        assert abs(c_function(mu, p) - ref) <= 1e-12 * abs(ref)


def test_spectral_density_support_and_symmetry():
    eps = np.array([1.5, 3.0, 10.0])
    assert np.allclose(spectral_density(eps, P), spectral_density(-eps, P))
    with pytest.raises(ValueError):
        spectral_density(0.5, P)


@pytest.mark.parametrize("a,b", [(-0.5, -0.5), (0.2, 0.3), (0.0, -0.6)])
def test_params_validation(a, b):
    with pytest.raises(ValueError):
        JacobiParams(a, b)


def test_sampled_function_validation():
    x = np.linspace(-1, 1, 5)
    with pytest.raises(ValueError):
        SampledFunction(x[::-1], x)
    with pytest.raises(ValueError):
        SampledFunction(x, x, symmetry="even")
    f = SampledFunction(x, x, symmetry="odd")
    assert not f.values.flags.writeable
    with pytest.raises(ValueError):
        SampledFunction(x, x, weights=np.ones(3))


def test_check_decay():
    x = np.linspace(-3, 3, 11)
    with pytest.raises(TruncationError):
        check_decay(SampledFunction(x, np.exp(-x ** 2)), P)
    x = np.linspace(-12, 12, 11)
    check_decay(SampledFunction(x, np.exp(-x ** 2)), P)
