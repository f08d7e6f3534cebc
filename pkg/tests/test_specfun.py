import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from lcjdt.specfun import SpecialFunctionError, gauss_2f1, gauss_2f1_dz, hyp2f1_series, ln_gamma

mp.mp.dps = 30


@pytest.mark.parametrize("z", [0.3, 2.5, 17.0, 0.5 + 3j, 4 - 12j, -2.5 + 0.1j, -7.3 - 0.4j, 0.01 + 20j])
def test_ln_gamma_matches_mpmath(z):
    ref = complex(mp.loggamma(mp.mpc(z)))
    got = ln_gamma(z)
    # compare exp() to stay branch-agnostic, and the value itself on the principal branch
    assert abs(np.exp(got) - np.exp(ref)) <= 1e-12 * abs(np.exp(ref))
    assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [0, -1, -4])
def test_ln_gamma_poles_raise(z):
    with pytest.raises(SpecialFunctionError):
        ln_gamma(z)


@given(st.floats(0.1, 20), st.floats(-20, 20))
def test_gamma_recurrence(re, im):
    z = complex(re, im)
    lhs = np.exp(ln_gamma(z + 1))
    assert abs(lhs - z * np.exp(ln_gamma(z))) <= 1e-12 * abs(lhs)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.3, 4), st.floats(-20, 0.9))
def test_gauss_2f1_matches_mpmath(a, b, c, z):
    ref = complex(mp.hyp2f1(a, b, c, z))
    got = complex(gauss_2f1(a, b, c, z))
    assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.3, 4), st.floats(-5, 0.9))
def test_gauss_2f1_symmetric_in_a_b(a, b, c, z):
    assert gauss_2f1(a, b, c, z) == pytest.approx(gauss_2f1(b, a, c, z), rel=1e-12, abs=1e-14)


def test_log_closed_form():
    z = np.array([-100, -10, -1, -0.5, 0.25, 0.5])
    exact = -np.log1p(-z) / z
    assert np.max(np.abs(gauss_2f1(1, 1, 2, z) - exact) / exact) <= 1e-11


@pytest.mark.parametrize("a,b,c,z", [(0.5, 1.5, 2.0, -3.0), (1 + 2j, 1 - 2j, 1.5, -0.7), (2.0, -0.3, 0.8, 0.6)])
def test_derivative_against_mpmath(a, b, c, z):
    ref = complex(mp.diff(lambda t: mp.hyp2f1(a, b, c, t), z))
    assert abs(complex(gauss_2f1_dz(a, b, c, z)) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_series_derivatives_consistent():
    F, dF, d2F = hyp2f1_series(0.7, 1.3, 2.1, 0.4, nderiv=2)
    for k, val in ((1, dF), (2, d2F)):
        ref = complex(mp.diff(lambda t: mp.hyp2f1(0.7, 1.3, 2.1, t), 0.4, k))
        assert abs(complex(val) - ref) <= 1e-12 * abs(ref)


def test_terminating_series():
    # (1 - z)**2 = 2F1(-2, 1; 1; z)
    z = np.linspace(-3, 0.9, 9)
    assert np.allclose(gauss_2f1(-2, 1, 1, z).real, (1 - z) ** 2, rtol=1e-14)


def test_domain_errors():
    with pytest.raises(SpecialFunctionError):
        gauss_2f1(1, 1, 2, 0.97)
    with pytest.raises(SpecialFunctionError):
        gauss_2f1(1, 1, -2, 0.2)
    with pytest.raises(SpecialFunctionError):
        hyp2f1_series(1, 1, 2, 1.0)
