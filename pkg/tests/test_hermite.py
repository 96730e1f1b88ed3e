import math

import mpmath
import numpy as np
import pytest
import sympy as sym
from hypothesis import given, settings
from hypothesis import strategies as st

from stratwitten.errors import BasisDepthError, InadmissibleDomainError
from stratwitten.hermite import (
    MAX_DEPTH,
    PParams,
    admissible_as,
    chi_eval,
    concentration,
    eigen_residual,
    gram_matrix,
    hermite_basis,
    p_eigenvalue,
)

CASES = [(0.0, 0.0), (1.0, 0.0), (1.5, 1.0), (0.5, 2.0)]


@pytest.mark.parametrize(
    "c1,c2,expected",
    [
        (0.0, 0.0, [(1.0, 1.0), (0.0, 0.0)]),
        (0.0, 2.0, [(2.0, 2.0)]),  # kappa = 2: the root a = -1 has sigma = -1
        (1.5, 1.0, [(-1 + math.sqrt(2), 0.5 + math.sqrt(2))]),
    ],
)
def test_admissible_examples(c1, c2, expected):
    got = admissible_as(c1, c2)
    assert len(got) == len(expected)
    for (a, s), (ea, es) in zip(got, expected):
        assert a == pytest.approx(ea, abs=1e-14)
        assert s == pytest.approx(es, abs=1e-14)


def test_admissible_cone_pair_roots():
    # c1 = (n-2r+1)/2, c2 = mu^2 with n=2, r=1, mu=1: the quadratic has roots
    # a = (-(n-2r) +- sqrt((n-2r)^2 + 4 mu^2))/2 = +-1, but a = -1 sits at sigma = -1/2
    roots = np.roots([1.0, 0.0, -1.0])
    assert sorted(roots) == pytest.approx([-1.0, 1.0])
    assert admissible_as(0.5, 1.0) == [(1.0, 1.5)]


def test_admissible_negative_discriminant():
    assert admissible_as(0.5, -1.0) == []


@given(st.floats(-3, 3), st.floats(-2, 10))
def test_admissible_properties(c1, c2):
    roots = admissible_as(c1, c2)
    sig = [s for _, s in roots]
    assert sig == sorted(sig, reverse=True)
    for a, s in roots:
        assert abs(a * a + (2 * c1 - 1) * a - c2) <= 1e-12 * (1 + abs(c2) + a * a)
        assert s > -0.5
        PParams(1.0, c1, c2, a)  # accepted by the validator


@pytest.mark.parametrize("k,s,sigma,expected", [(0, 1.0, 0.0, 1.0), (2, 3.0, 0.5, 30.0), (0, 1.0, -0.25, 0.5)])
def test_p_eigenvalue_examples(k, s, sigma, expected):
    # pick c1 so that a = 0 is admissible with the requested sigma
    params = PParams(s, sigma, 0.0, 0.0)
    assert p_eigenvalue(k, params) == pytest.approx(expected)


@given(st.integers(0, 50), st.floats(0.01, 100))
def test_ladder_step(k, s):
    params = PParams(s, 0.0, 0.0, 1.0)
    assert p_eigenvalue(k + 1, params) - p_eigenvalue(k, params) == pytest.approx(4 * s, rel=1e-14)


def test_pparams_rejections():
    with pytest.raises(InadmissibleDomainError):
        PParams(1.0, 0.0, 0.0, 0.5)  # not a root
    with pytest.raises(InadmissibleDomainError):
        PParams(1.0, -0.5, 0.0, 0.0)  # sigma = -1/2
    with pytest.raises(ValueError):
        PParams(0.0, 0.0, 0.0, 0.0)
    with pytest.raises(InadmissibleDomainError):
        PParams.from_coefficients(0.0, 2.0, branch=1)


@settings(deadline=None, max_examples=20)
@given(st.floats(-0.45, 4.0), st.floats(0.1, 10.0))
def test_recurrence_matches_closed_form(sigma, s):
    # the weight |x|^{2 sigma} e^{-s x^2} has alpha_k = 0, beta_k = (k/2 + sigma [k odd]) / s
    basis = hermite_basis(sigma, s, 40)
    for k, (alpha, beta) in enumerate(basis.recurrence[1:], start=1):
        assert abs(alpha) < 1e-12
        assert beta == pytest.approx((k / 2 + (sigma if k % 2 else 0.0)) / s, rel=1e-10)


def test_depth_cap():
    with pytest.raises(BasisDepthError):
        hermite_basis(0.0, 1.0, MAX_DEPTH + 1)
    with pytest.raises(BasisDepthError):
        hermite_basis(0.0, 1.0, 4).evaluate(5, 1.0)
    with pytest.raises(InadmissibleDomainError):
        hermite_basis(-0.5, 1.0, 4)


@pytest.mark.parametrize("c1,c2", CASES)
@pytest.mark.parametrize("s", [0.5, 1.0, 7.0])
def test_orthonormality(c1, c2, s):
    for a, _ in admissible_as(c1, c2):
        g = gram_matrix(8, PParams(s, c1, c2, a))
        assert np.max(np.abs(g - np.eye(9))) < 1e-6


def test_polynomial_orthogonality_twelve():
    # orthonormal polynomials on the full line, quadrature from mpmath
    sigma, s = 0.7, 1.3
    basis = hermite_basis(sigma, s, 12)
    polys = [basis.polynomial(k) for k in range(13)]

    def inner(j, k):
        f = lambda x: float(polys[j](x) * polys[k](x)) * abs(x) ** (2 * sigma) * mpmath.exp(-s * x * x)
        return 2 * float(mpmath.quad(f, [0, 2, 5, 12])) if (j + k) % 2 == 0 else 0.0

    for j in range(13):
        for k in range(j, 13):
            assert inner(j, k) == pytest.approx(1.0 if j == k else 0.0, abs=1e-8)


def test_chi0_closed_form():
    params = PParams(1.0, 0.0, 0.0, 0.0)
    rho = np.linspace(0.01, 5, 50)
    np.testing.assert_allclose(chi_eval(0, rho, params), (4 / math.pi) ** 0.25 * np.exp(-(rho**2) / 2), rtol=1e-12)


def _laguerre_oracle(k, c1, c2, a, s):
    """Independent eigenfunction: rho^a L_k^{(sigma - 1/2)}(s rho^2) e^{-s rho^2/2}."""
    rho = sym.Symbol("rho", positive=True)
    sigma = sym.nsimplify(a + c1, [sym.sqrt(2)])
    A = sym.nsimplify(a, [sym.sqrt(2)])
    f = rho**A * sym.assoc_laguerre(k, sigma - sym.Rational(1, 2), s * rho**2) * sym.exp(-s * rho**2 / 2)
    C1, C2 = sym.nsimplify(c1), sym.nsimplify(c2)
    pf = -sym.diff(f, rho, 2) - 2 * C1 / rho * sym.diff(f, rho) + s**2 * rho**2 * f + C2 / rho**2 * f
    lam = (4 * k + 1 + 2 * sigma) * s
    return rho, f, pf - lam * f


@pytest.mark.parametrize("c1,c2", CASES[:3])
@pytest.mark.parametrize("k", [0, 1, 2, 4])
def test_eigenfunctions_against_laguerre_oracle(c1, c2, k):
    for a, sigma in admissible_as(c1, c2):
        params = PParams(1.0, c1, c2, a)
        rho, f, residual = _laguerre_oracle(k, c1, c2, a, 1)
        for x in ("0.2", "1.1", "2.9"):
            scale = abs(f.subs(rho, sym.Float(x, 40)).evalf(40)) + 1
            assert abs(residual.subs(rho, sym.Float(x, 40)).evalf(40)) < 1e-25 * scale
        # chi_k is the normalized oracle up to sign
        fn = sym.lambdify(rho, f, "mpmath")
        norm = math.sqrt(mpmath.quad(lambda x: fn(x) ** 2 * x ** (2 * c1), [0, 1, 4, mpmath.inf]))
        xs = np.array([0.3, 0.9, 1.7, 2.6])
        ref = np.array([float(fn(x)) for x in xs]) / norm
        got = chi_eval(k, xs, params)
        sign = np.sign(got[0] * ref[0])
        np.testing.assert_allclose(got, sign * ref, rtol=1e-9, atol=1e-12)
        assert eigen_residual(k, params) < 1e-6


def test_concentration_examples():
    params = PParams(1.0, 0.0, 0.0, 0.0)
    s_list = [0.5, 1.0, 4.0, 16.0, 64.0]
    assert concentration(lambda x: np.ones_like(x), params, s_list) == pytest.approx([1.0] * 5, abs=1e-10)
    inner = concentration(lambda x: (x < 1).astype(float), params, s_list, breakpoints=[1.0])
    assert inner == pytest.approx([math.erf(math.sqrt(s)) for s in s_list], abs=1e-10)
    outer = concentration(lambda x: (x > 1).astype(float), params, s_list, breakpoints=[1.0])
    assert np.all(np.diff(outer) < 0) and outer[-1] < 1e-20
