import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratwitten.cone_spectrum import (
    LinkPair,
    LinkSpectrum,
    assemble_cone_spectrum,
    cone_kernel_dims,
    type12_ladders,
    type345_ladders,
    theta_constants,
)
from stratwitten.errors import DegreeRangeError
from stratwitten.fd_oracle import Grid, check_cone
from stratwitten.model_complexes import Ibc, Sign
from stratwitten.spheres import load_sphere

S0 = LinkSpectrum(0, (2,), (2,), ())


def bases(ladders):
    return [(l.degree, l.base, l.provenance) for l in ladders]


@pytest.mark.parametrize(
    "r,n,ibc,expected",
    [
        (0, 1, Ibc.MAX, [(0, 0.0, "T12a0"), (1, 4.0, "T12a1")]),
        (0, 1, Ibc.MIN, [(0, 2.0, "T12aTop"), (1, 2.0, "T12aSide")]),
        (0, 2, Ibc.MIN, [(0, 0.0, "T12a0"), (1, 4.0, "T12a1")]),
        (0, 2, Ibc.MAX, [(0, 0.0, "T12a0"), (1, 4.0, "T12a1")]),
    ],
)
def test_type12_examples(r, n, ibc, expected):
    assert bases(type12_ladders(r, 1, n, Sign.PLUS, ibc)) == expected


def test_type12_odd_n_selection():
    # n = 5: E1 at r = 1, E2 at r = 3, ibc decides at r = 2
    assert bases(type12_ladders(1, 1, 5, Sign.PLUS, Ibc.MIN))[0][2] == "T12a0"
    assert bases(type12_ladders(3, 1, 5, Sign.PLUS, Ibc.MAX))[0][2] == "T12aTop"
    assert bases(type12_ladders(2, 1, 5, Sign.PLUS, Ibc.MIN))[0][2] == "T12aTop"
    assert bases(type12_ladders(2, 1, 5, Sign.PLUS, Ibc.MAX))[0][2] == "T12a0"


def test_type12_range():
    with pytest.raises(DegreeRangeError):
        type12_ladders(3, 1, 3, Sign.PLUS, Ibc.MAX)
    assert type12_ladders(0, 0, 3, Sign.PLUS, Ibc.MAX) == []


@pytest.mark.parametrize(
    "n,r,mu,c,a",
    [(2, 1, 1.0, 1.0, 1.0), (3, 1, 2.0, (-1 + math.sqrt(17)) / 4, (-1 + math.sqrt(17)) / 2)],
)
def test_theta_examples(n, r, mu, c, a):
    got = theta_constants(n, r, mu)
    assert got == pytest.approx((c, a, a + 2), rel=1e-14)


@given(st.integers(1, 12), st.integers(-12, 12), st.floats(1e-6, 1e6))
def test_theta_identities(n, r, mu):
    c, a, b = theta_constants(n, r, mu)
    D = n - 2 * r
    assert c > 0 and b == a + 2.0
    assert abs(mu * c * c + D * c - mu) <= 1e-12 * max(1.0, mu * c * c, abs(D * c), mu)
    with mpmath.workdps(60):
        root = mpmath.sqrt(D * D + 4 * mpmath.mpf(mu) ** 2)
        c_plus, c_minus = (-D + root) / (2 * mu), (-D - root) / (2 * mu)
        assert c == pytest.approx(float(c_plus), rel=1e-13)
        assert float(c * c_minus) == pytest.approx(-1.0, rel=1e-13)


def test_theta_large_mu_and_small_mu_stable():
    c, a, _ = theta_constants(3, 1, 50.0)
    assert a == pytest.approx(2 * 2500 / (1 + math.sqrt(1 + 1e4)), rel=1e-15)
    # with n - 2r > 0 and tiny mu the naive formula cancels completely
    c, a, _ = theta_constants(10, 1, 1e-9)
    assert a == pytest.approx(1e-18 / 8, rel=1e-12)


def test_type345_example():
    t3, t4, x, y = type345_ladders(1.0, 1, 1, 2, Sign.PLUS)
    assert [(l.degree, l.base) for l in (t3, t4, x, y)] == [(0, 2.0), (2, 6.0), (1, 2.0), (1, 6.0)]
    assert y.expr == "4k+4+sqrt(4)"


@given(st.integers(2, 8), st.data(), st.floats(1e-3, 30), st.sampled_from(list(Sign)))
def test_pair_bases_positive(n, data, mu, sign):
    r = data.draw(st.integers(1, n - 1))
    for lad in type345_ladders(mu, r, 1, n, sign):
        assert lad.base > 0


def test_minus_pairing_swaps_partners():
    # type 3 matches X only for Plus; for Minus it matches Y
    t3, t4, x, y = type345_ladders(1.3, 1, 1, 4, Sign.MINUS)
    assert t3.values(60).tolist() != x.values(60).tolist()
    assert t3.values(60).tolist() == y.values(60).tolist()
    assert t4.values(60).tolist() == x.values(60).tolist()


def test_s0_cone():
    sp = assemble_cone_spectrum(S0, Sign.PLUS, Ibc.MAX, 1.0, 10.0)
    assert sp.per_degree == {0: [(0.0, 2), (4.0, 2), (8.0, 2)], 1: [(4.0, 2), (8.0, 2)]}
    assert sp.kernel_dims == [2, 0]


def test_s1_cone():
    sp = assemble_cone_spectrum(load_sphere(1), Sign.PLUS, Ibc.MAX, 1.0, 10.0)
    assert sp.per_degree[0] == [(0.0, 1), (2.0, 2), (4.0, 3), (6.0, 4), (8.0, 5)]
    assert sp.kernel_dims == [1, 0, 0]


def test_empty_cutoff():
    sp = assemble_cone_spectrum(load_sphere(1), Sign.PLUS, Ibc.MAX, 1.0, 0.0)
    assert all(v == [] for v in sp.per_degree.values())
    assert sp.kernel_dims == [0, 0, 0]


def test_cutoff_is_strict():
    sp = assemble_cone_spectrum(S0, Sign.PLUS, Ibc.MAX, 1.0, 8.0)
    assert sp.per_degree[0] == [(0.0, 2), (4.0, 2)]


@pytest.mark.parametrize(
    "betti,n,sign,ibc,expected",
    [
        ((1, 1), 2, Sign.PLUS, Ibc.MAX, [1, 0, 0]),
        ((2,), 1, Sign.PLUS, Ibc.MIN, [0, 0]),
        ((2,), 1, Sign.PLUS, Ibc.MAX, [2, 0]),
        ((1, 1), 2, Sign.MINUS, Ibc.MAX, [0, 0, 1]),
        ((1, 0, 1), 3, Sign.MINUS, Ibc.MIN, [0, 0, 0, 1]),
    ],
)
def test_cone_kernel_dims(betti, n, sign, ibc, expected):
    assert cone_kernel_dims(betti, n, sign, ibc) == expected


def _random_link(rng, n):
    hmin = tuple(int(v) for v in rng.integers(0, 3, n))
    hmax = tuple(int(v) for v in rng.integers(0, 3, n))
    pairs = tuple(LinkPair(float(rng.uniform(0.1, 4)), int(rng.integers(1, n)), int(rng.integers(1, 3))) for _ in range(3)) if n > 1 else ()
    return LinkSpectrum(n - 1, hmin, hmax, pairs)


@pytest.mark.parametrize("seed", range(10))
def test_assembly_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    link = _random_link(rng, n)
    for sign in Sign:
        for ibc in Ibc:
            sp = assemble_cone_spectrum(link, sign, ibc, 1.0, 40.0)
            assert sp.kernel_dims == cone_kernel_dims(link.harmonic(ibc), n, sign, ibc)
            for d, rows in sp.per_degree.items():
                vals = [v for v, _ in rows]
                assert vals == sorted(vals) and len(set(vals)) == len(vals)
                assert sp.kernel_dims[d] == sum(m for v, m in rows if v == 0)
            scaled = assemble_cone_spectrum(link, sign, ibc, 2.5, 40.0)
            for d in sp.per_degree:
                np.testing.assert_allclose(
                    [v * 2.5 for v, _ in sp.per_degree[d]], [v for v, _ in scaled.per_degree[d]], rtol=1e-14
                )
            # supersymmetry: the alternating count of nonzero eigenvalues below
            # a level inside the complete range vanishes degree by degree
            for lam in (11.0, 23.0):
                counts = [sum(m for v, m in sp.per_degree[d] if 0 < v < lam) for d in sorted(sp.per_degree)]
                assert sum((-1) ** d * c for d, c in enumerate(counts)) == 0


def test_min_max_comparability():
    # n odd with a harmonic class at r = (n-1)/2: the assemblies differ
    link = LinkSpectrum(2, (1, 1, 1), (1, 1, 1), ())
    a = assemble_cone_spectrum(link, Sign.PLUS, Ibc.MIN, 1.0, 30.0)
    b = assemble_cone_spectrum(link, Sign.PLUS, Ibc.MAX, 1.0, 30.0)
    assert a.per_degree != b.per_degree
    # n even: they coincide
    link = LinkSpectrum(3, (1, 0, 0, 1), (1, 0, 0, 1), (LinkPair(2.0, 2, 1),))
    a = assemble_cone_spectrum(link, Sign.MINUS, Ibc.MIN, 1.0, 30.0)
    b = assemble_cone_spectrum(link, Sign.MINUS, Ibc.MAX, 1.0, 30.0)
    assert a.per_degree == b.per_degree


def test_incomplete_link_data_warns():
    link = LinkSpectrum(1, (1, 1), (1, 1), (LinkPair(1.0, 1, 2),), mu_max=1.0)
    with pytest.warns(RuntimeWarning, match="incomplete"):
        assemble_cone_spectrum(link, Sign.PLUS, Ibc.MAX, 1.0, 10.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assemble_cone_spectrum(link, Sign.PLUS, Ibc.MAX, 1.0, 1.5)


def test_link_validation():
    with pytest.raises(ValueError):
        LinkSpectrum(1, (1, 1), (1, 1), (LinkPair(1.0, 2, 1),))
    with pytest.raises(ValueError):
        LinkPair(0.0, 1, 1)


MATRIX = [(n, r, mu) for n in (1, 2, 3, 4) for r in range(n + 1) for mu in (0.0, 0.5, 1.0, 2.3)]


@pytest.mark.parametrize("n,r,mu", MATRIX)
def test_ladders_against_fd(n, r, mu):
    for sign in Sign:
        for ibc in Ibc:
            for check in check_cone(n, r, mu, sign, ibc, Grid()):
                assert check.ok(0.02), check
