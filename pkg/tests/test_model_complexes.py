import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratwitten.errors import InadmissibleDomainError
from stratwitten.fd_oracle import Grid, POperator, check_length_one, discretize_and_solve
from stratwitten.model_complexes import (
    Ibc,
    Sign,
    classify_length_one,
    length_two_blocks,
    spectrum_length_one,
    spectrum_length_two,
)
from stratwitten.spectra import MERGE_RTOL

signs = st.sampled_from(list(Sign))
ibcs = st.sampled_from(list(Ibc))


def nonzero(sp, d):
    return [(v, m) for v, m in sp.per_degree[d] if v != 0]


@pytest.mark.parametrize(
    "kappa,kind,cmin,cmax",
    [
        (0.0, "MinMaxDistinct", "E2", "E1"),
        (2.0, "UniqueIbc", "E1", "E1"),
        (0.5, "UniqueIbc", "E1", "E1"),
        (-0.5, "UniqueIbc", "E2", "E2"),
        (0.4999, "MinMaxDistinct", "E2", "E1"),
    ],
)
def test_classify(kappa, kind, cmin, cmax):
    dc = classify_length_one(kappa)
    assert (dc.kind, dc.core(Ibc.MIN), dc.core(Ibc.MAX)) == (kind, cmin, cmax)


@given(st.floats(-5, 5, allow_nan=False))
def test_classify_changes_only_at_half(kappa):
    expected = "MinMaxDistinct" if abs(kappa) < 0.5 else "UniqueIbc"
    assert classify_length_one(kappa).kind == expected


@pytest.mark.parametrize("ibc,expected", [(Ibc.MAX, [0.0, 4.0, 8.0]), (Ibc.MIN, [2.0, 6.0])])
def test_length_one_degree_zero(ibc, expected):
    sp = spectrum_length_one(0.0, 1.0, Sign.PLUS, ibc, 10.0)
    assert [v for v, _ in sp.per_degree[0]] == expected


@given(st.floats(-3, 3), signs, ibcs, st.floats(5, 60))
def test_length_one_supersymmetry(kappa, sign, ibc, cutoff):
    sp = spectrum_length_one(kappa, 1.0, sign, ibc, cutoff)
    low, high = nonzero(sp, 0), nonzero(sp, 1)
    assert [m for _, m in low] == [m for _, m in high]
    # the two bases come from different exponents, so agree to rounding
    np.testing.assert_allclose([v for v, _ in low], [v for v, _ in high], rtol=MERGE_RTOL)
    assert sum(sp.kernel_dims) <= 1


@given(st.floats(-3, 3), signs, ibcs, st.floats(0.1, 20))
def test_length_one_scales_with_s(kappa, sign, ibc, s):
    one = spectrum_length_one(kappa, 1.0, sign, ibc, 30.0)
    many = spectrum_length_one(kappa, s, sign, ibc, 30.0)
    for d in (0, 1):
        assert [m for _, m in one.per_degree[d]] == [m for _, m in many.per_degree[d]]
        np.testing.assert_allclose([v * s for v, _ in one.per_degree[d]], [v for v, _ in many.per_degree[d]], rtol=1e-14)


def test_length_one_unique_ibc_ignores_request():
    for kappa in (0.5, 1.7, -0.5, -2.0):
        a = spectrum_length_one(kappa, 1.0, Sign.PLUS, Ibc.MIN, 30.0)
        b = spectrum_length_one(kappa, 1.0, Sign.PLUS, Ibc.MAX, 30.0)
        assert a.per_degree == b.per_degree


@pytest.mark.parametrize("kappa", [0.0, 0.3, -0.3, 0.5, -0.7, 2.0])
@pytest.mark.parametrize("sign", list(Sign))
@pytest.mark.parametrize("ibc", list(Ibc))
def test_length_one_against_fd(kappa, sign, ibc):
    for check in check_length_one(kappa, sign, ibc, Grid()):
        assert check.ok(0.01), check


def test_length_two_example():
    sp = spectrum_length_two(0.0, 1.0, 1.0, Sign.PLUS, 10.0)
    assert sp.per_degree[0] == [(1.0, 1), (5.0, 1), (9.0, 1)]
    assert sp.per_degree[1] == [(1.0, 1), (5.0, 2), (9.0, 2)]
    assert sp.per_degree[2] == [(5.0, 1), (9.0, 1)]
    assert sp.kernel_dims == [0, 0, 0]


def test_length_two_degree_zero_against_fd():
    # degree 0 at kappa = 0, c = 1 is H on the a = 1 core shifted by -2s
    fd = discretize_and_solve(POperator(0.0, 0.0, 1.0, 1.0), Grid(), 3)
    np.testing.assert_allclose(np.array(fd) - 2.0, [1.0, 5.0, 9.0], rtol=1e-3)


@given(st.floats(-3, 3).filter(lambda k: abs(k + 0.5) > 1e-3), st.floats(0.05, 20), signs)
def test_length_two_supersymmetry(kappa, c, sign):
    sp = spectrum_length_two(kappa, c, 1.0, sign, 50.0)
    outer = sorted(sp.values(0).tolist() + sp.values(2).tolist())
    middle = sorted(sp.values(1).tolist())
    # every ladder with a member below 40 is complete there since the cutoff is 50
    outer = [v for v in outer if 0 < v < 40]
    middle = [v for v in middle if 0 < v < 40]
    assert len(outer) == len(middle)
    np.testing.assert_allclose(outer, middle, rtol=1e-12)


def test_length_two_blocks_positive_sigma():
    for kappa in (-3.0, -0.7, -0.2, 0.0, 1.5):
        for _, c2, a, _, _ in length_two_blocks(kappa, 0.7, Sign.PLUS):
            assert a * a - a - c2 == pytest.approx(0.0, abs=1e-12)
            assert a > -0.5


def test_length_two_rejects_minus_half():
    with pytest.raises(InadmissibleDomainError):
        spectrum_length_two(-0.5, 1.0, 1.0, Sign.PLUS, 10.0)
