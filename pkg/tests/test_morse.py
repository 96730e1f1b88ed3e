import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratwitten.cone_spectrum import assemble_cone_spectrum
from stratwitten.errors import InsufficientDataError
from stratwitten.model_complexes import Ibc, Sign
from stratwitten.morse import counting_function, morse_check, nu_point, nu_total, weyl_fit
from stratwitten.space_model import CriticalPointModel, LinkFactor, local_model_kernel
from stratwitten.spectra import EigLadder, assemble_ladders
from stratwitten.spheres import load_sphere

CIRCLE = LinkFactor(2, (1, 1), (1, 1))


@pytest.mark.parametrize(
    "cp,ibc,expected",
    [
        (CriticalPointModel(0, 0), Ibc.MIN, [1]),
        (CriticalPointModel(1, 1), Ibc.MAX, [0, 1, 0]),
        (CriticalPointModel(0, 0, None, CIRCLE), Ibc.MAX, [0, 0, 1]),
        (CriticalPointModel(0, 0, CIRCLE, None), Ibc.MIN, [1, 0, 0]),
        (CriticalPointModel(0, 0, CIRCLE, CIRCLE), Ibc.MAX, [0, 0, 1, 0, 0]),
    ],
)
def test_nu_examples(cp, ibc, expected):
    assert nu_point(cp, ibc) == expected


def test_nu_odd_minus_factor_min_cutoff():
    # odd n_- = 3 under Min admits r_- >= 1
    torus_link = LinkFactor(3, (1, 2, 1), (1, 2, 1))
    cp = CriticalPointModel(0, 0, None, torus_link)
    assert nu_point(cp, Ibc.MIN) == [0, 0, 2, 1]
    assert nu_point(cp, Ibc.MAX) == [0, 0, 0, 1]
    assert nu_point(cp, Ibc.MIN) == local_model_kernel(cp, Ibc.MIN)


def test_nu_total_pads():
    assert nu_total([CriticalPointModel(0, 0), CriticalPointModel(0, 2)], Ibc.MAX) == [1, 0, 1]


@pytest.mark.parametrize(
    "beta,nu,holds,euler",
    [
        ([1, 0, 1], [1, 0, 1], True, (2, 2)),
        ([1, 0, 1], [1, 1, 2], True, (2, 2)),
        ([2, 0, 0], [1, 0, 0], False, (2, 1)),
    ],
)
def test_morse_check_examples(beta, nu, holds, euler):
    rep = morse_check(beta, nu)
    assert rep.inequalities_hold is holds
    assert (rep.euler_lhs, rep.euler_rhs) == euler


def test_morse_check_flags_degree():
    rep = morse_check([2, 0, 0], [1, 0, 0])
    assert [h for *_, h in rep.partial_sums] == [False, True, False]
    assert "NO" in rep.table()


@given(st.lists(st.integers(0, 5), min_size=1, max_size=8))
def test_morse_check_equality_case(beta):
    rep = morse_check(beta, beta)
    assert rep.all_hold
    assert all(lhs == rhs for _, lhs, rhs, _ in rep.partial_sums)


@given(st.floats(0, 60), st.floats(0, 60))
def test_counting_function_monotone(a, b):
    sp = assemble_cone_spectrum(load_sphere(1), Sign.PLUS, Ibc.MAX, 1.0, 60.0)
    lo, hi = sorted((a, b))
    assert counting_function(sp, lo) <= counting_function(sp, hi)


def test_counting_function_jumps():
    sp = assemble_cone_spectrum(load_sphere(1), Sign.PLUS, Ibc.MAX, 1.0, 10.0)
    # degree 0 has 4 with multiplicity 3, degree 1 has 4 with multiplicity 4
    assert counting_function(sp, 4.0) == 1 + 2 + 2
    assert counting_function(sp, 4.0 + 1e-12) == 1 + 2 + 2 + 3 + 4 + 1


def test_weyl_single_ladder():
    sp = assemble_ladders([EigLadder(0.0, 0, 1, "a")], 1.0, 400.0, 0)
    assert counting_function(sp, 40.0) == math.ceil(40 / 4)
    fit = weyl_fit(sp)
    assert fit.slope == pytest.approx(1.0, abs=0.02)
    assert fit.theta_hat == pytest.approx(1.0, abs=0.02)
    assert fit.c_hat > 0


def test_weyl_cone_over_circle():
    sp = assemble_cone_spectrum(load_sphere(1), Sign.PLUS, Ibc.MAX, 1.0, 200.0)
    fit = weyl_fit(sp)
    assert fit.theta_hat == pytest.approx(0.5, abs=0.1)
    assert fit.c_hat > 0


def test_weyl_insufficient():
    sp = assemble_ladders([EigLadder(0.0, 0, 1, "a")], 1.0, 40.0, 0)
    with pytest.raises(InsufficientDataError):
        weyl_fit(sp)
