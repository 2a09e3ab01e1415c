import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import SEVEN, SIX

from sosgap.certify import (
    ZeroSearchVerdict,
    gradients_span_perp,
    heuristic_zero_search,
    hessian_of_sum_of_squares,
    line_template,
    nonneg_violation_on_line,
    rationalize_common_zero,
    roundness_certificate,
    sos_fulldim_certificate,
    sphere_minimum,
    sum_of_squares,
)
from sosgap.constructions import build_six_point_config, six_points
from sosgap.forms import PARAM, restrict_to_line, variables
from sosgap.ideals import PointSet, vanishing_space


def test_six_point_sos_is_round():
    cfg = build_six_point_config(six_points())
    p = sum_of_squares(cfg.q_forms, 4, 4)
    cert = roundness_certificate(p, six_points())
    assert cert.valid and cert.failing_points() == []


def test_non_round_form():
    x1, x2, x3, x4 = variables(4)
    s = PointSet(4, [(1, 0, 0, 0)])
    cert = roundness_certificate((x1 * x2 - x3 * x4) ** 2, s)
    assert not cert.valid and cert.failing_points() == [(1, 0, 0, 0)]
    assert roundness_certificate(x2**2 + x3**2 + x4**2, s).valid
    with pytest.raises(ValueError):
        roundness_certificate(x1**2, s)


def test_roundness_invariant_under_point_scaling():
    cfg = build_six_point_config(six_points())
    p = sum_of_squares(cfg.q_forms, 4, 4)
    scaled = PointSet(4, [tuple(F(k + 2, 3) * x for x in pt) for k, pt in enumerate(SIX)])
    assert roundness_certificate(p, scaled).valid


def test_hessian_of_sum_of_squares_matches():
    basis = vanishing_space(six_points(), 2).basis
    p = sum_of_squares(basis, 4, 4)
    for pt in SIX:
        assert p.hessian_at(pt) == hessian_of_sum_of_squares(basis, pt)
        assert gradients_span_perp(basis, pt)


def test_fulldim_certificates():
    six = sos_fulldim_certificate(six_points(), 2)
    assert six.status == "certified" and six.full_dimensional_dim == 11
    seven = sos_fulldim_certificate(PointSet(4, SEVEN), 2, budget=2000)
    assert seven.status == "no-certificate" and seven.full_dimensional_dim is None
    assert not seven.certificate.valid


def test_zero_search_six_points():
    basis = vanishing_space(six_points(), 2).basis
    rep = heuristic_zero_search(sum_of_squares(basis, 4, 4), six_points(), budget=3000, seed=0)
    assert rep.verdict is ZeroSearchVerdict.NO_EXTRA_ZERO_FOUND
    again = heuristic_zero_search(sum_of_squares(basis, 4, 4), six_points(), budget=3000, seed=0)
    assert rep == again


def test_zero_search_finds_planted_zero():
    x1, x2 = variables(2)
    s = PointSet(2, [(1, 1)])
    rep = heuristic_zero_search((x1**2 - x2**2) ** 2, s, budget=500, seed=0)
    assert rep.verdict is ZeroSearchVerdict.EXTRA_ZERO_CANDIDATE
    c = np.array(rep.candidate)
    assert abs(abs(c[0] / c[1]) - 1) < 1e-4 and c[0] * c[1] < 0
    assert rationalize_common_zero([x1**2 - x2**2], rep.candidate, s) in {(1, -1), (-1, 1)}


def test_seven_points_extra_zero_found():
    s = PointSet(4, SEVEN)
    basis = vanishing_space(s, 2).basis
    rep = heuristic_zero_search(sum_of_squares(basis, 4, 4), s, budget=3000, seed=0)
    assert rep.verdict is ZeroSearchVerdict.EXTRA_ZERO_CANDIDATE
    z = rationalize_common_zero(basis, rep.candidate, s)
    assert z is not None and all(q(z) == 0 for q in basis)


def test_sphere_minimum():
    x1, x2 = variables(2)
    assert abs(sphere_minimum(x1**2 + x2**2, samples=200) - 1) < 1e-12
    assert sphere_minimum(x1 * x2, samples=2000) < -0.49


def test_line_violation_cases():
    x1, x2, x3, x4 = variables(4)
    line = line_template(4, 0, (1, 1, 1))
    assert line == [PARAM, 1, 1, 1]
    base = (x1 - x2) ** 4 * 3
    # f_dir >= 0 everywhere: no violation
    assert not nonneg_violation_on_line(base, (x1 - x2) ** 2 * x2**2, line, F(1, 1000)).value_sign_change
    # odd order zero in the direction: violation at an exact point
    v = nonneg_violation_on_line(base, (x1 - x2) ** 3 * (x1 - 9 * x2), line, F(1, 1000))
    assert v.value_sign_change and v.value < 0
    assert restrict_to_line(base + (x1 - x2) ** 3 * (x1 - 9 * x2) * F(1, 1000), line)(v.witness_x) == v.value
    # constant restriction
    c = nonneg_violation_on_line(x2**4, -(x3**4) * 2, line, F(1))
    assert c.value_sign_change and c.value == -1
    assert not nonneg_violation_on_line(x2**4, -(x3**4) * 2, line, F(1, 2)).value_sign_change


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4).filter(any))
def test_gradients_of_vanishing_basis_span_perp_at_random_point(pt):
    s = PointSet(4, [tuple(pt)])
    assert gradients_span_perp(vanishing_space(s, 2).basis, tuple(pt))
