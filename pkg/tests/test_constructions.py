import random
from fractions import Fraction as F
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import SIX

from sosgap.certify import nonneg_violation_on_line
from sosgap.constructions import (
    ConfigurationError,
    blocking_dependencies,
    build_partition_config,
    build_s_n2,
    build_seven_point_config,
    build_six_point_config,
    dependent_subsets,
    extra_constraint_residuals,
    factored_quadrics,
    interpolant,
    partitions,
    prove_condition1_partition,
    prove_condition1_sixpoints,
    singular_matrix,
    singular_matrix_rank,
    six_points,
    with_scaled_normals,
)
from sosgap.exact import Matrix, kernel_basis, rank
from sosgap.forms import PARAM, UnivariatePoly, restrict_to_line, variables
from sosgap.ideals import FormSubspace, PointSet, double_vanishing_space, squares_span, vanishing_space


def random_six(rng):
    while True:
        pts = [[F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4)] for _ in range(6)]
        try:
            s = PointSet(4, pts)
        except ValueError:
            continue
        if not dependent_subsets(s):
            return s


@pytest.mark.parametrize("n,d", [(3, 2), (4, 2), (3, 3), (4, 3), (5, 2)])
def test_partition_config(n, d):
    cfg = build_partition_config(n, d)
    assert len(cfg.points_all) == comb(n + d - 1, d)
    assert len(cfg.points) == comb(n + d - 1, d) - n
    for i, q in enumerate(cfg.qi_basis):
        for j in range(n):
            e = [int(j == k) for k in range(n)]
            assert q(e) == (factorial(d) if i == j else 0)
    assert prove_condition1_partition(cfg)


def test_partition_42_matches_factored_basis():
    cfg = build_partition_config(4, 2)
    assert cfg.points.projectively_equal(six_points())
    for q, f in zip(cfg.qi_basis, factored_quadrics()):
        assert q.is_proportional_to(f)


def test_interpolants():
    x1, x2 = variables(2)
    p = interpolant(2, 2, (2, 0))
    assert p == x1 * (x1 - x2) * 2
    assert p((1, 1)) == 0 and p((0, 2)) == 0 and p((2, 0)) != 0
    allp = partitions(4, 2)
    ps = [interpolant(4, 2, s) for s in allp]
    for s, p in zip(allp, ps):
        assert p(s) != 0
        assert all(p(t) == 0 for t in allp if t != s)
    assert rank(Matrix([p.coefficient_vector() for p in ps])) == 10
    with pytest.raises(ValueError):
        interpolant(2, 2, (1, 0))


def test_enumeration_equals_s52():
    # the integer points with 0 <= v_i <= d-1 and sum d are exactly S_5,2
    import itertools

    grid = {v for v in itertools.product(range(2), repeat=5) if sum(v) == 2}
    cfg = build_partition_config(5, 2)
    assert {tuple(int(x) for x in p) for p in cfg.points} == grid


def test_singular_matrix():
    cfg = build_partition_config(4, 2)
    assert singular_matrix_rank(cfg, (1, 1, 0, 0)) == 3
    assert singular_matrix_rank(build_partition_config(3, 3), (2, 1, 0)) == 2
    _, b = singular_matrix(cfg, (1, 1, 0, 0))
    # all-ones spans the left kernel, s the right kernel
    assert kernel_basis(b.T).column(0) == (1, 1, 1, 1)
    ker = kernel_basis(b)
    assert ker.cols == 1 and rank(Matrix([ker.column(0), (1, 1, 0, 0)])) == 1
    with pytest.raises(ValueError):
        singular_matrix(cfg, (2, 0, 0, 0))


def test_six_point_config_explicit():
    cfg = build_six_point_config(six_points())
    assert cfg.u == tuple(tuple(F(int(i == j)) for j in range(4)) for i in range(4))
    assert cfg.v[0] == (1, -1, -1, -1)
    x1, x2, x3, x4 = variables(4)
    assert cfg.r_form.is_proportional_to(x1 * x2 * x3 * x4)
    assert rank(Matrix([q.coefficient_vector() for q in cfg.q_forms])) == 4
    assert cfg.complements == ((3, 4, 5), (1, 2, 5), (0, 2, 4), (0, 1, 3))
    assert prove_condition1_sixpoints(cfg)


def test_zero_one_points_dependencies_are_harmless():
    s = six_points()
    assert dependent_subsets(s)  # s1 + s6 = s2 + s5
    assert blocking_dependencies(s, [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)]) == []


def test_extra_constraint_specializes():
    cfg = build_six_point_config(six_points())
    x1, x2, x3, x4 = variables(4)
    for p in [q1 * q2 for q1 in cfg.q_forms for q2 in cfg.q_forms] + [x1 * x2 * x3 * x4, x1**4]:
        res = extra_constraint_residuals(cfg, p)
        # u = e_i and v* = v/4 here, so 256 * residual_1 = 16 p(e1) - p(1,-1,-1,-1)
        assert 256 * res[0] == 16 * p((1, 0, 0, 0)) - p((1, -1, -1, -1))
    sq = squares_span(six_points(), 2)
    assert all(all(r == 0 for r in extra_constraint_residuals(cfg, p)) for p in sq.basis)
    assert all(r != 0 for r in extra_constraint_residuals(cfg, cfg.r_form))


def test_random_general_position_sets():
    rng = random.Random(3)
    for _ in range(5):
        s = random_six(rng)
        cfg = build_six_point_config(s)
        assert prove_condition1_sixpoints(cfg)
        assert all(r != 0 for r in extra_constraint_residuals(cfg, cfg.r_form))


def test_sixpoint_prover_agrees_with_sampling():
    # dense float sampling of sum Q_i^2 finds no small values away from S
    from sosgap.certify import heuristic_zero_search, sum_of_squares
    from sosgap.certify import ZeroSearchVerdict

    s = random_six(random.Random(11))
    cfg = build_six_point_config(s)
    p = sum_of_squares(cfg.q_forms, 4, 4)
    rep = heuristic_zero_search(p, s, budget=5000, seed=1)
    assert rep.verdict is ZeroSearchVerdict.NO_EXTRA_ZERO_FOUND
    assert prove_condition1_sixpoints(cfg)


def test_coplanar_points_rejected():
    pts = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 0), (0, 0, 0, 1), (1, 2, 3, 4)]
    with pytest.raises(ConfigurationError):
        build_six_point_config(PointSet(4, pts))


def test_bad_triples_rejected():
    with pytest.raises(ConfigurationError):
        build_six_point_config(six_points(), [(0, 1, 2), (0, 1, 3), (2, 4, 5), (3, 4, 5)])


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool), min_size=8, max_size=8),
    st.sampled_from(["R", "Q1Q3", "x1^4"]),
)
def test_residual_scale_invariance(scales, which):
    cfg = build_six_point_config(six_points())
    x1 = variables(4)[0]
    p = {"R": cfg.r_form, "Q1Q3": cfg.q_forms[0] * cfg.q_forms[2], "x1^4": x1**4}[which]
    base = extra_constraint_residuals(cfg, p)
    scaled = with_scaled_normals(cfg, scales[:4], scales[4:])
    new = extra_constraint_residuals(scaled, p)
    # both sides of constraint i pick up the same factor 1/(a_i b_i)^2, so the equation is unchanged
    for i in range(4):
        assert new[i] * (scales[i] * scales[4 + i]) ** 2 == base[i]


def test_seven_point_config():
    cfg = build_seven_point_config()
    s = cfg.points
    assert all(q((1, 1, 1, 1)) == -2 for q in cfg.q_basis)
    x1, x2, x3, x4 = variables(4)
    assert cfg.r_basis[2] == (x3 - x4) * (x3 + x4 - x1 - x2)
    assert FormSubspace.spanned_by(4, 2, list(cfg.r_basis)).dim == vanishing_space(s, 2).dim
    dv = double_vanishing_space(s, 4)
    assert cfg.f1 in dv and cfg.f2 in dv
    sq = squares_span(s, 2)
    assert cfg.f2 not in sq
    # F2 with the squares spans 7 dimensions, short of dim I_2,4(S') = 10
    assert FormSubspace.spanned_by(4, 4, list(sq.basis) + [cfg.f2]).dim == 7


def test_seven_point_line_restrictions():
    cfg = build_seven_point_config()
    line = [PARAM, 1, 1, 1]
    t = UnivariatePoly.x() - 1
    assert restrict_to_line(cfg.f1, line) == t**4 * 3
    assert restrict_to_line(cfg.f2, line) == t**3 * (UnivariatePoly.x() - 9)
    v = nonneg_violation_on_line(cfg.f1, cfg.f2, line, F(1, 1000))
    assert v.value_sign_change and v.witness_x > 1 and v.value < 0


def test_s_n2():
    assert len(build_s_n2(4)) == 10
    dv = double_vanishing_space(build_s_n2(4), 4)
    x1, x2, x3, x4 = variables(4)
    assert dv.dim == 1 and x1 * x2 * x3 * x4 in dv
    assert double_vanishing_space(build_s_n2(5), 4).dim == 5
