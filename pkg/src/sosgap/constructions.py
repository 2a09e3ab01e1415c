"""Explicit point configurations with factoring bases.

* partition sets: all partitions of d into n nonnegative parts, with and
  without the pure powers ``d e_i``;
* six points in general linear position in R^4, with covering triples,
  hyperplane normals, dual bases and the quadrics ``<x,u_i><x,v_i>``;
* the seven-point configuration obtained by adding (1,1,1,1) to the
  six 0/1 points;
* the partitions of 2, whose double-vanishing quartics are squarefree.

Each family comes with an exact proof of "no common zeros outside S" that
replays the case analysis specific to its factoring basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exact import Matrix, as_vector, determinant, dot, inverse, kernel_basis, rank
from .forms import Form, linear_form, monomial_basis, product, substitute, variables
from .ideals import (
    FormSubspace,
    PointSet,
    double_vanishing_space,
    pairwise_products,
    projective_key,
    squares_span,
    vanishing_space,
)


class ConfigurationError(ValueError):
    """Input violates a construction's precondition (general position, genericity)."""


def partitions(n: int, d: int) -> list[tuple[int, ...]]:
    """Nonnegative integer vectors of length ``n`` summing to ``d``, ascending lexicographic."""
    return sorted(tuple(e) for e in monomial_basis(n, d))


def _sum_form(n: int) -> Form:
    return linear_form([1] * n)


def _factor(n: int, d: int, i: int, k: int) -> Form:
    """The linear form ``d x_i - k M`` with ``M = x_1 + ... + x_n``."""
    c = [Fraction(-k)] * n
    c[i] += d
    return linear_form(c)


def qi_factors(n: int, d: int, i: int) -> list[Form]:
    return [_factor(n, d, i, k) for k in range(d)]


def qi_form(n: int, d: int, i: int) -> Form:
    """Q_i = prod_{k=0}^{d-1} (d x_i - k M)."""
    return product(qi_factors(n, d, i))


def interpolant(n: int, d: int, s: Sequence[int]) -> Form:
    """Form vanishing on every partition of ``d`` except ``s``.

    It is the product over i of ``prod_{k < s_i} (d x_i - k M)``.
    """
    s = tuple(int(a) for a in s)
    if len(s) != n or any(a < 0 for a in s) or sum(s) != d:
        raise ValueError(f"{s} is not a partition of {d} into {n} parts")
    return product([_factor(n, d, i, k) for i in range(n) for k in range(s[i])], n)


@dataclass(frozen=True)
class PartitionConfig:
    n: int
    d: int
    points_all: PointSet
    points: PointSet
    qi_basis: tuple[Form, ...]


def build_partition_config(n: int, d: int) -> PartitionConfig:
    if n < 2 or d < 2:
        raise ValueError("partition configurations need n >= 2 and d >= 2")
    allp = partitions(n, d)
    inner = [p for p in allp if sum(1 for a in p if a) >= 2]
    points_all = PointSet(n, allp, f"Sbar_{n},{d}")
    points = PointSet(n, inner, f"S_{n},{d}")
    qs = tuple(qi_form(n, d, i) for i in range(n))
    for q in qs:
        if any(q(p) for p in points):
            raise AssertionError("Q_i fails to vanish on S_{n,d}")
    if rank(Matrix([q.coefficient_vector() for q in qs])) != n:
        raise AssertionError("Q_i are linearly dependent")
    if vanishing_space(points, d).dim != n:
        raise AssertionError("Q_i do not span the vanishing space")
    return PartitionConfig(n, d, points_all, points, qs)


def prove_condition1_partition(cfg: PartitionConfig) -> bool:
    """Exact replay of the argument that S_{n,d} forces no extra zeros in degree d.

    Common zeros v of the Q_i split into two cases.

    * ``M(v) = 0``: substituting ``x_n = -(x_1 + ... + x_{n-1})`` turns each
      Q_i into ``d^d x_i^d``, so every coordinate vanishes and v = 0.
    * ``M(v) != 0``: scale to ``M(v) = d``; the factor ``d x_i - k M`` then
      reads ``d (v_i - k)``, so each v_i lies in {0, ..., d-1}.  Enumerating
      those integer vectors with sum d must give exactly S_{n,d}.
    """
    n, d = cfg.n, cfg.d
    qs = cfg.qi_basis
    if vanishing_space(cfg.points, d).dim != len(qs) or rank(Matrix([q.coefficient_vector() for q in qs])) != len(qs):
        return False

    # case M(v) = 0, checked as an identity of forms in n-1 variables
    ys = variables(n - 1)
    images = ys + [-sum(ys, Form.zero(n - 1, 1))]
    for i, q in enumerate(qs):
        on_hyperplane = substitute(q, images)
        target = images[i] ** d * (Fraction(d) ** d)
        if on_hyperplane != target:
            return False

    # case M(v) = d
    msum = _sum_form(n)
    for i, q in enumerate(qs):
        factors = qi_factors(n, d, i)
        if product(factors) != q:
            return False
        for k, f in enumerate(factors):
            # f = d x_i - k M must be d*x_i - k*M exactly; on M = d it vanishes iff x_i = k
            if f != Form.variable(i, n) * d - msum * k:
                return False
    grid = [v for v in itertools.product(range(d), repeat=n) if sum(v) == d]
    for v in grid:
        if any(q(v) for q in qs):
            return False
    return {tuple(Fraction(a) for a in v) for v in grid} == set(cfg.points.points)


def singular_matrix(cfg: PartitionConfig, s: Sequence[int]) -> tuple[Matrix, Matrix]:
    """The Jacobian A (a_ij = dQ_i/dx_j at s) and its row-normalization B.

    Row i of A is P_{s_i}(s) times the gradient of d x_i - s_i M, where
    P_{s_i} is Q_i with that factor removed.
    """
    n, d = cfg.n, cfg.d
    s = tuple(int(a) for a in s)
    if s not in {tuple(int(x) for x in p) for p in cfg.points}:
        raise ValueError(f"{s} is not a point of S_{n},{d}")
    a_rows = [cfg.qi_basis[i].gradient_at(s) for i in range(n)]
    b_rows = []
    for i in range(n):
        # P_{s_i}: Q_i with the factor vanishing at s removed
        others = [f for k, f in enumerate(qi_factors(n, d, i)) if k != s[i]]
        scale = product(others, n)(s)
        if scale == 0:
            raise ConfigurationError(f"P_s_{i}(s) vanishes; configuration is corrupted")
        b_rows.append([x / scale for x in a_rows[i]])
    a = Matrix(a_rows, n)
    b = Matrix(b_rows, n)
    # d/dx_j (d x_i - s_i M) = d [i == j] - s_i, so B = dI - C^T with c_ij = s_j:
    # all-ones spans the left kernel, s itself the right kernel (Euler)
    expected = Matrix([[(d - s[i]) if i == j else -s[i] for j in range(n)] for i in range(n)], n)
    if b != expected:
        raise AssertionError("row-scaled Jacobian differs from dI - C^T")
    return a, b


def singular_matrix_rank(cfg: PartitionConfig, s: Sequence[int]) -> int:
    a, b = singular_matrix(cfg, s)
    r = rank(a)
    if r != rank(b):
        raise AssertionError("row scaling changed the rank")
    return r


# -- six points in R^4 -------------------------------------------------------

DEFAULT_TRIPLES: tuple[tuple[int, int, int], ...] = ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5))


def check_triple_system(triples: Sequence[Sequence[int]], m: int = 6) -> None:
    triples = [frozenset(t) for t in triples]
    if len(triples) != 4 or any(len(t) != 3 for t in triples):
        raise ConfigurationError("need four 3-element triples")
    for a, b in itertools.combinations(triples, 2):
        if len(a & b) != 1:
            raise ConfigurationError("two triples must meet in exactly one index")
    for k in range(m):
        if sum(k in t for t in triples) != 2:
            raise ConfigurationError(f"index {k} must lie in exactly two triples")


def dependent_subsets(points: PointSet) -> list[tuple[int, ...]]:
    """Index sets of size n whose points are linearly dependent."""
    return [
        idx
        for idx in itertools.combinations(range(len(points)), points.n)
        if determinant(Matrix([points.points[i] for i in idx])) == 0
    ]


def in_general_linear_position(points: PointSet) -> bool:
    """Every n-element subset is linearly independent."""
    return not dependent_subsets(points)


def blocking_dependencies(points: PointSet, triples: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Dependent 4-subsets that contain a covering triple or its complement.

    These are the only dependencies the hyperplane arguments use: a fourth
    point on the hyperplane of a triple.  A dependent 4-set made of two
    pairs that never share a triple (as for the 0/1 points) is harmless.
    """
    covering = [frozenset(t) for t in triples]
    covering += [frozenset(range(6)) - t for t in covering]
    return [idx for idx in dependent_subsets(points) if any(t <= set(idx) for t in covering)]


def primitive_integer(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale to coprime integers with the first nonzero entry positive."""
    v = as_vector(v)
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    lead = next(x for x in ints if x)
    sign = 1 if lead > 0 else -1
    return tuple(Fraction(sign * x // g) for x in ints)


def hyperplane_normal(vectors: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    k = kernel_basis(Matrix(vectors))
    if k.cols != 1:
        raise ConfigurationError("points spanning the hyperplane are dependent")
    return primitive_integer(k.column(0))


@dataclass(frozen=True)
class SixPointConfig:
    points: PointSet
    triples: tuple[tuple[int, int, int], ...]
    u: tuple[tuple[Fraction, ...], ...]
    v: tuple[tuple[Fraction, ...], ...]
    u_dual: tuple[tuple[Fraction, ...], ...]
    v_dual: tuple[tuple[Fraction, ...], ...]
    q_forms: tuple[Form, ...]
    r_form: Form

    @property
    def complements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(set(range(6)) - set(t))) for t in self.triples)


def _dual(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    inv = inverse(Matrix(rows))
    return tuple(inv.column(j) for j in range(inv.cols))


def _assemble_six(points: PointSet, triples, u, v) -> SixPointConfig:
    try:
        u_dual = _dual(u)
        v_dual = _dual(v)
    except ZeroDivisionError as exc:
        raise ConfigurationError("normals do not form a basis") from exc
    for i in range(4):
        for j in range(4):
            if dot(u[i], v_dual[j]) == 0 or dot(v[i], u_dual[j]) == 0:
                raise ConfigurationError(f"inner product condition fails at ({i}, {j}); input is not generic")
    q_forms = tuple(linear_form(u[i]) * linear_form(v[i]) for i in range(4))
    r_form = product([linear_form(x) for x in u])
    for q in q_forms:
        if any(q(p) for p in points):
            raise AssertionError("a quadric fails to vanish on the six points")
    return SixPointConfig(points, tuple(tuple(t) for t in triples), tuple(u), tuple(v), u_dual, v_dual, q_forms, r_form)


def build_six_point_config(points: PointSet, triple_choice: Sequence[Sequence[int]] | None = None) -> SixPointConfig:
    if points.n != 4 or len(points) != 6:
        raise ConfigurationError("need exactly six points in R^4")
    triples = [tuple(sorted(t)) for t in (triple_choice or DEFAULT_TRIPLES)]
    check_triple_system(triples)
    bad = blocking_dependencies(points, triples)
    if bad:
        raise ConfigurationError(f"points are not in general linear position: 4x4 minor on {bad[0]} vanishes")
    comps = [tuple(sorted(set(range(6)) - set(t))) for t in triples]
    u = [hyperplane_normal([points.points[k] for k in t]) for t in triples]
    v = [hyperplane_normal([points.points[k] for k in t]) for t in comps]
    return _assemble_six(points, triples, u, v)


def with_scaled_normals(cfg: SixPointConfig, u_scales: Sequence, v_scales: Sequence) -> SixPointConfig:
    """Same configuration with each normal multiplied by a nonzero rational."""
    u = [tuple(Fraction(c) * x for x in vec) for c, vec in zip(as_vector(u_scales), cfg.u)]
    v = [tuple(Fraction(c) * x for x in vec) for c, vec in zip(as_vector(v_scales), cfg.v)]
    return _assemble_six(cfg.points, cfg.triples, u, v)


def prove_condition1_sixpoints(cfg: SixPointConfig) -> bool:
    """Exact check that the quadrics have no common zeros outside the six points.

    A common zero z kills one factor of every Q_i = <x,u_i><x,v_i>.  Each of
    the 16 choices of factors is a 4x4 linear system; every nonzero solution
    must be one of the six points.
    """
    pts = cfg.points
    if rank(Matrix([q.coefficient_vector() for q in cfg.q_forms])) != 4:
        return False
    if vanishing_space(pts, 2).dim != 4:
        return False
    for choice in itertools.product((0, 1), repeat=4):
        rows = [cfg.u[i] if c == 0 else cfg.v[i] for i, c in enumerate(choice)]
        k = kernel_basis(Matrix(rows))
        if k.cols == 0:
            continue
        if k.cols > 1:
            return False
        if pts.index_of(k.column(0)) is None:
            return False
    return True


def extra_constraint_residuals(cfg: SixPointConfig, p: Form) -> list[Fraction]:
    """Residuals <v*_i,u_i>^2 p(u*_i) - <u*_i,v_i>^2 p(v*_i), i = 1..4."""
    if p.n != 4 or p.degree != 4:
        raise ValueError("the constraint applies to quartics in four variables")
    return [
        dot(cfg.v_dual[i], cfg.u[i]) ** 2 * p(cfg.u_dual[i]) - dot(cfg.u_dual[i], cfg.v[i]) ** 2 * p(cfg.v_dual[i])
        for i in range(4)
    ]


# -- the 0/1 configurations --------------------------------------------------


def six_points() -> PointSet:
    """The six 0/1 vectors with two ones, numbered to match DEFAULT_TRIPLES."""
    return PointSet(4, [p for p in partitions(4, 2) if max(p) == 1], "six-points")


def factored_quadrics() -> tuple[Form, ...]:
    """x_i (x_i - sum of the other variables), i = 1..4."""
    xs = variables(4)
    total = sum(xs, Form.zero(4, 1))
    return tuple(x * (x * 2 - total) for x in xs)


@dataclass(frozen=True)
class SevenPointConfig:
    points: PointSet
    q_basis: tuple[Form, ...]
    r_basis: tuple[Form, ...]
    f1: Form
    f2: Form


def build_seven_point_config() -> SevenPointConfig:
    six = six_points()
    points = PointSet(4, list(six.points) + [(1, 1, 1, 1)], "seven-points")
    qs = factored_quadrics()
    r = tuple(qs[i] - qs[3] for i in range(3))
    x1, x2, x3, x4 = variables(4)
    f1 = sum(((qs[i] - qs[j]) ** 2 for i, j in itertools.combinations(range(4), 2)), Form.zero(4, 4))
    f2 = sum(qs, Form.zero(4, 2)) ** 2 - x1 * x2 * x3 * x4 * 64
    double = double_vanishing_space(points, 4)
    squares = squares_span(points, 2)
    vanish = vanishing_space(points, 2)
    if FormSubspace.spanned_by(4, 2, list(r)).dim != vanish.dim or not all(vanish.contains(f) for f in r):
        raise AssertionError("R_1, R_2, R_3 do not span the vanishing quadrics")
    if f1 not in double or f2 not in double:
        raise AssertionError("F_1 or F_2 is not double vanishing")
    if f2 in squares:
        raise AssertionError("F_2 unexpectedly lies in the span of squares")
    return SevenPointConfig(points, qs, r, f1, f2)


def build_s_n2(n: int) -> PointSet:
    """The vectors e_i + e_j (i < j) and 2 e_i."""
    if n < 2:
        raise ValueError("need n >= 2")
    return PointSet(n, partitions(n, 2), f"S_{n},2")


def squarefree_quartics(n: int) -> list[Form]:
    return [Form.monomial([int(i in idx) for i in range(n)]) for idx in itertools.combinations(range(n), 4)]


# -- prover dispatch ---------------------------------------------------------


def exact_condition1_prover(s: PointSet, d: int) -> Callable[[], tuple[str, bool]] | None:
    """An exact condition-(1) prover for ``s`` if it belongs to a known family."""
    if d >= 2 and s.n >= 2 and len(s) == math.comb(s.n + d - 1, d) - s.n:
        keys = {projective_key(p) for p in s}
        target = [p for p in partitions(s.n, d) if sum(1 for a in p if a) >= 2]
        if keys == {projective_key(as_vector(p)) for p in target}:
            return lambda: ("partition-family prover", prove_condition1_partition(build_partition_config(s.n, d)))
    if d == 2 and s.n == 4 and len(s) == 6 and not blocking_dependencies(s, DEFAULT_TRIPLES):

        def run() -> tuple[str, bool]:
            try:
                cfg = build_six_point_config(s)
            except ConfigurationError:
                return "six-point prover", False
            return "six-point prover", prove_condition1_sixpoints(cfg)

        return run
    return None


def build_products_basis(cfg: SixPointConfig) -> list[Form]:
    return pairwise_products(list(cfg.q_forms))
