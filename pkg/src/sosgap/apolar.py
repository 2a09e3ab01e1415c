"""The sphere inner product on forms and the separating inequality.

``<f, g>`` is the average of f*g over the unit sphere, computed exactly from
even moments.  For the six unit points with two coordinates 1/sqrt(2) the
functionals

    M_S(f) = sum of f(s)^2,   T(f) = <f, f>,   R_S(f) = (f(a)^2 - f(b)^2)^2

satisfy alpha*M_S*T - R_S >= 0 on all quadratics f for alpha large enough;
:func:`minimal_alpha` derives the sharp constant from Gram data.

The unit points are kept as integer vectors t together with their squared
norms c, so s = t / sqrt(c).  Even-degree quantities such as f(s) for a
quadratic f, or any squared value, stay rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .exact import Matrix, as_vector, dot, is_positive_definite, rank, solve
from .forms import Form, linear_form, monomial_basis, monomial_values, norm_squared_form, variables
from .ideals import LinearFunctional, PointSet, extra_constraint_basis


def _double_factorial_odd(k: int) -> int:
    """(k-1)!! for even k >= 0, i.e. 1*3*...*(k-1)."""
    return prod(range(1, k, 2))


@lru_cache(maxsize=None)
def sphere_moment(alpha: tuple[int, ...], n: int | None = None) -> Fraction:
    """Average of x^alpha over the unit sphere in R^n."""
    alpha = tuple(alpha)
    n = len(alpha) if n is None else n
    if len(alpha) != n:
        raise ValueError("exponent length must equal n")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = prod(_double_factorial_odd(a) for a in alpha)
    den = prod(n + 2 * j - 2 for j in range(1, sum(alpha) // 2 + 1))
    return Fraction(num, den)


def sphere_average(p: Form) -> Fraction:
    """Integral of p against the uniform probability measure on the sphere."""
    return sum((c * sphere_moment(e, p.n) for e, c in p.terms()), Fraction(0))


class SphereInnerProduct:
    """Gram matrix of the sphere inner product on the monomials of P_{n,d}."""

    def __init__(self, n: int, d: int, *, check: bool = True):
        self.n, self.d = n, d
        self.monomials = monomial_basis(n, d)
        self.gram = Matrix(
            [[sphere_moment(tuple(x + y for x, y in zip(a, b)), n) for b in self.monomials] for a in self.monomials],
            len(self.monomials),
        )
        if check and not is_positive_definite(self.gram):
            raise AssertionError("sphere Gram matrix is not positive definite")

    def _vec(self, f: Form) -> tuple[Fraction, ...]:
        if f.n != self.n or f.degree != self.d:
            raise ValueError(f"expected a form in P_{self.n},{self.d}")
        return f.coefficient_vector()

    def inner(self, f: Form, g: Form) -> Fraction:
        return dot(self._vec(f), self.gram @ self._vec(g))

    def norm2(self, f: Form) -> Fraction:
        return self.inner(f, f)

    def reproducing_element(self, v: Sequence) -> Form:
        return reproducing_element(v, self)


def _closed_form_p42(v: tuple[Fraction, ...]) -> Form:
    """12 <x,v>^2 - 2 |v|^2 |x|^2."""
    lin = linear_form(v)
    return lin * lin * 12 - norm_squared_form(4) * (2 * dot(v, v))


def reproducing_element(v: Sequence, ip: SphereInnerProduct) -> Form:
    """The unique P_v in P_{n,d} with <f, P_v> = f(v) for every f.

    Uses the closed form for quadratics in four variables and a Gram solve
    otherwise; either way the reproducing identity is checked on every
    monomial before returning.
    """
    v = as_vector(v)
    if len(v) != ip.n:
        raise ValueError("point has the wrong dimension")
    target = monomial_values(v, ip.n, ip.d)
    if (ip.n, ip.d) == (4, 2):
        pv = _closed_form_p42(v)
    else:
        c = solve(ip.gram, target)
        if c is None:
            raise AssertionError("Gram system is inconsistent")
        pv = Form.from_vector(ip.n, ip.d, c)
    if ip.gram @ pv.coefficient_vector() != target:
        raise AssertionError("reproducing identity fails")
    return pv


@dataclass(frozen=True)
class ScaledPointSet:
    """Points t_i / sqrt(c_i) with integer-like t_i and rational c_i > 0."""

    base: PointSet
    sq_scales: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.sq_scales) != len(self.base):
            raise ValueError("one scale per point")
        if any(c <= 0 for c in self.sq_scales):
            raise ValueError("scales must be positive")

    @classmethod
    def normalized(cls, base: PointSet) -> "ScaledPointSet":
        """Unit vectors in the directions of ``base``."""
        return cls(base, tuple(dot(p, p) for p in base))

    def __len__(self) -> int:
        return len(self.base)

    def even_value(self, f: Form, i: int) -> Fraction:
        """f(t_i / sqrt(c_i)) for a form of even degree."""
        if f.degree % 2:
            raise ValueError("odd-degree values at scaled points can be irrational")
        return f(self.base.points[i]) / self.sq_scales[i] ** (f.degree // 2)

    def squared_value(self, f: Form, i: int) -> Fraction:
        """f(t_i / sqrt(c_i))^2, rational for every degree."""
        return f(self.base.points[i]) ** 2 / self.sq_scales[i] ** f.degree

    def reproducing_elements(self, ip: SphereInnerProduct) -> list[Form]:
        """P_s for s = t / sqrt(c); for quadratics P_s = P_t / c."""
        if ip.d % 2:
            raise ValueError("reproducing elements at scaled points need even degree")
        return [reproducing_element(t, ip) / c ** (ip.d // 2) for t, c in zip(self.base.points, self.sq_scales)]


def functional_MS(g: Form, pts: ScaledPointSet) -> Fraction:
    """M_S(g^2) = sum over S of g(s)^2."""
    return sum((pts.squared_value(g, i) for i in range(len(pts))), Fraction(0))


def functional_MS_quartic(p: Form, pts: ScaledPointSet) -> Fraction:
    """sum over S of p(s) for an even-degree form p."""
    return sum((pts.even_value(p, i) for i in range(len(pts))), Fraction(0))


def functional_T(g: Form, ip: SphereInnerProduct) -> Fraction:
    """T(g^2) = <g, g>."""
    return ip.norm2(g)


def functional_T_quartic(p: Form) -> Fraction:
    return sphere_average(p)


# -- the six unit points -----------------------------------------------------

PAIR_LABELS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class InequalityConfig:
    points: ScaledPointSet
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    ip: SphereInnerProduct = field(compare=False)
    p_ij: dict = field(compare=False)  # (i, j) -> P_{s_ij}, 0-based pairs
    p_a: Form = field(compare=False)
    p_b: Form = field(compare=False)

    @property
    def scale(self) -> Fraction:
        return self.points.sq_scales[0]


def build_inequality_config(scale=1) -> InequalityConfig:
    """Unit points s_ij = (e_i + e_j)/sqrt(2), stored as scale*(e_i + e_j)."""
    scale = Fraction(scale)
    if scale == 0:
        raise ValueError("scale must be nonzero")
    pts = []
    for i, j in PAIR_LABELS:
        t = [Fraction(0)] * 4
        t[i] = t[j] = scale
        pts.append(t)
    base = PointSet(4, pts, "unit-six-points")
    sp = ScaledPointSet.normalized(base)
    ip = SphereInnerProduct(4, 2)
    elems = sp.reproducing_elements(ip)
    a = as_vector((1, 0, 0, 0))
    b = as_vector((Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)))
    return InequalityConfig(
        points=sp,
        a=a,
        b=b,
        ip=ip,
        p_ij=dict(zip(PAIR_LABELS, elems)),
        p_a=reproducing_element(a, ip),
        p_b=reproducing_element(b, ip),
    )


def functional_RS(g: Form, cfg: InequalityConfig) -> Fraction:
    """R_S(g^2) = (g(a)^2 - g(b)^2)^2."""
    ga, gb = g(cfg.a), g(cfg.b)
    return (ga * ga - gb * gb) ** 2


def functional_RS_quartic(p: Form, cfg: InequalityConfig) -> Fraction:
    """(p(a) - p(b))^2 for a quartic p."""
    return (p(cfg.a) - p(cfg.b)) ** 2


def check_inequality(alpha, g: Form, cfg: InequalityConfig) -> Fraction:
    """alpha * M_S(g^2) * T(g^2) - R_S(g^2), exact."""
    return Fraction(alpha) * functional_MS(g, cfg.points) * functional_T(g, cfg.ip) - functional_RS(g, cfg)


def ratio(g: Form, cfg: InequalityConfig) -> Fraction | None:
    """R_S / (M_S T); None when M_S(g^2) = 0."""
    m = functional_MS(g, cfg.points)
    if m == 0:
        return None
    return functional_RS(g, cfg) / (m * functional_T(g, cfg.ip))


# -- eigenstructure in Gram form ---------------------------------------------


def _combo(cfg: InequalityConfig, weights: dict) -> Form:
    out = Form.zero(4, 2)
    for key, w in weights.items():
        out = out + cfg.p_ij[key] * w
    return out


def eigenvectors(cfg: InequalityConfig) -> dict[str, Form]:
    """v1..v6 as combinations of the P_ij (pairs 0-based: (0,1) is P_12)."""
    P = {k: 1 for k in PAIR_LABELS}
    v = {}
    v["v1"] = _combo(cfg, P)
    v["v2"] = _combo(cfg, {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): -1, (1, 3): -1, (2, 3): -1})
    v["v3"] = _combo(cfg, {(0, 1): 1, (1, 3): 1, (0, 2): -1, (2, 3): -1})
    v["v4"] = _combo(cfg, {(0, 1): 1, (0, 2): 1, (1, 2): 2, (0, 3): -2, (1, 3): -1, (2, 3): -1})
    v["v5"] = _combo(cfg, {(0, 1): 1, (2, 3): 1, (1, 2): -1, (0, 3): -1})
    v["v6"] = v["v1"] - _combo(cfg, {(0, 2): 3, (1, 3): 3})
    return v


def ms_bilinear(f: Form, g: Form, pts: ScaledPointSet) -> Fraction:
    """Polarization of M_S: sum over S of f(s) g(s) (quadratics)."""
    return sum((pts.even_value(f, i) * pts.even_value(g, i) for i in range(len(pts))), Fraction(0))


def ms_matrix(cfg: InequalityConfig) -> Matrix:
    """M_S as a symmetric matrix on the monomial coefficients of P_{4,2}."""
    mons = cfg.ip.monomials
    rows = []
    for i, t in enumerate(cfg.points.base.points):
        c = cfg.points.sq_scales[i]
        rows.append([x / c for x in monomial_values(t, 4, 2)])
    return Matrix([[sum(r[a] * r[b] for r in rows) for b in range(len(mons))] for a in range(len(mons))], len(mons))


def eigen_multiplicities(cfg: InequalityConfig) -> dict[Fraction, int]:
    """Multiplicities of 12, 6 and 0 for M_S relative to T, from nullities."""
    m, g = ms_matrix(cfg), cfg.ip.gram
    size = g.rows
    return {lam: size - rank(m - g * lam) for lam in (Fraction(12), Fraction(6), Fraction(0))}


@dataclass(frozen=True)
class EigenReport:
    gram_pij: Matrix
    eigenvalues: dict[str, Fraction]
    multiplicities: dict[Fraction, int]
    diff_norm2: Fraction
    sum_norm2: Fraction
    projection_norm2: Fraction
    v7_norm2: Fraction
    v7: Form = field(compare=False)

    def to_json(self) -> dict:
        from .exact import rational_str

        return {
            "gram_pij": [[rational_str(x) for x in r] for r in self.gram_pij.tolist()],
            "eigenvalues": {k: rational_str(v) for k, v in self.eigenvalues.items()},
            "multiplicities": {rational_str(k): v for k, v in self.multiplicities.items()},
            "norm2_Pa_minus_Pb": rational_str(self.diff_norm2),
            "norm2_Pa_plus_Pb": rational_str(self.sum_norm2),
            "norm2_projection": rational_str(self.projection_norm2),
            "norm2_v7": rational_str(self.v7_norm2),
        }


def eigen_structure(cfg: InequalityConfig) -> EigenReport:
    """Verify the eigenbasis identities exactly and report the squared norms.

    Raises AssertionError when a structural identity fails: an eigenvector
    equation M_S(v, w) = lambda <v, w> on the monomials, orthogonality of
    v1..v6, P_a - P_b = v2/2, or the projection of P_a + P_b onto the span
    of the P_ij being v1/6.
    """
    ip, pts = cfg.ip, cfg.points
    keys = list(PAIR_LABELS)
    gram = Matrix([[ip.inner(cfg.p_ij[x], cfg.p_ij[y]) for y in keys] for x in keys], 6)
    vs = eigenvectors(cfg)
    probes = [Form.monomial(e) for e in ip.monomials]
    lam = {}
    for name, v in vs.items():
        expected = Fraction(12) if name in ("v1", "v2", "v3", "v4") else Fraction(6)
        for w in probes:
            if ms_bilinear(v, w, pts) != expected * ip.inner(v, w):
                raise AssertionError(f"{name} is not an eigenvector for {expected}")
        lam[name] = expected
    names = list(vs)
    for i, x in enumerate(names):
        for y in names[i + 1 :]:
            if ip.inner(vs[x], vs[y]) != 0:
                raise AssertionError(f"{x} and {y} are not orthogonal")
    diff = cfg.p_a - cfg.p_b
    if diff != vs["v2"] / 2:
        raise AssertionError("P_a - P_b differs from v2/2")
    total = cfg.p_a + cfg.p_b
    coeffs = solve(gram, [ip.inner(total, cfg.p_ij[k]) for k in keys])
    proj = _combo(cfg, dict(zip(keys, coeffs)))
    if proj != vs["v1"] / 6:
        raise AssertionError("projection of P_a + P_b differs from v1/6")
    v7 = total - proj
    if any(ip.inner(v7, cfg.p_ij[k]) for k in keys):
        raise AssertionError("v7 is not orthogonal to the P_ij")
    return EigenReport(
        gram_pij=gram,
        eigenvalues=lam,
        multiplicities=eigen_multiplicities(cfg),
        diff_norm2=ip.norm2(diff),
        sum_norm2=ip.norm2(total),
        projection_norm2=ip.norm2(proj),
        v7_norm2=ip.norm2(v7),
        v7=v7,
    )


def minimal_alpha(cfg: InequalityConfig, report: EigenReport | None = None) -> Fraction:
    """|P_a - P_b|^2 |v7|^2 / 12, from the x2^2 x7^2 coefficient comparison.

    In orthonormal eigen-coordinates R_S = |P_a-P_b|^2 x2^2 (|v1/6| x1 + |v7| x7)^2
    while M_S T contains 12 x2^2 x7^2 and no x1 x7 cross term, so the
    x2^2 x7^2 coefficient forces this bound and it is attained.
    """
    report = report or eigen_structure(cfg)
    return report.diff_norm2 * report.v7_norm2 / report.eigenvalues["v2"]


def alpha_counterexample(cfg: InequalityConfig, report: EigenReport | None = None) -> Form:
    """v7 + v2/10, a quadratic whose ratio R_S/(M_S T) is about 28.96."""
    report = report or eigen_structure(cfg)
    return report.v7 + eigenvectors(cfg)["v2"] / 10


@dataclass(frozen=True)
class SeparationResult:
    alpha: Fraction
    witness: Form
    epsilon: Fraction
    ms_sum: Fraction
    rs_value: Fraction
    witness_value: Fraction
    sphere_min: float | None = None
    round_base: bool | None = None

    def to_json(self) -> dict:
        from .exact import rational_str
        from .forms import form_to_json

        return {
            "alpha": rational_str(self.alpha),
            "epsilon": rational_str(self.epsilon),
            "witness": form_to_json(self.witness),
            "ms_sum": rational_str(self.ms_sum),
            "rs_value": rational_str(self.rs_value),
            "witness_value": rational_str(self.witness_value),
            "sphere_min": None if self.sphere_min is None else f"{self.sphere_min:.6e}",
            "base_form_round": self.round_base,
        }


def violation_witness(
    cfg: InequalityConfig, eps=Fraction(1, 10), alpha=15, *, samples: int = 0, seed: int = 0
) -> SeparationResult:
    """p = sum Q_i^2 + eps x1 x2 x3 x4: nonnegative, zero M_S-sum, R_S = eps^2/256.

    Nonnegativity of p is backed by the roundness of sum Q_i^2 and, when
    ``samples`` > 0, by a sphere-sampling minimum; it is not proved here.
    """
    from .certify import roundness_certificate, sphere_minimum
    from .constructions import factored_quadrics

    eps = Fraction(eps)
    qs = factored_quadrics()
    base = sum((q * q for q in qs), Form.zero(4, 4))
    x1, x2, x3, x4 = variables(4)
    p = base + x1 * x2 * x3 * x4 * eps
    ms = functional_MS_quartic(p, cfg.points)
    rs = functional_RS_quartic(p, cfg)
    value = Fraction(alpha) * ms * functional_T_quartic(p) - rs
    unit_base = cfg.points.base
    round_base = roundness_certificate(base, unit_base).valid
    smin = sphere_minimum(p, samples, seed) if samples else None
    return SeparationResult(Fraction(alpha), p, eps, ms, rs, value, smin, round_base)


# -- random draws and numeric searches ---------------------------------------


def random_quadratic(rng: random.Random, n: int = 4, num: int = 20, den: int = 10) -> Form:
    """Coefficients Fraction(randint(-num, num), randint(1, den)) on every monomial."""
    mons = monomial_basis(n, 2)
    return Form(n, 2, {e: Fraction(rng.randint(-num, num), rng.randint(1, den)) for e in mons})


@dataclass(frozen=True)
class SuiteResult:
    alpha: Fraction
    draws: int
    seed: int
    violations: int
    min_value: Fraction
    worst: Form | None

    def to_json(self) -> dict:
        from .exact import rational_str

        return {
            "alpha": rational_str(self.alpha),
            "draws": self.draws,
            "seed": self.seed,
            "violations": self.violations,
            "min_value": rational_str(self.min_value),
        }


def inequality_suite(alpha, draws: int = 1000, seed: int = 0, cfg: InequalityConfig | None = None) -> SuiteResult:
    cfg = cfg or build_inequality_config()
    rng = random.Random(seed)
    alpha = Fraction(alpha)
    worst, worst_val, bad = None, None, 0
    for _ in range(draws):
        g = random_quadratic(rng)
        val = check_inequality(alpha, g, cfg)
        if val < 0:
            bad += 1
        if worst_val is None or val < worst_val:
            worst, worst_val = g, val
    return SuiteResult(alpha, draws, seed, bad, worst_val if worst_val is not None else Fraction(0), worst)


def _float_quadratics(cfg: InequalityConfig):
    m = np.array([[float(x) for x in r] for r in ms_matrix(cfg).tolist()])
    g = np.array([[float(x) for x in r] for r in cfg.ip.gram.tolist()])
    ea = np.array([float(x) for x in monomial_values(cfg.a, 4, 2)])
    eb = np.array([float(x) for x in monomial_values(cfg.b, 4, 2)])
    return m, g, ea, eb


@dataclass(frozen=True)
class AlphaSearch:
    ratio_float: float
    best: Form
    ratio_exact: Fraction | None


def numeric_alpha_search(cfg: InequalityConfig, restarts: int = 40, seed: int = 0) -> AlphaSearch:
    """Maximize R_S/(M_S T) over quadratics by BFGS from random starts."""
    from scipy.optimize import minimize

    m, g, ea, eb = _float_quadratics(cfg)
    rng = np.random.default_rng(seed)

    def neg_ratio(c):
        mm = c @ m @ c
        tt = c @ g @ c
        fa, fb = ea @ c, eb @ c
        r = (fa * fa - fb * fb) ** 2
        return -r / (mm * tt + 1e-300)

    best_c, best = None, -np.inf
    for _ in range(restarts):
        c0 = rng.standard_normal(m.shape[0])
        res = minimize(neg_ratio, c0, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
        c = res.x / np.linalg.norm(res.x)
        if -neg_ratio(c) > best:
            best, best_c = -neg_ratio(c), c
    form = _rationalize(best_c)
    return AlphaSearch(float(best), form, ratio(form, cfg))


def _rationalize(c: np.ndarray, max_den: int = 10**4) -> Form:
    c = c / np.max(np.abs(c))
    return Form.from_vector(4, 2, [Fraction(float(x)).limit_denominator(max_den) for x in c])


def find_violation(alpha, cfg: InequalityConfig, restarts: int = 40, seed: int = 0) -> tuple[Form, Fraction] | None:
    """A quadratic with alpha M_S T - R_S < 0, found numerically and confirmed exactly."""
    search = numeric_alpha_search(cfg, restarts, seed)
    alpha = Fraction(alpha)
    value = check_inequality(alpha, search.best, cfg)
    if value < 0:
        return search.best, value
    return None


# -- general point sets --------------------------------------------------------


def general_rs(p: Form, functionals: Sequence[LinearFunctional]) -> Fraction:
    """sum of l_i(p)^2 over a basis of extra constraints."""
    return sum((l(p) ** 2 for l in functionals), Fraction(0))


def numeric_alpha_estimate(s: PointSet, d: int, restarts: int = 20, seed: int = 0) -> float | None:
    """Non-certified estimate of the best alpha for an arbitrary S.

    Points are normalized to the unit sphere.  Returns None when S has no
    extra constraints (R_S identically zero).
    """
    from scipy.optimize import minimize

    funcs = extra_constraint_basis(s, d)
    if not funcs:
        return None
    n = s.n
    mons = monomial_basis(n, d)
    mons2 = {e: i for i, e in enumerate(monomial_basis(n, 2 * d))}
    k = len(mons)
    # l(g^2) = sum_{a,b} g_a g_b w[a+b]
    lmats = []
    for l in funcs:
        w = [float(x) for x in l.weights]
        lmats.append(np.array([[w[mons2[tuple(x + y for x, y in zip(a, b))]] for b in mons] for a in mons]))
    ip = SphereInnerProduct(n, d, check=False)
    gmat = np.array([[float(x) for x in r] for r in ip.gram.tolist()])
    units = ScaledPointSet.normalized(s)
    evals = []
    for i, t in enumerate(s.points):
        c = float(units.sq_scales[i])
        evals.append(np.array([float(x) for x in monomial_values(t, n, d)]) / c ** (d / 2))
    mmat = sum(np.outer(e, e) for e in evals)
    rng = np.random.default_rng(seed)

    def neg(c):
        r = sum((c @ L @ c) ** 2 for L in lmats)
        return -r / ((c @ mmat @ c) * (c @ gmat @ c) + 1e-300)

    best = 0.0
    for _ in range(restarts):
        res = minimize(neg, rng.standard_normal(k), method="BFGS", options={"maxiter": 2000})
        best = max(best, -float(res.fun))
    return best
