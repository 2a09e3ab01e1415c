"""Linear spaces of forms attached to a finite point set.

For a point set S and degree d this computes

* the forms of degree d vanishing on S,
* the forms of degree 2d whose gradient vanishes at every point of S,
* the span of squares of the first space,

together with their dimensions and the two conditions of d-independence.
All spaces are exact kernels of constraint matrices over the monomial basis.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact import Matrix, as_vector, kernel_basis, rank, rational_str, row_space_basis, solve
from .forms import Form, monomial_basis, monomial_value, monomial_values

Point = tuple[Fraction, ...]


class PointSetError(ValueError):
    """Invalid point set: zero vector, wrong dimension, or projective duplicate."""


def projective_key(v: Sequence[Fraction]) -> Point:
    """Representative of the line through ``v``: first nonzero coordinate scaled to 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        raise PointSetError("the zero vector is not a projective point")
    return tuple(x / lead for x in v)


@dataclass(frozen=True)
class PointSet:
    n: int
    points: tuple[Point, ...]
    label: str = ""

    def __init__(self, n: int, points: Sequence[Sequence], label: str = ""):
        pts = tuple(as_vector(p) for p in points)
        seen: dict[Point, int] = {}
        for k, p in enumerate(pts):
            if len(p) != n:
                raise PointSetError(f"point {k} has {len(p)} coordinates, expected {n}")
            key = projective_key(p)
            if key in seen:
                raise PointSetError(f"points {seen[key]} and {k} are projectively equal")
            seen[key] = k
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "label", label)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index_of(self, v: Sequence) -> int | None:
        """Index of the point projectively equal to ``v``, if any."""
        key = projective_key(as_vector(v))
        for k, p in enumerate(self.points):
            if projective_key(p) == key:
                return k
        return None

    def projectively_equal(self, other: "PointSet") -> bool:
        return self.n == other.n and {projective_key(p) for p in self} == {projective_key(p) for p in other}

    def scaled(self, factors: Sequence) -> "PointSet":
        factors = as_vector(factors)
        return PointSet(self.n, [[f * x for x in p] for f, p in zip(factors, self.points)], self.label)

    def to_json(self) -> dict:
        return {"n": self.n, "label": self.label, "points": [[rational_str(x) for x in p] for p in self.points]}

    @classmethod
    def from_json(cls, obj) -> "PointSet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            n = int(obj["n"])
            points = obj["points"]
        except (KeyError, TypeError) as exc:
            raise PointSetError(f"malformed point set JSON: {exc}") from exc
        for p in points:
            if any(not isinstance(x, (str, int)) for x in p):
                raise PointSetError("coordinates must be rational strings or integers")
        return cls(n, points, obj.get("label", ""))


@dataclass(frozen=True)
class FormSubspace:
    """A linearly independent list of forms sharing n and degree."""

    n: int
    degree: int
    basis: tuple[Form, ...]

    def __post_init__(self):
        for f in self.basis:
            if f.n != self.n or f.degree != self.degree:
                raise ValueError("basis form has the wrong shape")
        if rank(self.coeff_matrix) != len(self.basis):
            raise ValueError("basis forms are linearly dependent")

    @classmethod
    def from_vectors(cls, n: int, degree: int, vectors: Sequence[Sequence]) -> "FormSubspace":
        return cls(n, degree, tuple(Form.from_vector(n, degree, v) for v in vectors))

    @classmethod
    def spanned_by(cls, n: int, degree: int, forms: Sequence[Form]) -> "FormSubspace":
        """Reduced basis of the span of arbitrary (possibly dependent) forms."""
        if not forms:
            return cls(n, degree, ())
        m = Matrix([f.coefficient_vector() for f in forms], len(monomial_basis(n, degree)))
        rows = row_space_basis(m)
        return cls.from_vectors(n, degree, [rows.row(i) for i in range(rows.rows)])

    @cached_property
    def coeff_matrix(self) -> Matrix:
        """Rows are basis forms, columns are monomials."""
        return Matrix([f.coefficient_vector() for f in self.basis], len(monomial_basis(self.n, self.degree)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(monomial_basis(self.n, self.degree))

    def coordinates(self, p: Form) -> tuple[Fraction, ...] | None:
        """Coefficients of ``p`` in this basis, or None if ``p`` is outside the span."""
        if p.n != self.n or p.degree != self.degree:
            raise ValueError("form has the wrong shape")
        if not self.basis:
            return () if p.is_zero() else None
        return solve(self.coeff_matrix.T, p.coefficient_vector())

    def contains(self, p: Form) -> bool:
        return self.coordinates(p) is not None

    def __contains__(self, p: Form) -> bool:
        return self.contains(p)

    def contains_subspace(self, other: "FormSubspace") -> bool:
        return all(self.contains(f) for f in other.basis)


@dataclass(frozen=True)
class LinearFunctional:
    """Linear functional on forms of one degree, as a coefficient vector over the monomial basis."""

    n: int
    degree: int
    weights: tuple[Fraction, ...]

    def __call__(self, p: Form) -> Fraction:
        if p.n != self.n or p.degree != self.degree:
            raise ValueError("functional applied to a form of the wrong shape")
        return sum((w * c for w, c in zip(self.weights, p.coefficient_vector())), Fraction(0))

    @classmethod
    def point_evaluation(cls, v: Sequence, n: int, degree: int) -> "LinearFunctional":
        return cls(n, degree, monomial_values(v, n, degree))

    def to_json(self) -> dict:
        return {"n": self.n, "degree": self.degree, "weights": [rational_str(w) for w in self.weights]}


def _evaluation_matrix(s: PointSet, d: int) -> Matrix:
    return Matrix([monomial_values(p, s.n, d) for p in s.points], len(monomial_basis(s.n, d)))


def _gradient_rows(v: Point, n: int, d: int) -> list[tuple[Fraction, ...]]:
    basis = monomial_basis(n, d)
    rows = []
    for i in range(n):
        row = []
        for e in basis:
            if not e[i]:
                row.append(Fraction(0))
                continue
            lowered = e[:i] + (e[i] - 1,) + e[i + 1 :]
            row.append(e[i] * monomial_value(lowered, v))
        rows.append(tuple(row))
    return rows


def _kernel_subspace(m: Matrix, n: int, d: int) -> FormSubspace:
    k = kernel_basis(m)
    return FormSubspace.from_vectors(n, d, k.columns())


def vanishing_space(s: PointSet, d: int) -> FormSubspace:
    """Degree-``d`` forms vanishing at every point of ``s``."""
    ncols = len(monomial_basis(s.n, d))
    if not len(s):
        return FormSubspace.from_vectors(s.n, d, Matrix.identity(ncols).columns())
    return _kernel_subspace(_evaluation_matrix(s, d), s.n, d)


def double_vanishing_space(s: PointSet, d2: int) -> FormSubspace:
    """Degree-``d2`` forms with every first partial vanishing on ``s``."""
    if d2 < 2:
        raise ValueError("double vanishing needs degree >= 2")
    ncols = len(monomial_basis(s.n, d2))
    rows = [r for p in s.points for r in _gradient_rows(p, s.n, d2)]
    if not rows:
        return FormSubspace.from_vectors(s.n, d2, Matrix.identity(ncols).columns())
    return _kernel_subspace(Matrix(rows, ncols), s.n, d2)


def pairwise_products(forms: Sequence[Form]) -> list[Form]:
    return [forms[i] * forms[j] for i in range(len(forms)) for j in range(i, len(forms))]


def squares_span(s: PointSet, d: int) -> FormSubspace:
    """Span of squares of ``vanishing_space(s, d)``.

    Spanned by the products q_i q_j (i <= j) of a basis, by polarization.
    """
    q = vanishing_space(s, d).basis
    return FormSubspace.spanned_by(s.n, 2 * d, pairwise_products(q))


def expected_dimension_ah(n: int, d2: int, k: int) -> int:
    """Generic dimension of double-vanishing forms: max(dim P_{n,d2} - n k, 0)."""
    return max(math.comb(n + d2 - 1, d2) - n * k, 0)


# -- d-independence ---------------------------------------------------------


class Condition1(enum.Enum):
    PROVEN_EXACT = "ProvenExact"
    REFUTED_WITH_WITNESS = "RefutedWithWitness"
    UNKNOWN_HEURISTIC_PASSED = "UnknownHeuristicPassed"
    UNKNOWN_HEURISTIC_FAILED = "UnknownHeuristicFailed"


@dataclass(frozen=True)
class Condition1Verdict:
    status: Condition1
    witness: Point | None = None
    method: str = ""

    def to_json(self) -> dict:
        out = {"status": self.status.value, "method": self.method}
        if self.witness is not None:
            out["witness"] = [rational_str(x) for x in self.witness]
        return out


@dataclass(frozen=True)
class IndependenceVerdict:
    condition2_holds: bool
    per_point_codimension: tuple[int, ...]
    required_codimension: int
    condition1: Condition1Verdict
    # forms singular at a failing point and vanishing on the rest of S
    witnesses: dict[int, Form] = field(default_factory=dict)

    @property
    def d_independent(self) -> bool | None:
        """True/False when decided exactly, None when condition (1) is only heuristic."""
        if not self.condition2_holds:
            return False
        if self.condition1.status is Condition1.PROVEN_EXACT:
            return True
        if self.condition1.status is Condition1.REFUTED_WITH_WITNESS:
            return False
        return None


def singular_at_point_space(s: PointSet, d: int, k: int) -> tuple[FormSubspace, int]:
    """Forms vanishing on ``s`` and singular at ``s[k]``, with the constraint codimension."""
    ncols = len(monomial_basis(s.n, d))
    rows = [monomial_values(p, s.n, d) for p in s.points]
    rows += _gradient_rows(s.points[k], s.n, d) if d >= 1 else []
    m = Matrix(rows, ncols)
    return _kernel_subspace(m, s.n, d), rank(m)


def check_condition2(s: PointSet, d: int) -> tuple[bool, tuple[int, ...], dict[int, Form]]:
    required = len(s) + s.n - 1
    codims = []
    witnesses = {}
    for k in range(len(s)):
        space, codim = singular_at_point_space(s, d, k)
        codims.append(codim)
        if codim != required and space.basis:
            witnesses[k] = space.basis[0]
    return all(c == required for c in codims), tuple(codims), witnesses


def check_condition1(s: PointSet, d: int, *, budget: int = 10_000, seed: int = 0) -> Condition1Verdict:
    """Decide condition (1) exactly where a prover applies, else search heuristically."""
    from . import certify, constructions

    prover = constructions.exact_condition1_prover(s, d)
    if prover is not None:
        name, ok = prover()
        if ok:
            return Condition1Verdict(Condition1.PROVEN_EXACT, method=name)
        # the family provers only fail on corrupted input; fall through to the search

    basis = vanishing_space(s, d).basis
    if not basis:
        # no forms at all: every point of projective space is a common zero
        extra = _point_outside(s)
        return Condition1Verdict(Condition1.REFUTED_WITH_WITNESS, extra, "empty vanishing space")
    p = sum((q * q for q in basis), Form.zero(s.n, 2 * d))
    report = certify.heuristic_zero_search(p, s, budget=budget, seed=seed)
    if report.verdict is certify.ZeroSearchVerdict.NO_EXTRA_ZERO_FOUND:
        return Condition1Verdict(Condition1.UNKNOWN_HEURISTIC_PASSED, method="heuristic zero search")
    exact = certify.rationalize_common_zero(basis, report.candidate, s)
    if exact is not None:
        return Condition1Verdict(Condition1.REFUTED_WITH_WITNESS, exact, "heuristic search, exact confirmation")
    return Condition1Verdict(Condition1.UNKNOWN_HEURISTIC_FAILED, method="heuristic zero search")


def _point_outside(s: PointSet) -> Point:
    for c in itertools.count(1):
        for v in itertools.product(range(-c, c + 1), repeat=s.n):
            if any(v) and s.index_of(v) is None:
                return as_vector(v)
    raise AssertionError("unreachable")


def check_d_independence(s: PointSet, d: int, *, budget: int = 10_000, seed: int = 0) -> IndependenceVerdict:
    ok2, codims, witnesses = check_condition2(s, d)
    cond1 = check_condition1(s, d, budget=budget, seed=seed)
    return IndependenceVerdict(ok2, codims, len(s) + s.n - 1, cond1, witnesses)


def extra_constraint_basis(s: PointSet, d: int) -> list[LinearFunctional]:
    """Functionals on P_{n,2d} killing the span of squares but not the double-vanishing space.

    Their number is dim I_{2,2d}(S) - dim I^[2]_{2d}(S); restricted to the
    double-vanishing space they are linearly independent.
    """
    double = double_vanishing_space(s, 2 * d)
    squares = squares_span(s, d)
    ncols = len(monomial_basis(s.n, 2 * d))
    if squares.dim:
        annihilator = kernel_basis(squares.coeff_matrix).columns()
    else:
        annihilator = Matrix.identity(ncols).columns()
    wanted = double.dim - squares.dim
    if wanted <= 0 or not double.basis:
        return []
    # greedily keep functionals whose values on the double-vanishing basis are independent
    chosen: list[tuple[Fraction, ...]] = []
    images: list[tuple[Fraction, ...]] = []
    dmat = double.coeff_matrix
    for w in annihilator:
        img = dmat @ w
        if rank(Matrix(images + [img], dmat.rows)) == len(images) + 1:
            chosen.append(w)
            images.append(img)
            if len(chosen) == wanted:
                break
    return [LinearFunctional(s.n, 2 * d, w) for w in chosen]
