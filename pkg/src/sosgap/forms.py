"""Homogeneous polynomials (forms) with exact rational coefficients.

Variables are indexed from 0, so ``x1`` in the usual notation is index 0.
Monomials are ordered graded-lexicographically with x1 > x2 > ... , which for
a fixed degree is plain descending lexicographic order on exponent tuples.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .exact import Matrix, as_rational, as_vector, rational_str

Exponent = tuple[int, ...]

MAX_SYMMETRIZE_VARS = 8


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[Exponent, ...]:
    """All exponent vectors of total degree ``d`` in ``n`` variables, graded-lex order."""
    if n < 1 or d < 0:
        raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")

    def rec(k: int, left: int):
        if k == 1:
            yield (left,)
            return
        for a in range(left, -1, -1):
            for rest in rec(k - 1, left - a):
                yield (a,) + rest

    return tuple(rec(n, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Mapping[Exponent, int]:
    return MappingProxyType({e: i for i, e in enumerate(monomial_basis(n, d))})


def monomial_value(e: Exponent, v: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for a, x in zip(e, v):
        if a:
            out *= x**a
    return out


def monomial_values(v: Sequence, n: int, d: int) -> tuple[Fraction, ...]:
    """Values of every degree-``d`` monomial at ``v``, in basis order."""
    v = as_vector(v)
    return tuple(monomial_value(e, v) for e in monomial_basis(n, d))


class Form:
    """A form in ``n`` variables of a fixed degree.

    Coefficients live in a sparse map from exponent tuples to Fractions; zero
    coefficients are never stored.  The zero form keeps its degree so that it
    can still take part in subspace bookkeeping.
    """

    __slots__ = ("n", "degree", "_coeffs", "_hash")

    def __init__(self, n: int, degree: int, coeffs: Mapping[Exponent, object] | None = None):
        if n < 1 or degree < 0:
            raise ValueError(f"need n >= 1 and degree >= 0, got n={n}, degree={degree}")
        clean: dict[Exponent, Fraction] = {}
        for e, c in (coeffs or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != n or any(a < 0 for a in e) or sum(e) != degree:
                raise ValueError(f"exponent {e} does not fit n={n}, degree={degree}")
            c = as_rational(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.n = n
        self.degree = degree
        self._coeffs = clean
        self._hash = None

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int, degree: int) -> "Form":
        return cls(n, degree)

    @classmethod
    def constant(cls, n: int, c=1) -> "Form":
        return cls(n, 0, {(0,) * n: c})

    @classmethod
    def variable(cls, i: int, n: int) -> "Form":
        e = [0] * n
        e[i] = 1
        return cls(n, 1, {tuple(e): 1})

    @classmethod
    def monomial(cls, e: Sequence[int], c=1) -> "Form":
        return cls(len(e), sum(e), {tuple(e): c})

    @classmethod
    def from_vector(cls, n: int, degree: int, vec: Sequence) -> "Form":
        basis = monomial_basis(n, degree)
        if len(vec) != len(basis):
            raise ValueError("coefficient vector has the wrong length")
        return cls(n, degree, dict(zip(basis, vec)))

    # data ---------------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._coeffs)

    def terms(self) -> list[tuple[Exponent, Fraction]]:
        """Nonzero terms in graded-lex order."""
        return sorted(self._coeffs.items(), reverse=True)

    def coefficient(self, e: Sequence[int]) -> Fraction:
        return self._coeffs.get(tuple(e), Fraction(0))

    def coefficient_vector(self) -> tuple[Fraction, ...]:
        return tuple(self._coeffs.get(e, Fraction(0)) for e in monomial_basis(self.n, self.degree))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            return self.n == other.n and self.degree == other.degree and self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)) and other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.degree, frozenset(self._coeffs.items())))
        return self._hash

    def is_proportional_to(self, other: "Form") -> bool:
        """True if ``other`` is a nonzero rational multiple of ``self``."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self._coeffs.keys() != other._coeffs.keys():
            return False
        e0 = next(iter(self._coeffs))
        r = other._coeffs[e0] / self._coeffs[e0]
        return all(other._coeffs[e] == r * c for e, c in self._coeffs.items())

    # arithmetic ---------------------------------------------------------

    def _check_compatible(self, other: "Form") -> None:
        if self.n != other.n:
            raise ValueError(f"variable count mismatch {self.n} != {other.n}")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch {self.degree} != {other.degree}")

    def __add__(self, other) -> "Form":
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, Form):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Form(self.n, self.degree, out)

    __radd__ = __add__

    def __neg__(self) -> "Form":
        return Form(self.n, self.degree, {e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other) -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Form":
        if isinstance(other, Form):
            return multiply(self, other)
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return Form(self.n, self.degree, {e: c * v for e, v in self._coeffs.items()})

    def __rmul__(self, other) -> "Form":
        return self.__mul__(other)

    def __truediv__(self, other) -> "Form":
        c = as_rational(other)
        return self * (1 / c)

    def __pow__(self, k: int) -> "Form":
        if k < 0:
            raise ValueError("negative powers are not forms")
        out = Form.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # calculus -----------------------------------------------------------

    def __call__(self, v: Sequence) -> Fraction:
        return evaluate(self, v)

    def partial(self, i: int) -> "Form":
        return partial(self, i)

    def gradient(self) -> list["Form"]:
        return [partial(self, i) for i in range(self.n)]

    def gradient_at(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(partial(self, i)(v) for i in range(self.n))

    def hessian_at(self, v: Sequence) -> Matrix:
        return hessian_at(self, v)

    # text ---------------------------------------------------------------

    def to_terms(self) -> list[str]:
        return form_to_terms(self)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms():
            mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Form(n={self.n}, degree={self.degree}, {self})"


def evaluate(p: Form, v: Sequence) -> Fraction:
    v = as_vector(v)
    if len(v) != p.n:
        raise ValueError(f"point has {len(v)} coordinates, form has {p.n} variables")
    return sum((c * monomial_value(e, v) for e, c in p._coeffs.items()), Fraction(0))


def partial(p: Form, i: int) -> Form:
    """Derivative with respect to variable ``i`` (0-based)."""
    if not 0 <= i < p.n:
        raise IndexError(f"variable index {i} out of range for n={p.n}")
    if p.degree == 0:
        return Form.zero(p.n, 0)
    out: dict[Exponent, Fraction] = {}
    for e, c in p._coeffs.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return Form(p.n, p.degree - 1, out)


def hessian_at(p: Form, v: Sequence) -> Matrix:
    """Exact matrix of second partials at ``v``."""
    v = as_vector(v)
    if len(v) != p.n:
        raise ValueError("dimension mismatch")
    if p.degree < 2:
        return Matrix.zeros(p.n, p.n)
    grads = [partial(p, i) for i in range(p.n)]
    h = [[Fraction(0)] * p.n for _ in range(p.n)]
    for i in range(p.n):
        for j in range(i, p.n):
            h[i][j] = h[j][i] = partial(grads[i], j)(v)
    return Matrix(h, p.n)


def multiply(p: Form, q: Form) -> Form:
    if p.n != q.n:
        raise ValueError(f"variable count mismatch {p.n} != {q.n}")
    out: dict[Exponent, Fraction] = {}
    for e, a in p._coeffs.items():
        for f, b in q._coeffs.items():
            g = tuple(x + y for x, y in zip(e, f))
            out[g] = out.get(g, Fraction(0)) + a * b
    return Form(p.n, p.degree + q.degree, out)


def product(forms: Iterable[Form], n: int | None = None) -> Form:
    forms = list(forms)
    if not forms:
        if n is None:
            raise ValueError("empty product needs n")
        return Form.constant(n, 1)
    out = forms[0]
    for f in forms[1:]:
        out = out * f
    return out


def linear_form(coeffs: Sequence) -> Form:
    """The form ``<x, coeffs>``."""
    coeffs = as_vector(coeffs)
    n = len(coeffs)
    return Form(n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})


def variables(n: int) -> list[Form]:
    return [Form.variable(i, n) for i in range(n)]


def norm_squared_form(n: int) -> Form:
    """x1^2 + ... + xn^2."""
    return sum((x * x for x in variables(n)), Form.zero(n, 2))


def substitute(p: Form, images: Sequence[Form]) -> Form:
    """Compose: replace variable ``i`` by the linear form ``images[i]``."""
    if len(images) != p.n:
        raise ValueError("need one image per variable")
    m = images[0].n
    if any(f.n != m or f.degree != 1 for f in images):
        raise ValueError("images must be linear forms in a common variable set")
    out = Form.zero(m, p.degree)
    powers: dict[tuple[int, int], Form] = {}
    for e, c in p._coeffs.items():
        term = Form.constant(m, c)
        for i, a in enumerate(e):
            if a:
                key = (i, a)
                if key not in powers:
                    powers[key] = images[i] ** a
                term = term * powers[key]
        out = out + term
    return out


def permute(p: Form, perm: Sequence[int]) -> Form:
    """The form ``x -> p(x_{perm[0]}, ..., x_{perm[n-1]})``."""
    out = {}
    for e, c in p._coeffs.items():
        f = [0] * p.n
        for i, a in enumerate(e):
            f[perm[i]] += a
        out[tuple(f)] = c
    return Form(p.n, p.degree, out)


def symmetrize(p: Form) -> Form:
    """Average of ``p`` over all coordinate permutations."""
    if p.n > MAX_SYMMETRIZE_VARS:
        raise ValueError(f"symmetrize enumerates n! permutations; n={p.n} exceeds {MAX_SYMMETRIZE_VARS}")
    total: dict[Exponent, Fraction] = {}
    count = 0
    for perm in itertools.permutations(range(p.n)):
        count += 1
        for e, c in p._coeffs.items():
            f = [0] * p.n
            for i, a in enumerate(e):
                f[perm[i]] += a
            f = tuple(f)
            total[f] = total.get(f, Fraction(0)) + c
    return Form(p.n, p.degree, {e: c / count for e, c in total.items()})


# -- univariate restriction --------------------------------------------------


class _LineParameter:
    def __repr__(self) -> str:
        return "PARAM"


PARAM = _LineParameter()


class UnivariatePoly:
    """Polynomial in one variable, coefficients by ascending power."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = [as_rational(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "UnivariatePoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UnivariatePoly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def _coerce(self, other) -> "UnivariatePoly":
        return other if isinstance(other, UnivariatePoly) else UnivariatePoly.constant(other)

    def __add__(self, other) -> "UnivariatePoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        k = max(len(a), len(b))
        return UnivariatePoly(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(k)]
        )

    __radd__ = __add__

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UnivariatePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UnivariatePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UnivariatePoly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UnivariatePoly":
        out = UnivariatePoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UnivariatePoly.constant(other)
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[str(c) for c in self.coeffs]})"


def restrict_to_line(p: Form, template: Sequence) -> UnivariatePoly:
    """Substitute constants for all but one variable.

    ``template`` has one entry per variable: a rational constant, or
    :data:`PARAM` for the single free slot.
    """
    if len(template) != p.n:
        raise ValueError("template length must equal the number of variables")
    slots = [i for i, t in enumerate(template) if t is PARAM]
    if len(slots) != 1:
        raise ValueError(f"template needs exactly one PARAM slot, found {len(slots)}")
    k = slots[0]
    consts = [Fraction(0) if i == k else as_rational(t) for i, t in enumerate(template)]
    out = [Fraction(0)] * (p.degree + 1)
    for e, c in p._coeffs.items():
        val = c
        for i, a in enumerate(e):
            if i != k and a:
                val *= consts[i] ** a
        out[e[k]] += val
    return UnivariatePoly(out)


# -- canonical text ----------------------------------------------------------

_TERM_RE = re.compile(r"^\s*(-?\d+)/(\d+)\s*\*\s*(.+?)\s*$")
_POW_RE = re.compile(r"^x(\d+)\^(\d+)$")


def form_to_terms(p: Form) -> list[str]:
    """Canonical text: one "num/den * x1^a1*...*xn^an" string per term, graded-lex order."""
    return [
        f"{rational_str(c)} * " + "*".join(f"x{i + 1}^{a}" for i, a in enumerate(e))
        for e, c in p.terms()
    ]


def form_to_json(p: Form) -> dict:
    return {"n": p.n, "degree": p.degree, "terms": form_to_terms(p)}


def form_from_json(obj: Mapping) -> Form:
    n, degree = int(obj["n"]), int(obj["degree"])
    coeffs: dict[Exponent, Fraction] = {}
    for term in obj["terms"]:
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"malformed term {term!r}")
        c = Fraction(int(m.group(1)), int(m.group(2)))
        e = [0] * n
        for piece in m.group(3).split("*"):
            pm = _POW_RE.match(piece.strip())
            if not pm:
                raise ValueError(f"malformed monomial in {term!r}")
            i = int(pm.group(1)) - 1
            if not 0 <= i < n:
                raise ValueError(f"variable x{i + 1} out of range in {term!r}")
            e[i] += int(pm.group(2))
        coeffs[tuple(e)] = c
    return Form(n, degree, coeffs)


def binomial_dim(n: int, d: int) -> int:
    """dim P_{n,d}."""
    return math.comb(n + d - 1, d)
