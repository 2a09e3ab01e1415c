"""Gap arithmetic for faces of the nonnegative and sum-of-squares cones.

For a d-independent set of k points in n variables, the face of nonnegative
forms has dimension C(n+2d-1, 2d) - kn while the sum-of-squares face has
dimension C(N-k+1, 2) with N = C(n+d-1, d).  Their difference G(k) is a
concave quadratic in k.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt


def _check(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")


def space_dim(n: int, degree: int) -> int:
    return comb(n + degree - 1, degree)


def gap_number(n: int, d: int) -> int:
    """C(n+2d-1, 2d) - n C(n+d-1, d) + C(n, 2); may be zero or negative."""
    _check(n, d)
    return space_dim(n, 2 * d) - n * space_dim(n, d) + comb(n, 2)


def k_max(n: int, d: int) -> int:
    """Largest constructible k, C(n+d-1, d) - n."""
    _check(n, d)
    return space_dim(n, d) - n


def g_function(n: int, d: int, k: int) -> int:
    """G(k) = C(n+2d-1, 2d) - kn - C(C(n+d-1, d) - k + 1, 2)."""
    _check(n, d)
    if not 0 <= k <= k_max(n, d):
        raise ValueError(f"k={k} outside the constructible range 0..{k_max(n, d)}")
    return space_dim(n, 2 * d) - k * n - comb(space_dim(n, d) - k + 1, 2)


def k_min_positive_scan(n: int, d: int) -> int | None:
    """Least k with G(k) > 0, by scanning 0..k_max."""
    for k in range(k_max(n, d) + 1):
        if g_function(n, d, k) > 0:
            return k
    return None


def threshold_discriminant(n: int, d: int) -> int:
    """(2n-1)^2 + 8A - 8nN, the discriminant of G(k) > 0 rewritten in m = N - k."""
    a, big_n = space_dim(n, 2 * d), space_dim(n, d)
    return (2 * n - 1) ** 2 + 8 * a - 8 * n * big_n


def threshold_closed_form(n: int, d: int) -> int | None:
    """Smallest integer strictly greater than (2N - 2n + 1 - sqrt(E)) / 2.

    None when E < 0 (G is never positive).  Uses an exact integer square
    root: with r = isqrt(E), sqrt(E) lies in [r, r+1), and equals r exactly
    when E is a perfect square.
    """
    _check(n, d)
    e = threshold_discriminant(n, d)
    if e < 0:
        return None
    c = 2 * space_dim(n, d) - 2 * n + 1
    r = isqrt(e)
    # largest integer t with t < sqrt(E), i.e. the sharp bound used below
    t_max = r - 1 if r * r == e else r
    # k > (c - sqrt(E))/2  <=>  2k - c > -sqrt(E)  <=>  c - 2k < sqrt(E)  <=>  c - 2k <= t_max
    return -((t_max - c) // 2)  # ceil((c - t_max) / 2)


def threshold_agrees_with_scan(n: int, d: int) -> bool:
    scan = k_min_positive_scan(n, d)
    closed = threshold_closed_form(n, d)
    if scan is None:
        return closed is None or closed > k_max(n, d)
    return closed == scan


@dataclass(frozen=True)
class GapReport:
    n: int
    d: int
    gap_max: int
    k_max: int
    k_min_positive: int | None
    closed_form: int | None
    g_values: tuple[tuple[int, int], ...] | None = None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "d": self.d,
            "gap_max": self.gap_max,
            "k_max": self.k_max,
            "k_min_positive": self.k_min_positive,
            "closed_form": self.closed_form,
        }
        if self.g_values is not None:
            out["g_values"] = [{"k": k, "G": g} for k, g in self.g_values]
        return out


def g_table(n: int, d: int) -> tuple[tuple[int, int], ...]:
    return tuple((k, g_function(n, d, k)) for k in range(k_max(n, d) + 1))


def k_extremes(n: int, d: int, *, table: bool = False) -> GapReport:
    """k_max, k_min_positive (scan, cross-checked against the closed form) and the gap."""
    _check(n, d)
    scan = k_min_positive_scan(n, d)
    if not threshold_agrees_with_scan(n, d):
        raise AssertionError(f"closed form and scan disagree for n={n}, d={d}")
    return GapReport(
        n=n,
        d=d,
        gap_max=gap_number(n, d),
        k_max=k_max(n, d),
        k_min_positive=scan,
        closed_form=threshold_closed_form(n, d),
        g_values=g_table(n, d) if table else None,
    )
