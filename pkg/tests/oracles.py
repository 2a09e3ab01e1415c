"""Frozen reference values and independent (floating point) oracles.

Values tagged "derived" were computed outside the package: by hand, with
sympy, or by the SVD rank oracle below.  Values in CLAIMED are the stated
reference numbers; some of them are wrong and the
acceptance suite reports those as failures.
"""

import itertools
from fractions import Fraction

import numpy as np

# six 0/1 points with two ones, numbered so the covering triples are 012, 034, 135, 245
SIX = [(0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0)]
SEVEN = SIX + [(1, 1, 1, 1)]

CLAIMED = {
    "six": {"dim_I1": 4, "dim_sq": 10, "dim_I2": 11, "gap": 1},
    "seven": {"dim_I1": 3, "dim_sq": 6, "dim_I2": 7, "extra": 1},
    "ineq": {"diff": 18, "sum": 22, "proj": 12, "v7": 10, "alpha": 15},
}

DERIVED = {
    # sympy rank of the 28 x 35 gradient matrix: the seventh point adds one condition
    "seven_dim_I2": 10,
    "seven_extra": 4,
    # the line (a, b, b, a) lies in the common zero set of R_1, R_2, R_3
    "seven_common_zero": (1, 2, 2, 1),
    # 1^T K 1 = 72 for the P_ij Gram matrix K, so |v1/6|^2 = 72/36
    "ineq_proj": Fraction(2),
    "ineq_v7": Fraction(20),
    "ineq_alpha": Fraction(30),
    # exact ratio of v7 + v2/10
    "counterexample_ratio": Fraction(7500, 259),
    "witness_value": Fraction(-1, 25600),
    "rs_x1x2x3x4": Fraction(1, 256),
    "rs_x1sq": Fraction(225, 256),
    "ms_x1sq": Fraction(3, 4),
    "t_x1sq": Fraction(1, 8),
    "moments": {(2, 0, 0, 0): Fraction(1, 4), (4, 0, 0, 0): Fraction(1, 8), (2, 2, 0, 0): Fraction(1, 24)},
    "g_3_3": [-27, -20, -14, -9, -5, -2, 0, 1],
}


def monomials(n, d):
    return [m for m in itertools.product(range(d + 1), repeat=n) if sum(m) == d]


def _rank(rows, tol=1e-9):
    if not rows:
        return 0
    a = np.array(rows, dtype=float)
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def float_dim_vanishing(points, d):
    n = len(points[0])
    mons = monomials(n, d)
    rows = [[np.prod([float(p[k]) ** m[k] for k in range(n)]) for m in mons] for p in points]
    return len(mons) - _rank(rows)


def float_dim_double_vanishing(points, d2):
    n = len(points[0])
    mons = monomials(n, d2)
    rows = []
    for p in points:
        for i in range(n):
            row = []
            for m in mons:
                if m[i] == 0:
                    row.append(0.0)
                    continue
                row.append(m[i] * np.prod([float(p[k]) ** (m[k] - (k == i)) for k in range(n)]))
            rows.append(row)
    return len(mons) - _rank(rows)
