"""Command line front end: ``sosgap dims|verify|gap|inequality|construct``.

Reports are JSON with rationals as "num/den" strings and sorted keys, so
identical inputs and seeds give byte-identical output.  Wall-clock timing is
only included with ``--timing``.  The exit status is 1 when any exact check
fails; heuristic checks are listed but never fail a run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Any, Callable

from . import apolar, certify, constructions, gaps, ideals
from .exact import Matrix, kernel_basis, rank, rational_str
from .forms import PARAM, Form, UnivariatePoly, form_to_json, form_to_terms, restrict_to_line, variables


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Form):
        return form_to_terms(x)
    if isinstance(x, UnivariatePoly):
        return [rational_str(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    if hasattr(x, "value"):
        return x.value
    return str(x)


def dumps(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    exact: bool = True

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "kind": "exact" if self.exact else "heuristic",
            "verdict": "pass" if self.passed else "fail",
        }


class Report:
    def __init__(self, argv: list[str], inputs: Any = None):
        self.argv = argv
        self.inputs = inputs
        self.checks: list[Check] = []
        self.result: dict = {}

    def check(self, name: str, expected: Any, actual: Any, exact: bool = True) -> Check:
        c = Check(name, expected, actual, exact)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.exact)

    def to_json(self, timing: float | None = None) -> dict:
        digest = hashlib.sha256(json.dumps(_jsonable(self.inputs), sort_keys=True).encode()).hexdigest()
        out = {
            "command": self.argv,
            "inputs_digest": digest,
            "checks": [c.to_json() for c in self.checks],
            "result": _jsonable(self.result),
            "status": "pass" if self.ok else "fail",
        }
        if timing is not None:
            out["timing_seconds"] = f"{timing:.3f}"
        return out


def default_seed() -> int:
    return int(os.environ.get("SOSGAP_SEED", "0"))


# -- dims --------------------------------------------------------------------


def dims_summary(s: ideals.PointSet, d: int) -> dict:
    i1 = ideals.vanishing_space(s, d)
    i2 = ideals.double_vanishing_space(s, 2 * d)
    sq = ideals.squares_span(s, d)
    return {
        "dim_I1": i1.dim,
        "dim_I2": i2.dim,
        "dim_squares": sq.dim,
        "ah_expected": ideals.expected_dimension_ah(s.n, 2 * d, len(s)),
        "gap": i2.dim - sq.dim,
    }


def cmd_dims(args, report: Report) -> None:
    with open(args.points) as fh:
        obj = json.load(fh)
    s = ideals.PointSet.from_json(obj)
    report.inputs = {"points": s.to_json(), "degree": args.degree}
    report.result = dims_summary(s, args.degree)


# -- verify ------------------------------------------------------------------


def _proportional(p: Form, q: Form) -> bool:
    return p.is_proportional_to(q)


def verify_six_points(report: Report) -> None:
    s = constructions.six_points()
    dims = dims_summary(s, 2)
    report.check("dim I_1,2(S)", 4, dims["dim_I1"])
    report.check("dim squares span I^[2]_4(S)", 10, dims["dim_squares"])
    report.check("dim I_2,4(S)", 11, dims["dim_I2"])
    report.check("gap", 1, dims["gap"])
    report.check("Alexander-Hirschowitz expected dimension", 11, dims["ah_expected"])
    qs = constructions.factored_quadrics()
    i1 = ideals.vanishing_space(s, 2)
    report.check("factored quadrics form a basis of I_1,2(S)", True, all(q in i1 for q in qs) and rank(Matrix([q.coefficient_vector() for q in qs])) == 4)
    verdict = ideals.check_d_independence(s, 2, seed=default_seed())
    report.check("condition (2) codimensions", [9] * 6, list(verdict.per_point_codimension))
    report.check("condition (1)", "ProvenExact", verdict.condition1.status.value)
    report.check("2-independent", True, verdict.d_independent)
    q = certify.sum_of_squares(qs, 4, 4)
    report.check("sum of Q_i^2 is round at every point", True, certify.roundness_certificate(q, s).valid)
    x1, x2, x3, x4 = variables(4)
    r = x1 * x2 * x3 * x4
    report.check("x1x2x3x4 double vanishes on S", True, r in ideals.double_vanishing_space(s, 4))
    report.check("x1x2x3x4 outside the squares span", False, r in ideals.squares_span(s, 2))

    def constraint(p):
        return 16 * p((1, 0, 0, 0)) - p((1, -1, -1, -1))

    prods = ideals.pairwise_products(list(qs))
    report.check("16p(e1) = p(1,-1,-1,-1) on every Q_iQ_j", [Fraction(0)] * 10, [constraint(p) for p in prods])
    report.check("constraint fails on x1x2x3x4", True, constraint(r) != 0)
    report.check("number of extra constraints", 1, len(ideals.extra_constraint_basis(s, 2)))
    cfg = constructions.build_six_point_config(s)
    e = [tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4)]
    report.check("normals u_i are the standard basis", e, [tuple(u) for u in cfg.u])
    pattern = [tuple(Fraction(1 if j == i else -1) for j in range(4)) for i in range(4)]
    report.check(
        "normals v_i proportional to the (1,-1,-1,-1) pattern",
        True,
        all(kernel_basis(Matrix([v, w])).cols == 3 for v, w in zip(cfg.v, pattern)),
    )
    report.check("R proportional to x1x2x3x4", True, _proportional(cfg.r_form, r))
    report.check("six-point prover: no extra common zeros", True, constructions.prove_condition1_sixpoints(cfg))
    report.check(
        "extra-constraint residuals vanish on every Q_iQ_j",
        True,
        all(all(x == 0 for x in constructions.extra_constraint_residuals(cfg, p)) for p in constructions.build_products_basis(cfg)),
    )
    report.check("extra-constraint residuals nonzero on R", True, all(x != 0 for x in constructions.extra_constraint_residuals(cfg, cfg.r_form)))
    report.result = {"dims": dims, "u": cfg.u, "v": cfg.v, "residuals_R": constructions.extra_constraint_residuals(cfg, cfg.r_form)}


def verify_seven_points(report: Report) -> None:
    cfg = constructions.build_seven_point_config()
    s = cfg.points
    dims = dims_summary(s, 2)
    report.check("dim I_1,2(S')", 3, dims["dim_I1"])
    report.check("dim squares span I^[2]_4(S')", 6, dims["dim_squares"])
    report.check("dim I_2,4(S')", 7, dims["dim_I2"])
    report.check("Alexander-Hirschowitz expected dimension", 7, dims["ah_expected"])
    report.check("Q_i(1,1,1,1)", [Fraction(-2)] * 4, [q((1, 1, 1, 1)) for q in cfg.q_basis])
    x1, x2, x3, x4 = variables(4)
    r3 = (x3 - x4) * (x3 + x4 - x1 - x2)
    report.check("R_3 = (x3-x4)(x3+x4-x1-x2)", True, cfg.r_basis[2] == r3)
    ok2, codims, witnesses = ideals.check_condition2(s, 2)
    k = s.index_of((1, 1, 0, 0))
    w = (x1 - x2) ** 2 - (x3 - x4) ** 2
    report.check("condition (2) fails", False, ok2)
    report.check("failure at (1,1,0,0) with witness (x1-x2)^2-(x3-x4)^2", True, k in witnesses and _proportional(witnesses[k], w))
    line = [PARAM, 1, 1, 1]
    xpoly = UnivariatePoly.x() - 1
    f1l, f2l = restrict_to_line(cfg.f1, line), restrict_to_line(cfg.f2, line)
    report.check("F1 on (x,1,1,1)", xpoly**4 * 3, f1l)
    report.check("F2 on (x,1,1,1)", xpoly**3 * (UnivariatePoly.x() - 9), f2l)
    viol = certify.nonneg_violation_on_line(cfg.f1, cfg.f2, line, Fraction(1, 1000))
    report.check("F1 + F2/1000 negative on the line", True, viol.value_sign_change)
    report.check("F1 double vanishes on S'", True, cfg.f1 in ideals.double_vanishing_space(s, 4))
    report.check("F2 outside the squares span", False, cfg.f2 in ideals.squares_span(s, 2))
    report.check("number of extra constraints", 1, len(ideals.extra_constraint_basis(s, 2)))
    common = (Fraction(1), Fraction(2), Fraction(2), Fraction(1))
    report.check("(1,2,2,1) is not a common zero of R_1, R_2, R_3", True, any(r(common) != 0 for r in cfg.r_basis))
    report.result = {"dims": dims, "line_violation": viol.to_json(), "condition2_codimensions": list(codims)}


def verify_partitions(report: Report, n: int, d: int) -> None:
    cfg = constructions.build_partition_config(n, d)
    s = cfg.points
    report.check("|S|", comb(n + d - 1, d) - n, len(s))
    report.check("Q_i basis rank", n, rank(Matrix([q.coefficient_vector() for q in cfg.qi_basis])))
    e = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    report.check(
        "Q_i(e_j) = d! [i = j]",
        [[Fraction(factorial(d) if i == j else 0) for j in range(n)] for i in range(n)],
        [[q(ej) for ej in e] for q in cfg.qi_basis],
    )
    report.check("condition (1) by enumeration", True, constructions.prove_condition1_partition(cfg))
    ranks = [constructions.singular_matrix_rank(cfg, [int(x) for x in p]) for p in s]
    report.check("rank of B at every point", [n - 1] * len(s), ranks)
    verdict = ideals.check_d_independence(s, d, seed=default_seed())
    report.check("condition (1)", "ProvenExact", verdict.condition1.status.value)
    report.check("d-independent", True, verdict.d_independent)
    dims = dims_summary(s, d)
    report.check("dim I_1,d", n, dims["dim_I1"])
    report.check("dim squares span", comb(n + 1, 2), dims["dim_squares"])
    report.check("dim I_2,2d matches the expected dimension", dims["ah_expected"], dims["dim_I2"])
    report.check("gap equals G(k)", gaps.g_function(n, d, len(s)), dims["gap"])
    report.result = {"n": n, "d": d, "dims": dims}


def verify_s_n2(report: Report, n: int) -> None:
    s = constructions.build_s_n2(n)
    report.check("|S_n,2|", comb(n, 2) + n, len(s))
    i2 = ideals.double_vanishing_space(s, 4)
    report.check("dim I_2,4(S_n,2)", comb(n, 4), i2.dim)
    quartics = constructions.squarefree_quartics(n)
    report.check("squarefree quartic monomials lie in I_2,4", True, all(q in i2 for q in quartics))
    report.check("dim I_1,2(S_n,2)", 0, ideals.vanishing_space(s, 2).dim)
    report.result = {"n": n, "dims": dims_summary(s, 2), "ah_expected_at_k": ideals.expected_dimension_ah(n, 4, comb(n + 1, 2))}


def verify_inequality(report: Report, seed: int) -> None:
    cfg = apolar.build_inequality_config()
    eig = apolar.eigen_structure(cfg)
    g = eig.gram_pij
    pattern = [
        [10 if i == j else (-2 if not set(a) & set(b) else 1) for j, b in enumerate(apolar.PAIR_LABELS)]
        for i, a in enumerate(apolar.PAIR_LABELS)
    ]
    report.check("Gram matrix of the P_ij", [[Fraction(x) for x in r] for r in pattern], g.tolist())
    report.check("eigenvalue multiplicities (12, 6, 0)", [4, 2, 4], [eig.multiplicities[Fraction(x)] for x in (12, 6, 0)])
    report.check("|P_a - P_b|^2", Fraction(18), eig.diff_norm2)
    report.check("|P_a + P_b|^2", Fraction(22), eig.sum_norm2)
    report.check("|projection v1/6|^2", Fraction(12), eig.projection_norm2)
    report.check("|v7|^2", Fraction(10), eig.v7_norm2)
    alpha = apolar.minimal_alpha(cfg, eig)
    report.check("minimal alpha", Fraction(15), alpha)
    w = apolar.violation_witness(cfg, Fraction(1, 10))
    report.check("violation witness value", Fraction(-1, 25600), w.witness_value)
    suite = apolar.inequality_suite(15, 1000, seed, cfg)
    report.check("alpha = 15 violations over 1000 random quadratics", 0, suite.violations)
    ce = apolar.alpha_counterexample(cfg, eig)
    report.check("alpha = 15 holds at v7 + v2/10", True, apolar.check_inequality(15, ce, cfg) >= 0)
    report.check("alpha = 14 violated by a quadratic", True, apolar.find_violation(14, cfg, seed=seed) is not None)
    report.result = {
        "eigen": eig.to_json(),
        "minimal_alpha": alpha,
        "witness": w.to_json(),
        "suite": suite.to_json(),
        "counterexample_ratio": apolar.ratio(ce, cfg),
    }


_NAMED = re.compile(r"^(partitions|s-n2)[(:]\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)?$")


def cmd_verify(args, report: Report) -> None:
    name = args.name.strip()
    report.inputs = {"name": name, "seed": args.seed}
    if name == "six-points":
        verify_six_points(report)
    elif name == "seven-points":
        verify_seven_points(report)
    elif name == "inequality":
        verify_inequality(report, args.seed)
    else:
        m = _NAMED.match(name)
        if not m:
            raise UsageError(f"unknown example {name!r}")
        kind, a, b = m.group(1), int(m.group(2)), m.group(3)
        if kind == "partitions":
            if b is None:
                raise UsageError("partitions needs n and d, e.g. partitions(4,3)")
            verify_partitions(report, a, int(b))
        else:
            verify_s_n2(report, a)


# -- gap / inequality / construct ---------------------------------------------


def cmd_gap(args, report: Report) -> None:
    report.inputs = {"n": args.n, "d": args.d, "k": args.k, "table": args.table}
    gr = gaps.k_extremes(args.n, args.d, table=args.table)
    report.result = gr.to_json()
    if args.k is not None:
        report.result["G_at_k"] = gaps.g_function(args.n, args.d, args.k)
    report.check("closed form agrees with the scan", True, gaps.threshold_agrees_with_scan(args.n, args.d))


def cmd_inequality(args, report: Report) -> None:
    alpha, eps = Fraction(args.alpha), Fraction(args.epsilon)
    report.inputs = {"alpha": alpha, "draws": args.draws, "seed": args.seed, "epsilon": eps}
    cfg = apolar.build_inequality_config()
    suite = apolar.inequality_suite(alpha, args.draws, args.seed, cfg)
    w = apolar.violation_witness(cfg, eps, alpha)
    report.check(f"no violations at alpha = {rational_str(alpha)}", 0, suite.violations)
    report.check("witness value", -eps * eps / 256, w.witness_value)
    report.result = {"suite": suite.to_json(), "witness": w.to_json(), "minimal_alpha": apolar.minimal_alpha(cfg)}


def config_json(points: ideals.PointSet, forms: list[Form], extra: dict | None = None) -> dict:
    out = points.to_json()
    out["forms"] = [form_to_json(f) for f in forms]
    if extra:
        out.update(extra)
    return out


def cmd_construct(args, report: Report) -> dict:
    what = args.what
    if what == "snd":
        cfg = constructions.build_partition_config(args.args[0], args.args[1])
        return config_json(cfg.points, list(cfg.qi_basis))
    if what == "six-points":
        cfg = constructions.build_six_point_config(constructions.six_points())
        return config_json(
            cfg.points,
            list(cfg.q_forms) + [cfg.r_form],
            {"triples": [list(t) for t in cfg.triples], "u": _jsonable(cfg.u), "v": _jsonable(cfg.v)},
        )
    if what == "seven-points":
        cfg = constructions.build_seven_point_config()
        return config_json(cfg.points, list(cfg.r_basis) + [cfg.f1, cfg.f2])
    if what == "sn2":
        s = constructions.build_s_n2(args.args[0])
        return config_json(s, constructions.squarefree_quartics(args.args[0]))
    raise UsageError(f"unknown construction {what!r}")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sosgap", description="Exact checks for faces of nonnegative and SOS cones.")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sub = p.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("dims", help="dimensions of the vanishing spaces of a point set")
    d.add_argument("--points", required=True, help="PointSet JSON file")
    d.add_argument("--degree", type=int, required=True)

    v = sub.add_parser("verify", help="run the check list of a named example")
    v.add_argument("name", help="six-points | seven-points | partitions(n,d) | s-n2(n) | inequality")
    v.add_argument("--seed", type=int, default=None)

    g = sub.add_parser("gap", help="gap numbers and G(k)")
    g.add_argument("n", type=int)
    g.add_argument("d", type=int)
    g.add_argument("k", type=int, nargs="?")
    g.add_argument("--table", action="store_true")
    g.add_argument("--csv", action="store_true", help="print the G(k) table as CSV instead of JSON")

    i = sub.add_parser("inequality", help="random-draw check of alpha M_S T - R_S >= 0")
    i.add_argument("--alpha", default="15")
    i.add_argument("--draws", type=int, default=1000)
    i.add_argument("--seed", type=int, default=None)
    i.add_argument("--epsilon", default="1/10")

    c = sub.add_parser("construct", help="emit a configuration as JSON")
    c.add_argument("what", choices=["snd", "six-points", "seven-points", "sn2"])
    c.add_argument("args", type=int, nargs="*")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = default_seed()
    start = time.perf_counter()
    report = Report(["sosgap"] + argv)
    handlers: dict[str, Callable] = {
        "dims": cmd_dims,
        "verify": cmd_verify,
        "gap": cmd_gap,
        "inequality": cmd_inequality,
    }
    try:
        if args.cmd == "construct":
            need = {"snd": 2, "sn2": 1}.get(args.what, 0)
            if len(args.args) != need:
                raise UsageError(f"construct {args.what} takes {need} integer argument(s)")
            print(dumps(cmd_construct(args, report)))
            return 0
        if args.cmd == "gap" and args.csv:
            print("k,G")
            for k, val in gaps.g_table(args.n, args.d):
                print(f"{k},{val}")
            return 0
        handlers[args.cmd](args, report)
    except UsageError as exc:
        print(f"sosgap: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"sosgap: {exc}", file=sys.stderr)
        return 2
    timing = time.perf_counter() - start if args.timing else None
    print(dumps(report.to_json(timing)))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
