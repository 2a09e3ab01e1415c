"""Compare the numba and numpy backends of the batch form evaluators.

Usage: python3 benchmarks/bench_kernels.py [--samples N] [--repeat R]

Times value and value+gradient evaluation of sum Q_i^2 (the round quartic
on the six 0/1 points) and of a dense random sextic in five variables.
"""

import argparse
import random
import time
from fractions import Fraction

import numpy as np

from sosgap import _kernels
from sosgap.constructions import factored_quadrics
from sosgap.forms import Form, monomial_basis


def sextic(seed=0):
    rng = random.Random(seed)
    return Form(5, 6, {e: Fraction(rng.randint(-9, 9)) for e in monomial_basis(5, 6)})


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = {
        "sum Q_i^2 (n=4, deg 4)": sum((q * q for q in factored_quadrics()), Form.zero(4, 4)),
        "dense sextic (n=5)": sextic(),
    }
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    for name, p in cases.items():
        exps, coeffs = _kernels.form_arrays(p)
        X = _kernels.sphere_directions(p.n, args.samples, seed=0)
        for label, fn in (("eval", _kernels.eval_batch), ("eval+grad", _kernels.eval_grad_batch)):
            t_np = best_of(lambda: fn(exps, coeffs, X, use_numba=False), args.repeat)
            line = f"{name:26s} {label:10s} numpy {t_np * 1e3:8.2f} ms"
            if _kernels.HAVE_NUMBA:
                fn(exps, coeffs, X[:10], use_numba=True)  # compile
                t_nb = best_of(lambda: fn(exps, coeffs, X, use_numba=True), args.repeat)
                a = fn(exps, coeffs, X, use_numba=False)
                b = fn(exps, coeffs, X, use_numba=True)
                a = a if isinstance(a, np.ndarray) else a[1]
                b = b if isinstance(b, np.ndarray) else b[1]
                err = float(np.max(np.abs(a - b)))
                line += f"  numba {t_nb * 1e3:8.2f} ms  speedup {t_np / t_nb:5.1f}x  max diff {err:.1e}"
            print(line)


if __name__ == "__main__":
    main()
