"""Compare the compiled and pure Python elimination kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each case is solved by
both kernels; the results must agree before any timing is reported.
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit

from apolar import _kernel_py

try:
    from apolar import _ckernel
except ImportError:
    _ckernel = None


def random_rows(nrows, ncols, rng, density=0.4, lo=-9, hi=9):
    return [[rng.randint(lo, hi) if rng.random() < density else 0 for _ in range(ncols)]
            for _ in range(nrows)]


def contraction_rows(nvars, deg):
    """Rows of the apolar-ideal contraction map of a random degree-``deg``
    polynomial, the shape the package actually eliminates."""
    from apolar.multipoly import Poly, contract_monomial, frame

    rng = random.Random(nvars * 100 + deg)
    f = Poly(nvars, {m: rng.randint(-5, 5) for m in frame(nvars, deg, "upto")})
    labels = frame(nvars, deg, "upto")
    cols = {m: k for k, m in enumerate(labels)}
    rows = []
    for beta in labels:
        row = [0] * len(labels)
        for mono, c in contract_monomial(beta, f).terms.items():
            row[cols[mono]] = int(c)
        rows.append(row)
    return rows, len(labels)


def cases():
    rng = random.Random(1)
    yield "dense 40x40", random_rows(40, 40, rng, density=1.0), 40
    yield "sparse 120x80", random_rows(120, 80, rng), 80
    yield "rank-deficient 60x60", [r for r in random_rows(30, 60, rng) for _ in (0, 1)], 60
    for nvars, deg in ((4, 4), (5, 3)):
        rows, ncols = contraction_rows(nvars, deg)
        yield f"contraction m={nvars} s={deg}", rows, ncols


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    ns = p.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel not built; only the Python kernel is available")
        return 1
    print(f"{'case':28s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, rows, ncols in cases():
        if _kernel_py.echelon(rows, ncols) != _ckernel.echelon(rows, ncols):
            print(f"{name}: kernels disagree")
            return 2
        tp = min(timeit.repeat(lambda: _kernel_py.echelon(rows, ncols), number=1, repeat=ns.repeat))
        tc = min(timeit.repeat(lambda: _ckernel.echelon(rows, ncols), number=1, repeat=ns.repeat))
        print(f"{name:28s} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
