"""Time the compiled Jost propagator against the numpy fallback.

    python benchmarks/bench_jost.py [--repeat N] [--points M]

Both backends receive identical inputs; the script also reports the largest
difference between their results on the real axis.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from dnls_painleve import _jost_py
from dnls_painleve.scattering import JostSolver, headline_datum

try:
    from dnls_painleve import _jost_ext
except ImportError:  # extension not built
    _jost_ext = None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=64, help="spectral points per batch")
    args = ap.parse_args()

    solver = JostSolver(headline_datum(L=18))
    qa, qb = solver._fw
    z = np.linspace(1.05, 8.0, args.points).astype(complex)
    y0 = solver._ys(z, -1.0)
    backends = {"python": _jost_py.propagate}
    if _jost_ext is not None:
        backends["cython"] = _jost_ext.propagate
    else:
        print("compiled extension not available; timing the numpy path only")

    print(f"grid steps {qa.size}, spectral points {args.points}, best of {args.repeat}")
    times, results = {}, {}
    for name, fn in backends.items():
        results[name] = fn(qa, qb, solver.h, z, y0)
        times[name] = min(timeit.repeat(lambda fn=fn: fn(qa, qb, solver.h, z, y0), number=1, repeat=args.repeat))
        print(f"  {name:7s} {times[name] * 1e3:9.2f} ms   {times[name] / args.points * 1e6:8.1f} us/point")
    if len(backends) == 2:
        diff = np.max(np.abs(results["python"] - results["cython"]))
        print(f"speed-up {times['python'] / times['cython']:.1f}x, max |difference| {diff:.2e}")


if __name__ == "__main__":
    main()
