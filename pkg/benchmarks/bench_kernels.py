"""Time the compiled lattice kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--nu-max 40] [--repeat 3]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from flatspec import lattice
from flatspec.bieberbach import presets


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nu-max", type=Fraction, default=Fraction(40))
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["compiled"] if lattice.BACKEND == "compiled" else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'group':<22}{'kernel':<16}{'points':>9}" + "".join(f"{b:>12}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for name in ("torus-Z3", "hantzsche-wendt", "torus-rect4", "diag4-z2z2"):
        g = presets()[name]
        timings, results = {}, {}
        for b in backends:
            timings[b], results[b] = best_of(args.repeat,
                                             lambda: lattice.enumerate_shells(g.gram_inverse, args.nu_max, b))
        shells = results[backends[0]]
        if len(backends) == 2:
            assert np.array_equal(shells.points, results["compiled"].points)
        row = f"{name:<22}{'short_vectors':<16}{shells.count:>9}" + "".join(f"{timings[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            row += f"{timings['python'] / timings['compiled']:>9.1f}x"
        print(row)

        c = g.cosets[-1]
        bt = [list(col) for col in zip(*c.rotation)]
        den = max(x.denominator for x in c.translation)
        anum = [int(x * den) for x in c.translation]
        for b in backends:
            timings[b], results[b] = best_of(args.repeat,
                                             lambda: lattice.phase_counts(shells, bt, anum, den, b))
        if len(backends) == 2:
            assert np.array_equal(results["python"], results["compiled"])
        row = f"{'':<22}{'residue_counts':<16}{shells.count:>9}" + "".join(f"{timings[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            row += f"{timings['python'] / timings['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
