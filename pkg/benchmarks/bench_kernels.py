"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 50,200,1000] [--reps 20]

Both paths are imported in one process: the fallback functions are always
importable, the compiled ones only when numba is present.
"""
import argparse
import statistics
import time

import numpy as np

from hgraphon import _accel, _kernels, bundled_graphon
from hgraphon.montecarlo import trial_seed


def _time(fn, reps):
    fn()  # warm-up (and JIT compile)
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="50,200,1000")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--graphon", default="exp_d")
    args = ap.parse_args()

    W = bundled_graphon(args.graphon)
    bt, pt = W.block_thresholds(), W.probability_thresholds()
    paths = {"numpy": (_kernels._sample_numpy, _kernels._csr_numpy, _kernels._hk_match_py, _kernels._trial_py)}
    if _accel.HAVE_NUMBA:
        paths["numba"] = (_kernels._sample_loop, _kernels._csr_loop, _kernels._hk_match_jit, _kernels._trial_loop)
    else:
        print("numba unavailable or disabled; timing the fallback only")

    print(f"{'n':>6} {'stage':>8} " + " ".join(f"{p:>12}" for p in paths) + ("   speedup" if len(paths) == 2 else ""))
    for n in (int(s) for s in args.sizes.split(",")):
        seed = _kernels.as_seed(trial_seed(0, n, 0))
        _, _, ei, ej = _kernels._sample_numpy(seed, n, bt, pt)
        indptr, indices = _kernels._csr_numpy(n, ei, ej)
        stages = {
            "sample": lambda s, c, m, t: s(seed, n, bt, pt),
            "match": lambda s, c, m, t: m(n, indptr, indices),
            "trial": lambda s, c, m, t: t(seed, n, bt, pt),
        }
        for stage, call in stages.items():
            times = {p: _time(lambda fns=fns: call(*fns), args.reps) for p, fns in paths.items()}
            row = f"{n:>6} {stage:>8} " + " ".join(f"{times[p] * 1e3:>10.3f}ms" for p in paths)
            if len(paths) == 2:
                row += f"   {times['numpy'] / times['numba']:7.1f}x"
            print(row)


if __name__ == "__main__":
    main()
