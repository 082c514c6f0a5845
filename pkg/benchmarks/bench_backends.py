#!/usr/bin/env python3
"""Time one Graeffe step with the compiled and the pure-Python kernels.

Usage: python3 benchmarks/bench_backends.py [--degrees 50,100,200,400] [--reps 5]
"""
import argparse
import time

import numpy as np

from rgraeffe import available_backends
from rgraeffe._backend import get_kernels
from rgraeffe.randpoly import gen_kostlan_ren


def time_step(kern, f, reps):
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        kern.graeffe_step(f.mags, f.args, f.k)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--degrees", default="50,100,200,400")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    names = available_backends()
    print("degree," + ",".join(f"{n}_s" for n in names) + (",speedup" if len(names) > 1 else ""))
    for d in (int(x) for x in args.degrees.split(",")):
        f = gen_kostlan_ren(d, args.seed)
        ts = [time_step(get_kernels(n), f, args.reps) for n in names]
        row = [str(d)] + [f"{t:.6f}" for t in ts]
        if len(ts) > 1:
            row.append(f"{ts[names.index('python')] / ts[names.index('cython')]:.1f}")
        print(",".join(row))


if __name__ == "__main__":
    main()
