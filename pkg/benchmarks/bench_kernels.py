"""Time the Cython kernels against the pure-Python fallback.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from wlcover._kernels import pure

try:
    from wlcover._kernels import _ckernels as fast
except ImportError:
    fast = None

from wlcover.links import whitehead_diagram


def workloads(rng):
    n = 8
    perms = [tuple(rng.sample(range(n), n)) for _ in range(200)]
    two = [tuple(rng.sample(range(n), n)) for _ in range(2)]
    w = whitehead_diagram()
    xs = [(x.over, x.under_in, x.under_out, x.sign) for x in w.arc_crossings]
    x8, y8 = (1, 0, 3, 2, 5, 4, 7, 6), (1, 2, 3, 4, 5, 6, 7, 0)

    def compose(k):
        for p, q in zip(perms, perms[1:]):
            k.compose(p, q)

    def closure(k):
        k.closure([(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)], 1000)

    def propagate(k):
        for _ in range(50):
            imgs = [x8, None, y8, None, None]
            k.propagate(xs, imgs)

    def canonical(k):
        for _ in range(20):
            k.canonical_form(two)

    return {"compose": compose, "closure S5": closure, "propagate W": propagate, "canonical_form": canonical}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    rng = random.Random(0)
    print(f"{'kernel':<16}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, fn in workloads(rng).items():
        tp = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat)) * 1e3
        if fast is None:
            print(f"{name:<16}{tp:>14.3f}{'n/a':>14}{'':>10}")
            continue
        tc = min(timeit.repeat(lambda: fn(fast), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16}{tp:>14.3f}{tc:>14.3f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
