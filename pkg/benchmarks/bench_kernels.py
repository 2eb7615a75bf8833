"""Compare the compiled and pure-Python lift kernels.

    python benchmarks/bench_kernels.py [--words 20000] [--length 12]

Runs the same random words through both backends, checks they agree and
prints timings.
"""

import argparse
import time

import numpy as np

from sl2reps import _kernels_py
from sl2reps.mat2 import random_sl2

try:
    from sl2reps import _ckernels
except ImportError:  # not built
    _ckernels = None


def make_words(count, length, seed):
    rng = np.random.default_rng(seed)
    words = []
    for _ in range(count):
        mats = [random_sl2(rng).entries() for _ in range(length)]
        ks = [int(k) for k in rng.integers(-2, 3, size=length)]
        words.append((mats, ks))
    return words


def run(module, words):
    t0 = time.perf_counter()
    out = [module.word_lift(mats, ks) for mats, ks in words]
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--words", type=int, default=20000)
    ap.add_argument("--length", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    words = make_words(args.words, args.length, args.seed)
    t_py, out_py = run(_kernels_py, words)
    print(f"python  {t_py:8.3f} s  ({args.words} words of length {args.length})")
    if _ckernels is None:
        print("cython  not built")
        return
    t_c, out_c = run(_ckernels, words)
    worst = max(max(abs(p - q) for p, q in zip(a[:4], b[:4])) for a, b in zip(out_py, out_c))
    same_k = all(a[4] == b[4] for a, b in zip(out_py, out_c))
    print(f"cython  {t_c:8.3f} s  speedup {t_py / t_c:.1f}x")
    print(f"agreement: max entry difference {worst:.2e}, offsets identical: {same_k}")


if __name__ == "__main__":
    main()
