"""Time the compiled kernels against the numpy/Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--scale 1.0]

The built-in sequences produce automata of a few dozen states, where both
backends finish in milliseconds; the random inputs here are sized so that
the kernels dominate.
"""

import argparse
import time

import numpy as np

from syncword import kernels
from syncword.synchro import build_rho_sync
from syncword.sequences import load_dfao


def random_delta(rng, n, K):
    return rng.integers(0, n, size=(n, K)).astype(np.int32)


def kth_from_end(k):
    """NFA for 'the k-th symbol from the end is 1'; its subset automaton has 2^k states."""
    succ = [[[0], [0, 1]]] + [[[s + 1], [s + 1]] for s in range(1, k)] + [[[], []]]
    ptr, idx = [0], []
    for row in succ:
        for targets in row:
            idx.extend(targets)
            ptr.append(len(idx))
    acc = np.zeros(k + 1, dtype=np.uint8)
    acc[k] = 1
    return np.array(ptr, dtype=np.int64), np.array(idx, dtype=np.int64), acc


def cases(scale):
    rng = np.random.default_rng(12345)
    n1 = int(600 * scale)
    d1, d2 = random_delta(rng, n1, 4), random_delta(rng, n1, 4)
    yield "product", lambda impl: impl.product(d1, d2, 0, 0, 10**8)

    k = 16 + int(np.log2(max(scale, 1 / 64)))
    ptr, idx, acc = kth_from_end(k)
    yield "determinize", lambda impl: impl.determinize(ptr, idx, k + 1, 2, np.array([0]), acc, 10**8)

    nr = int(200_000 * scale)
    dr = random_delta(rng, nr, 4)
    labels = rng.integers(0, 2, size=nr).astype(np.int32)
    yield "refine", lambda impl: impl.refine(dr, labels)

    yield "bfs_order", lambda impl: impl.bfs_order(dr, 0)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':<12}" + "".join(f"{b:>12}" for b in backends) + "     speedup")
    for name, run in cases(args.scale):
        t = {b: best_of(lambda: run(impl), args.repeat) for b, impl in backends.items()}
        ratio = f"{t['python'] / t['cython']:>10.1f}x" if "cython" in t else ""
        print(f"{name:<12}" + "".join(f"{t[b]:>11.3f}s" for b in backends) + ratio)
    # end to end on a real build; the automata are small here
    tm = load_dfao("thue_morse")
    t0 = time.perf_counter()
    build_rho_sync(tm)
    print(f"thue_morse complexity build ({kernels.BACKEND}): {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
