"""Compare the compiled and numpy tensor-assembly kernels.

    python3 benchmarks/bench_kron.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from qsphere import _kron_py

try:
    from qsphere import _kron
except ImportError:
    _kron = None


def random_factors(dims, seed=0):
    rng = np.random.default_rng(seed)
    tgts, vals = [], []
    for d in dims:
        t = np.arange(d) + rng.integers(-1, 2)
        t[(t < 0) | (t >= d)] = -1
        tgts.append(t.astype(np.int64))
        vals.append(rng.uniform(0.1, 1.0, d))
    return tgts, vals


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    cases = [(33, 16, 16, 16), (65, 32, 32, 32), (17, 8, 8, 8, 8, 8)]
    print(f"{'dims':>24} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}")
    for dims in cases:
        tgts, vals = random_factors(dims)
        t_py = min(timeit.repeat(lambda: _kron_py.kron_coo(tgts, vals), number=1,
                                 repeat=args.repeat)) * 1e3
        if _kron is None:
            print(f"{str(dims):>24} {t_py:10.2f} {'n/a':>10} {'':>8}")
            continue
        a, b = _kron_py.kron_coo(tgts, vals), _kron.kron_coo(tgts, vals)
        assert all(np.array_equal(x, y) for x, y in zip(a, b)), "backends disagree"
        t_cy = min(timeit.repeat(lambda: _kron.kron_coo(tgts, vals), number=1,
                                 repeat=args.repeat)) * 1e3
        print(f"{str(dims):>24} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:8.2f}")


if __name__ == "__main__":
    main()
