"""Time the compiled kernels against their pure-numpy twins.

    python bench/bench_kernels.py [--repeat 5]

Each kernel is called once to trigger compilation, then timed with
``timeit`` on identical inputs.  Results are also checked for agreement.
"""

import argparse
import timeit

import numpy as np

from aloha_backscatter import _kernels
from aloha_backscatter.config import EHParams


def cases(rng):
    u = rng.random((200_000, 4))
    q = np.array([0.2, 0.25, 0.3, 0.15])
    yield "slot_successes (2e5 slots, N=4)", (u, q), "slot_successes"

    rbar = np.array([3.0, 5.0, 11.0])
    grid = np.linspace(0.01, 0.99, 99)
    yield "cap_grid (N=3, 99^3 points)", (rbar, grid), "cap_grid"

    n, e = 4, EHParams()
    f = lambda x: np.ascontiguousarray(x, dtype=np.float64)
    args = (
        f(10 ** rng.uniform(-7, -5, n)), f(10 ** rng.uniform(-4, -2, n)), f(10 ** rng.uniform(-2, -1, n)),
        f(10 ** rng.uniform(-3, -2, n)), f(rng.uniform(0.1, 0.3, n)),
        f([e.a] * n), f([e.p_se] * n), f([e.p_sa] * n), f([e.offset] * n), f([1e-3] * n),
        1.0, 1e-8, f(np.linspace(0.2, 1.0, 101)), f(np.linspace(0.0, 1.0, 10_001)),
    )
    yield "rc_grid (N=4, 101 x 10001)", args, "rc_grid"


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s}")
    for label, inputs, name in cases(rng):
        py = getattr(_kernels, f"{name}_numpy")
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat))
        if _kernels.HAVE_NUMBA:
            jit = getattr(_kernels, f"{name}_numba")
            warm = jit(*inputs)
            if not same(warm, py(*inputs)):
                raise SystemExit(f"{name}: backends disagree")
            t_jit = min(timeit.repeat(lambda: jit(*inputs), number=1, repeat=args.repeat))
            print(f"{label:34s} {1e3 * t_py:12.2f} {1e3 * t_jit:12.2f} {t_py / t_jit:8.1f}x")
        else:
            print(f"{label:34s} {1e3 * t_py:12.2f} {'-':>12s} {'-':>9s}")


if __name__ == "__main__":
    main()
