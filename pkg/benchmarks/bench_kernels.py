"""Compiled kernel vs numpy fallback on the orbit sweep and the hull.

    python3 benchmarks/bench_kernels.py [--steps 64] [--repeat 5]

Prints one row per (operation, batch size) with the best-of-``repeat``
timing of each backend and their ratio. Results are checked to agree
before timing.
"""

import argparse
import timeit

import numpy as np

from forcing_lab.rotation import backend
from forcing_lab.rotation.lift import TorusLift

LIFT = {"composition": [{"type": "hshear", "profile": "sine", "amplitude": 0.4},
                        {"type": "vshear", "profile": "sine", "amplitude": 0.4}]}


def sweep(g, Z, steps, kern):
    st = g.state(Z)
    g.advance(st, steps, kern)
    return st


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 256, 4096, 65536])
    args = ap.parse_args(argv)

    if "compiled" not in backend.BACKENDS:
        print("compiled kernel not built; only the numpy fallback is available")
        return 1
    py, cc = backend.BACKENDS["python"], backend.BACKENDS["compiled"]
    g = TorusLift.from_dict(LIFT)
    rng = np.random.default_rng(0)
    print(f"{'operation':<10} {'size':>7} {'numpy [ms]':>11} {'compiled [ms]':>14} {'speedup':>8}")
    for size in args.sizes:
        Z = rng.random((size, 2))
        a, b = sweep(g, Z, args.steps, py), sweep(g, Z, args.steps, cc)
        assert all(np.allclose(u, v, atol=1e-9) for u, v in zip(a, b))
        t_py = min(timeit.repeat(lambda: sweep(g, Z, args.steps, py), number=1, repeat=args.repeat))
        t_cc = min(timeit.repeat(lambda: sweep(g, Z, args.steps, cc), number=1, repeat=args.repeat))
        print(f"{'sweep':<10} {size:>7} {1e3 * t_py:>11.3f} {1e3 * t_cc:>14.3f} {t_py / t_cc:>8.2f}")
    for size in args.sizes:
        P = rng.normal(size=(size, 2))
        P = np.ascontiguousarray(P[np.lexsort((P[:, 1], P[:, 0]))])
        assert list(py.hull_sorted(P)) == list(cc.hull_sorted(P))
        t_py = min(timeit.repeat(lambda: py.hull_sorted(P), number=1, repeat=args.repeat))
        t_cc = min(timeit.repeat(lambda: cc.hull_sorted(P), number=1, repeat=args.repeat))
        print(f"{'hull':<10} {size:>7} {1e3 * t_py:>11.3f} {1e3 * t_cc:>14.3f} {t_py / t_cc:>8.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
