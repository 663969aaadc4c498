"""Compare the compiled and pure-Python Jacobi backends.

    python benchmarks/bench_jacobi.py [--repeat 5] [--steps 500]
"""
import argparse
import time

import numpy as np

from kaon_triality import linalg
from kaon_triality import verification as vf


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--steps", type=int, default=500)
    parser.add_argument("--batch", type=int, default=500)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    backends = linalg.available_backends()
    print(f"default backend: {linalg.BACKEND}")
    print(f"{'case':<28}" + "".join(f"{b:>14}" for b in backends))

    for n in (3, 9):
        mats = []
        for _ in range(args.batch):
            z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            mats.append(z + z.conj().T)
        row = []
        for b in backends:
            t = best_of(lambda: [linalg.hermitian_eigen(m, backend=b) for m in mats], args.repeat)
            row.append(t / args.batch * 1e6)
        print(f"{f'eigen {n}x{n} (us/call)':<28}" + "".join(f"{v:>14.1f}" for v in row))

    row = []
    for b in backends:
        cfg = vf.ScanConfig(steps=args.steps, backend=b)
        row.append(best_of(lambda: vf.scan(cfg, path="matrix"), args.repeat) * 1e3)
    print(f"{f'matrix scan {args.steps} pts (ms)':<28}" + "".join(f"{v:>14.1f}" for v in row))


if __name__ == "__main__":
    main()
