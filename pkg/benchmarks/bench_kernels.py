"""Compare the compiled and numpy kernel backends.

Run from the repository root::

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end A3]

Kernel timings call both implementations directly. The end-to-end timing
runs a full Poincare pairing table in a subprocess per backend, so the
backend switch happens at import as it would for a user.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ellschub import _pykernels

try:
    from ellschub import _ckernels
except ImportError:
    _ckernels = None

Q = complex(np.exp(2j * np.pi * 0.8j))

E2E = """
import time
from ellschub.algebra import DemazureLusztig
from ellschub.duals import elliptic_class, opposite_class, pairing
from ellschub.field import build_field
from ellschub.kernels import BACKEND
F = build_field({label!r}, {rank}, seed=0, count=20)
t0 = time.perf_counter()
dl = DemazureLusztig(F)
E = [elliptic_class(dl, w, 1) for w in range(F.N)]
O = [opposite_class(dl, w, -1) for w in range(F.N)]
for e in E:
    for o in O:
        pairing(e, o)
print(BACKEND, time.perf_counter() - t0)
"""


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_theta(mod, repeat):
    x = np.random.default_rng(0).uniform(-0.5, 0.5, (24, 24, 20)).astype(complex) + 0.1j
    return best(lambda: mod.theta_product(x, Q, 10), repeat, 20)


def bench_fma(mod, repeat, N=24, P=20):
    rng = np.random.default_rng(1)
    a = rng.normal(size=(N, N, P)) + 1j * rng.normal(size=(N, N, P))
    b = rng.normal(size=(N, N, P)) + 1j * rng.normal(size=(N, N, P))
    out = np.zeros_like(a)
    perms = [rng.permutation(N).astype(np.intp) for _ in range(4)]
    return best(lambda: mod.twisted_fma(out, a, perms[0], perms[1], b, perms[2], perms[3]), repeat, 200)


def end_to_end(label, rank, pure):
    env = dict(os.environ)
    env["ELLSCHUB_PURE_PYTHON"] = "1" if pure else "0"
    out = subprocess.run([sys.executable, "-c", E2E.format(label=label, rank=rank)],
                         env=env, capture_output=True, text=True, check=True)
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", default="A2", metavar="TYPE",
                    help="root system for the pairing-table run, e.g. A2 or A3 (empty to skip)")
    args = ap.parse_args(argv)

    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled extension not built; timing the numpy fallback only")
    print(f"{'kernel':<28}" + "".join(f"{name:>14}" for name, _ in mods))
    cases = [
        ("theta_product 24x24x20", bench_theta),
        ("twisted_fma 24x24x20", bench_fma),
        ("twisted_fma 6x6x20", lambda mod, r: bench_fma(mod, r, N=6)),
    ]
    for title, fn in cases:
        times = [fn(mod, args.repeat) for _, mod in mods]
        print(f"{title:<28}" + "".join(f"{t * 1e6:>12.1f}us" for t in times))

    if args.end_to_end:
        label, rank = args.end_to_end[0], int(args.end_to_end[1:])
        for pure in (True, False):
            backend, secs = end_to_end(label, rank, pure)
            print(f"pairing table {args.end_to_end} [{backend}]: {secs:.2f}s")


if __name__ == "__main__":
    main()
