"""Time the numba and numpy builds of each hot kernel on representative sizes.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from quditkit import _kernels as K


def _herm(rng, shape):
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return (a + np.conj(np.swapaxes(a, -1, -2))) / 2


def cases():
    rng = np.random.default_rng(0)
    d, n = 10, 120
    hs = _herm(rng, (n, d, d))
    dhs = _herm(rng, (n, 1, d, d))
    p = np.eye(d, dtype=complex)[:, :1]
    vt = np.eye(d, dtype=complex)[:, -1:]
    yield ("grape d=10 n=120", lambda: K.grape_overlap_grad_numpy(hs, dhs, 0.15, p, vt),
           lambda: K.grape_overlap_grad_numba(hs, dhs, 0.15, p, vt))
    heff = _herm(rng, (6, 6)) - 0.05j * np.eye(6)
    jumps = 0.2 * (rng.normal(size=(2, 6, 6)) + 1j * rng.normal(size=(2, 6, 6)))
    rho = np.eye(6, dtype=complex) / 6
    yield ("rk4 d=6 2000 steps", lambda: K.rk4_lindblad_numpy(heff, jumps, rho, 1e-3, 2000, 2000),
           lambda: K.rk4_lindblad_numba(heff, jumps, rho, 1e-3, 2000, 2000))
    yield ("jump DP s=400 need=5", lambda: K.jump_tail_numpy(400, 5, 1e-3, 1e-5),
           lambda: K.jump_tail_numba(400, 5, 1e-3, 1e-5))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print(f"{'kernel':<24} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, slow, fast in cases():
        fast()  # compile
        t_np = min(timeit.repeat(slow, number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(fast, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<24} {t_np:>10.3f} {t_nb:>10.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
