"""Compare the numba and numpy kernel paths.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qudit_readout import _kernels


def _cases(rng):
    d = 16
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    lam = np.ascontiguousarray(1e-3 * (a + a.conj().T))
    e = np.sort(rng.uniform(-20, 20, d))
    lam2 = np.ascontiguousarray(np.abs(lam) ** 2)
    grid = np.linspace(4.98, 5.02, 200_000)
    e_pair = rng.uniform(-20, 20, 28)
    w_pair = rng.standard_normal(28)
    s = 7.5
    m = s - np.arange(d)
    gam = np.sqrt(s * (s + 1) - m * (m + 1))
    q, _ = np.linalg.qr(a)
    c = np.ascontiguousarray(q.conj().T)
    return {
        "self_energy (200k freqs, 28 pairs)": ("self_energy", (grid, e_pair, w_pair, 1e-4)),
        "second_order (d=16)": ("second_order", (lam, e, 5.0, 1e-9)),
        "state_shifts (d=16)": ("state_shifts", (lam2, e, complex(5.0, 1e-4), 1.6e14)),
        "lambda_explicit (S=15/2)": ("lambda_explicit", (c, m, gam, 0.1, 0.2, 0.3)),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s}")
    for label, (name, call_args) in _cases(rng).items():
        fast = getattr(_kernels, f"{name}_numba")
        slow = getattr(_kernels, f"{name}_numpy")
        fast(*call_args)  # compile
        ref, out = slow(*call_args), fast(*call_args)
        for x, y in zip(np.atleast_1d(ref) if name != "second_order" else ref,
                        np.atleast_1d(out) if name != "second_order" else out):
            assert np.allclose(x, y, rtol=1e-10, atol=1e-20), label
        n = 3
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=n, repeat=args.repeat)) / n
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=n, repeat=args.repeat)) / n
        print(f"{label:38s} {t_fast * 1e3:12.3f} {t_slow * 1e3:12.3f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
