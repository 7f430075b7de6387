"""Benchmark the compiled kernels against the pure-numpy fallbacks.

Run with: python3 benchmarks/bench_kernels.py [--n N] [--repeats K]
"""
import argparse
import timeit

import numpy as np

from vandiejen import USING_NUMBA, _kernels
from vandiejen.lax import f_vector
from vandiejen.phase_space import Coupling, PhasePoint


def bench(label, fast, slow, args, repeats):
    fast(*args)  # warm up (triggers compilation on the compiled path)
    slow(*args)
    t_fast = min(timeit.repeat(lambda: fast(*args), number=50, repeat=repeats)) / 50
    t_slow = min(timeit.repeat(lambda: slow(*args), number=50, repeat=repeats)) / 50
    print(f"{label:16s}  compiled {t_fast * 1e6:9.1f} us   numpy {t_slow * 1e6:9.1f} us "
          f"  speedup {t_slow / t_fast:5.2f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=16, help="particle count")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not USING_NUMBA:
        raise SystemExit(
            "compiled path disabled (VANDIEJEN_NO_NUMBA set); nothing to compare"
        )

    g = Coupling(0.7, 0.4)
    rng = np.random.default_rng(1)
    xi = 0.3 + 0.4 * np.arange(args.n)[::-1] + 0.05 * rng.uniform(size=args.n)
    p = PhasePoint(xi=np.sort(xi)[::-1], eta=rng.uniform(-1.5, 1.5, args.n))
    f = f_vector(p, g)
    lam = np.concatenate([p.xi, -p.xi])

    print(f"n = {args.n}, repeats = {args.repeats} (best of, 50 calls each)")
    bench("z_coeffs", _kernels.z_coeffs, _kernels.z_coeffs_numpy,
          (p.xi, g.mu, g.nu), args.repeats)
    bench("u_coeffs", _kernels.u_coeffs, _kernels.u_coeffs_numpy,
          (p.xi, g.mu, g.nu), args.repeats)
    bench("lax_entries", _kernels.lax_entries, _kernels.lax_entries_numpy,
          (f, lam, g.mu, g.nu), args.repeats)
    bench("log_u_gradient", _kernels.log_u_gradient, _kernels.log_u_gradient_numpy,
          (p.xi, g.mu, g.nu), args.repeats)
    bench("vector_field", _kernels.vector_field, _kernels.vector_field_numpy,
          (p.xi, p.eta, g.mu, g.nu), args.repeats)


if __name__ == "__main__":
    main()
