"""Benchmark the compiled stepping kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--steps N]

Times the two hot loops on representative workloads: the RK4 propagator
iteration at the detector (d=2) and qutrit (d=4) sizes plus one large case
where BLAS matvecs win, and the collision-model update at the default
doubled-slice size. Reports per-step times and the speedup of the compiled
path where it is available.
"""

import argparse
import math
import time

import numpy as np

from qsc import kernels, noise, open_system
from qsc.operators import ground_state, haar_unitary, random_density, sigma_minus


def timeit(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_propagate(steps):
    rng = np.random.default_rng(0)
    print(f"\npropagate: {steps} steps of v <- phi v")
    print(f"{'dim':>6} {'numpy':>12} {'compiled':>12} {'speedup':>9}")
    for d in (4, 16, 64, 256):
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        m /= np.abs(np.linalg.eigvals(m)).max() * 1.05
        v0 = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        t_py = timeit(lambda: kernels.propagate_py(m, v0, steps))
        if kernels.backend() == "compiled":
            from qsc import _kernels

            mc = np.ascontiguousarray(m)
            vc = np.ascontiguousarray(v0)
            t_c = timeit(lambda: _kernels.propagate(mc, vc, steps))
            print(f"{d:>6} {t_py*1e3:>10.2f}ms {t_c*1e3:>10.2f}ms {t_py/t_c:>8.1f}x")
        else:
            print(f"{d:>6} {t_py*1e3:>10.2f}ms {'n/a':>12} {'':>9}")


def bench_collision(steps):
    print(f"\ncollision model: {steps} fresh-slice updates")
    print(f"{'d_sys*d_env':>12} {'numpy':>12} {'compiled':>12} {'speedup':>9}")
    rng = np.random.default_rng(1)
    for d_sys, d_env in ((2, 4), (2, 9), (3, 9)):
        inc = noise.thermal_increment(1.0, 1e-3, int(round(math.sqrt(d_env))))
        ell = rng.standard_normal((d_sys, d_sys)) + 1j * rng.standard_normal((d_sys, d_sys))
        u = noise.step_unitary(ell, inc) if d_sys == 2 else haar_unitary(rng, d_sys * d_env)
        rho0 = random_density(rng, d_sys)
        t_py = timeit(lambda: kernels.collision_run_py(u, rho0, d_sys, d_env, steps))
        if kernels.backend() == "compiled":
            from qsc import _kernels

            cols = np.ascontiguousarray(u[:, ::d_env])
            r0 = np.ascontiguousarray(rho0)
            t_c = timeit(lambda: _kernels.collision_run(cols, r0, d_sys, d_env, steps))
            print(f"{d_sys}x{d_env:>10} {t_py*1e3:>10.2f}ms {t_c*1e3:>10.2f}ms {t_py/t_c:>8.1f}x")
        else:
            print(f"{d_sys}x{d_env:>10} {t_py*1e3:>10.2f}ms {'n/a':>12} {'':>9}")


def bench_end_to_end():
    print("\nend-to-end: detector master equation, 10^4 RK4 steps (active backend)")
    gen = open_system.detector_generator(1.0, 4 * math.pi)
    t = timeit(lambda: open_system.evolve_master(gen, ground_state(), 1.0, 10**4))
    print(f"  evolve_master: {t*1e3:.2f} ms  [{kernels.backend()}]")
    cfg = noise.SimConfig(dtau=1e-3, steps=1000, occupation=1.0)
    t = timeit(lambda: noise.simulate_qsde(cfg, sigma_minus(), ground_state()))
    print(f"  simulate_qsde: {t*1e3:.2f} ms  [{kernels.backend()}]")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=20000, help="loop length (default 20000)")
    args = ap.parse_args()
    print(f"kernel backend: {kernels.backend()}")
    bench_propagate(args.steps)
    bench_collision(min(args.steps, 5000))
    bench_end_to_end()


if __name__ == "__main__":
    main()
