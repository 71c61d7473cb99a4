"""Time the numba kernels against their pure-numpy twins.

Shapes match what a default-grid level norm feeds the kernels
(241 axial rows, 32 x 2 angular/target columns).  Prints one line per
kernel with both timings, the speed ratio and the max abs difference, then
the same for a full ``level_norm`` at level 3.

    python3 benchmarks/bench_kernels.py --repeat 50
"""
import argparse
import timeit

import numpy as np

from scglue import _accel
from scglue.scalespace import DEFAULT_GRID, band_limited_pair, fd_operator, level_norm


def _case_args(rng):
    n, m = 241, DEFAULT_GRID.n_theta * DEFAULT_GRID.N
    f = rng.normal(size=(n, m))
    w = rng.uniform(size=n)
    interior, offset, left, right = fd_operator(2, 4)
    xi = rng.uniform(-1, 1, 4096)
    return {
        "bump_integral": lambda b: _accel.bump_integral(xi, np.ones_like(xi), 1.0, backend=b),
        "stencil_apply": lambda b: _accel.stencil_apply(f, interior, offset, left, right, backend=b),
        "weighted_energy": lambda b: _accel.weighted_energy(f, w, backend=b),
    }


def _time(fn, repeat):
    fn()  # warm-up (JIT compile on first call)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"numba available: {_accel.HAVE_NUMBA}")
    print(f"{'kernel':<18}{'numpy [ms]':>12}{'numba [ms]':>12}{'ratio':>8}{'max diff':>11}")
    for name, call in _case_args(rng).items():
        t_np = _time(lambda: call("numpy"), args.repeat)
        if _accel.HAVE_NUMBA:
            t_nb = _time(lambda: call("numba"), args.repeat)
            diff = float(np.max(np.abs(np.asarray(call("numpy")) - np.asarray(call("numba")))))
            print(f"{name:<18}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>8.2f}{diff:>11.1e}")
        else:
            print(f"{name:<18}{1e3 * t_np:>12.3f}{'-':>12}{'-':>8}{'-':>11}")

    u = band_limited_pair(rng, DEFAULT_GRID)
    saved = _accel.HAVE_NUMBA
    try:
        _accel.HAVE_NUMBA = False
        ref = level_norm(u, 3)
        t_np = _time(lambda: level_norm(u, 3), max(3, args.repeat // 4))
        if saved:
            _accel.HAVE_NUMBA = True
            val = level_norm(u, 3)
            t_nb = _time(lambda: level_norm(u, 3), max(3, args.repeat // 4))
            print(f"{'level_norm(m=3)':<18}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}"
                  f"{t_np / t_nb:>8.2f}{abs(val - ref) / ref:>11.1e}")
    finally:
        _accel.HAVE_NUMBA = saved


if __name__ == "__main__":
    main()
