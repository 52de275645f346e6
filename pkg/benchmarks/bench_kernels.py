"""Time every kernel through its numba and numpy paths on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Outputs are checked for equality before timings are trusted.  The first jit
call per kernel is a warm-up, so compile time is excluded.
"""
import time

import click
import numpy as np

from stampforge import kernels
from stampforge._jit import HAVE_NUMBA
from stampforge.cyclic import ACCEPT_WORSE, TEMPERATURE, _accept_table, baseline, counting_floor, units
from stampforge.solver import _caps


def cases(quick):
    rng = np.random.default_rng(7)
    b = 63 if quick else 171
    moves = 20_000 if quick else 200_000
    rand_i = rng.integers(0, 2**62, size=2 * moves, dtype=np.int64)
    rand_u = rng.random(moves)
    start = np.asarray(baseline(b), dtype=np.int64)
    rand_set = np.sort(rng.choice(b, size=counting_floor(b) + 3, replace=False))
    digits = np.asarray(sorted({1, 2, 3, 5, 8, 13, 21, 34, 55, 89}), dtype=np.int64)
    n, k = (40, 9) if quick else (50, 10)
    return {
        "sumset_levels": ("sumset_levels", (digits, 0, 4000, 6)),
        "cyclic_levels": ("cyclic_levels", (start, b, 2)),
        "stamp_search": ("stamp_search", (n, 2, k, n + 1, 0, True, 2**62, _caps(k, 2))),
        "cyclic_exhaustive": ("cyclic_exhaustive", (28, 8, units(28), 2**62)),
        "cyclic_local_search": ("cyclic_local_search",
                                (b, start, counting_floor(b), rand_i, rand_u, ACCEPT_WORSE, moves)),
        "cyclic_anneal": ("cyclic_anneal",
                          (b, rand_set, rand_i, rand_u, _accept_table(TEMPERATURE), moves)),
    }


def _same(x, y):
    if isinstance(x, tuple):
        return len(x) == len(y) and all(_same(a, c) for a, c in zip(x, y))
    return np.array_equal(np.asarray(x), np.asarray(y))


def best_of(fn, args, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


@click.command()
@click.option("--repeat", default=3, show_default=True)
@click.option("--quick", is_flag=True, help="Smaller inputs.")
def main(repeat, quick):
    if not HAVE_NUMBA:
        raise click.ClickException("numba is not installed; nothing to compare")
    click.echo(f"{'kernel':<22}{'jit s':>10}{'numpy s':>11}{'speedup':>10}  match")
    for name, (base, args) in cases(quick).items():
        jit = getattr(kernels, base + "_jit")
        ref = getattr(kernels, base + "_np")
        jit(*args)  # compile / load from cache
        a, tj = best_of(jit, args, repeat)
        b, tn = best_of(ref, args, max(1, repeat // 3))
        click.echo(f"{name:<22}{tj:>10.4f}{tn:>11.4f}{tn / max(tj, 1e-9):>9.1f}x  {_same(a, b)}")


if __name__ == "__main__":
    main()
