"""Compare the compiled and NumPy kernel backends on bundled-data workloads.

    python benchmarks/bench_kernels.py --points 200000 --repeat 5
"""

import argparse
import timeit

import numpy as np

from magicpol import build_model, bundled_config, load_bundled
from magicpol.kernels import BACKENDS, running_sum, valence_sum


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=100_000, help="frequency grid size")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--state", default="15s1/2")
    args = ap.parse_args(argv)

    ds = load_bundled()
    model = build_model(ds.level(args.state), ds, bundled_config())
    grid = np.linspace(0.01, 0.2, args.points)
    terms = np.random.default_rng(0).standard_normal(5000)

    print(f"state {args.state}: {len(model)} channels, {args.points} frequencies, best of {args.repeat}")
    print(f"{'backend':>8}  {'valence_sum [ms]':>17}  {'running_sum [ms]':>17}")
    results = {}
    for name in sorted(BACKENDS):
        t_sum = min(timeit.repeat(lambda: valence_sum(model.delta_e, model.d_squared, grid, backend=name),
                                  number=1, repeat=args.repeat))
        t_run = min(timeit.repeat(lambda: running_sum(terms, backend=name), number=1, repeat=args.repeat))
        results[name] = valence_sum(model.delta_e, model.d_squared, grid, backend=name)
        print(f"{name:>8}  {1e3 * t_sum:17.2f}  {1e3 * t_run:17.3f}")
    if len(results) > 1:
        a, b = results.values()
        same = np.array_equal(a, b, equal_nan=True)
        print(f"backends bit-identical: {same}")
    else:
        print("compiled extension not built; only the NumPy backend ran")


if __name__ == "__main__":
    main()
