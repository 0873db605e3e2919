#!/usr/bin/env python3
"""Run the classical benchmark comparison and print the report tables.

Covers the scalable suite (F1-F13 at the requested dimensions) or the
fixed-dimension suite (F14-F23) with all seven optimizers. Records land
under --out; the per-case table and the rank statistics go to stdout.
"""

import argparse

from drainvortex.harness import (
    AlgorithmSpec,
    ExperimentConfig,
    emit_records,
    emit_result_table,
    emit_stat_tables,
    run_experiment,
)

ALGORITHMS = ("dvo", "pso", "gwo", "woa", "sca", "aoa", "eo")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", choices=("classical_scalable", "classical_fixed"),
                    default="classical_scalable")
    ap.add_argument("--dims", type=int, nargs="+", default=[30],
                    help="dimensions for the scalable suite")
    ap.add_argument("--runs", type=int, default=30)
    ap.add_argument("--iterations", type=int, default=1000)
    ap.add_argument("--agents", type=int, default=30)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/classical")
    args = ap.parse_args()

    config = ExperimentConfig(
        suite=args.suite,
        dimensions=tuple(args.dims) if args.suite == "classical_scalable" else (),
        algorithms=tuple(AlgorithmSpec(name) for name in ALGORITHMS),
        runs=args.runs,
        iterations=args.iterations,
        n_agents=args.agents,
        master_seed=args.seed,
        workers=args.workers,
        output=args.out,
    )
    result = run_experiment(config)
    emit_records(result, args.out)
    print(emit_result_table(result))
    print(emit_stat_tables(result, reference="dvo"))


if __name__ == "__main__":
    main()
