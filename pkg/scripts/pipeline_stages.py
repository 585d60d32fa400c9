"""Edge counts at each stage of the k-flat pipeline.

Shows where edges disappear: the thinning stages keep a small fraction, and
with few edge types per vertex the final shaving removes almost everything.

    python3 scripts/pipeline_stages.py --d 8 16 --k 2 --seeds 20
"""

import argparse

import numpy as np

from locplane.bounds import theorem15_report
from locplane.graph import latin_square_graph
from locplane.hypercube import build_middle_layer
from locplane.thinning import ColorExhaustionError, flat_pipeline


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--d", type=int, nargs="+", default=[8, 16])
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--latin", action="store_true", help="use K_{d,d} instead of the middle layer")
    args = p.parse_args(argv)

    print("d,k,seed,host_edges,after_each_thinning,fast_free,flat,target_is_vacuous")
    for d in args.d:
        g = latin_square_graph(d) if args.latin else build_middle_layer(d).graph
        for seed in range(args.seeds):
            trace = []
            try:
                out = flat_pipeline(g, args.k, np.random.default_rng(seed), trace)
            except ColorExhaustionError as exc:
                print(f"{d},{args.k},{seed},error: {exc}")
                break
            stages = "/".join(str(o.num_kept) for o in trace[:-1])
            vac = theorem15_report(g.n, args.k, out.num_edges).extra["vacuous"]
            print(f"{d},{args.k},{seed},{g.num_edges},{stages},{trace[-1].num_edges},{out.num_edges},{vac}")


if __name__ == "__main__":
    main()
