"""Compare the combinatorial crossing rule with exact geometry on all short walks.

    python3 scripts/crossing_rule_scan.py --d 3 4 5 6 7 --max-len 6
"""

import argparse
from collections import Counter

from locplane.graph import enumerate_walks, walk_coloring
from locplane.hypercube import build_middle_layer, lemma12_predicted_crossing, realize, segments_cross, unique_max_premise


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--d", type=int, nargs="+", default=[3, 4, 5, 6])
    p.add_argument("--max-len", type=int, default=6)
    args = p.parse_args(argv)

    for d in args.d:
        mg = build_middle_layer(d)
        pts = {v: realize(mg, v).int_coords for v in (1, 2)}
        tally = Counter()
        for m in range(2, args.max_len + 1):
            for w in enumerate_walks(mg.graph, m):
                cols = walk_coloring(mg.graph, w)
                if cols[0] < cols[-1] or not unique_max_premise(cols):
                    tally["premise fails"] += 1
                    continue
                want = lemma12_predicted_crossing(cols)
                tally["crossing" if want else "no crossing"] += 1
                for variant, p_ in pts.items():
                    if segments_cross(p_[w[0]], p_[w[1]], p_[w[-2]], p_[w[-1]]) != want:
                        tally[f"mismatch variant {variant}"] += 1
        print(d, dict(sorted(tally.items())))


if __name__ == "__main__":
    main()
