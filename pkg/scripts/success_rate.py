"""Batch success rate of the pipeline on planted instances.

    python3 scripts/success_rate.py --seeds 100 --copies 50 --pools 20 20 --relax 3 inf --dense 64 1
"""

import argparse
import math
import time
from collections import Counter
from fractions import Fraction

from treedecomp.colouring import synth_instance
from treedecomp.errors import EmbeddingFailed
from treedecomp.pipeline import DECOMPOSED, PipelineConfig, decompose
from treedecomp.tree import path_tree
from treedecomp.verify import verify_decomposition


def relax_arg(text):
    return math.inf if text == "inf" else Fraction(text)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--m", type=int, default=4, help="edges of the path tree")
    ap.add_argument("--copies", type=int, default=50)
    ap.add_argument("--pools", type=int, nargs=2, default=(20, 20))
    ap.add_argument("--relax", type=relax_arg, nargs="+", default=[Fraction(3), math.inf])
    ap.add_argument("--dense", type=int, nargs="+", default=[64, 1])
    args = ap.parse_args()

    t = path_tree(args.m, "B")
    print(f"path with {args.m} edges, {args.copies} copies, pools {args.pools[0]}/{args.pools[1]}")
    print(f"{'relax':>6} {'dense':>6} {'ok':>5} {'failed':>7} {'no-inst':>8} {'repaired':>9} {'secs':>6}")
    for relax in args.relax:
        for dense in args.dense:
            tally = Counter()
            start = time.perf_counter()
            for seed in range(args.seeds):
                try:
                    inst = synth_instance(t, args.copies, *args.pools, seed)
                except EmbeddingFailed:
                    tally["no-inst"] += 1
                    continue
                cfg = PipelineConfig(seed=seed, relax=relax, dense_retries=dense)
                res = decompose(inst.graph, t, inst.colouring, cfg)
                if any(a.bad_copies for a in res.attempts):
                    tally["repaired"] += 1
                if res.outcome == DECOMPOSED:
                    assert not verify_decomposition(inst.graph, t, res.decomposition.copies, inst.colouring)
                    tally["ok"] += 1
                else:
                    tally["failed"] += 1
            secs = time.perf_counter() - start
            print(f"{str(relax):>6} {dense:>6} {tally['ok']:>5} {tally['failed']:>7} "
                  f"{tally['no-inst']:>8} {tally['repaired']:>9} {secs:>6.1f}")


if __name__ == "__main__":
    main()
