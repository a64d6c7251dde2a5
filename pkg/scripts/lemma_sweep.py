"""Goodness, dense-check ratios and conf(I) of single star drawings.

Shows how far desk-scale instances sit from the regime where the dense
check (d_H <= eps d_I everywhere, conf(I) <= delta) can hold.

    python3 scripts/lemma_sweep.py --m 4 --copies 20 50 100 --pools 30
"""

import argparse
from fractions import Fraction

from treedecomp.colouring import synth_instance
from treedecomp.pseudo import build_pseudo_decomposition, check_lemma_dense, goodness_histogram
from treedecomp.tree import path_tree


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--copies", type=int, nargs="+", default=[20, 50, 100])
    ap.add_argument("--pools", type=int, default=30)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--eps", type=Fraction, default=Fraction(1, 10))
    ap.add_argument("--delta", type=Fraction, default=Fraction(1, 2))
    args = ap.parse_args()

    t = path_tree(args.m, "B")
    print(f"{'copies':>6} {'bad/copy':>9} {'viol/seed':>10} {'conf(I)':>8} {'holds':>6}  goodness")
    for copies in args.copies:
        bad = viol = holds = 0
        conf = Fraction(0)
        hist = {}
        for seed in range(args.seeds):
            inst = synth_instance(t, copies, args.pools, args.pools, seed)
            p = build_pseudo_decomposition(inst.graph, t, inst.colouring, seed)
            rep = check_lemma_dense(p, args.eps, args.delta)
            bad += rep.n_bad
            viol += len(rep.violations)
            conf = max(conf, rep.conf_iso)
            holds += rep.holds
            for k, n in goodness_histogram(p).items():
                hist[k] = hist.get(k, 0) + n
        total = copies * args.seeds
        print(f"{copies:>6} {bad / total:>9.3f} {viol / args.seeds:>10.1f} {str(conf):>8} "
              f"{holds:>6}  {dict(sorted(hist.items()))}")


if __name__ == "__main__":
    main()
