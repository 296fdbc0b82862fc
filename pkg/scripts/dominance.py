"""Combined vs best single system F0.5 over seeds and inter-system correlation levels."""
import argparse

from arbesc.combiner import CombineConfig
from arbesc.harness import Split, SyntheticSpec, combine_split, make_synthetic, score_outputs, split_indices, \
    system_scores, train_on_split


def trial(seed, correlation, sentences):
    corpus = make_synthetic(SyntheticSpec(n_sentences=sentences, k=5, fix_rate=0.7, spurious_rate=0.05,
                                          correlation=correlation, seed=seed))
    train_idx, _, test_idx = split_indices(len(corpus), seed=seed)
    to_split = lambda c: Split(c.sources, c.gold_m2(), c.hypotheses)
    train, test = to_split(corpus.subset(train_idx)), to_split(corpus.subset(test_idx))
    model = train_on_split(train)
    return score_outputs(test, combine_split(test, model, CombineConfig())).f05, max(r.f05 for r in system_scores(test))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--sentences", type=int, default=400)
    ap.add_argument("--correlations", type=float, nargs="+", default=[0.0, 0.3, 0.6, 0.9])
    args = ap.parse_args()
    print(f"{'corr':>5} {'wins':>6} {'mean combined':>14} {'mean best single':>17}")
    for rho in args.correlations:
        res = [trial(s, rho, args.sentences) for s in range(args.seeds)]
        wins = sum(c > b for c, b in res)
        print(f"{rho:>5.2f} {wins:>3}/{args.seeds:<2} {sum(c for c, _ in res) / len(res):>14.4f} "
              f"{sum(b for _, b in res) / len(res):>17.4f}")


if __name__ == "__main__":
    main()
