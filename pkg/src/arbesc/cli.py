"""Command-line entry point: ``arbesc <command> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import baselines, harness
from .candidates import aggregate
from .classifier import TrainingConfig, load_model, save_model
from .combiner import CombineConfig, combine_corpus
from .m2 import read_lines, read_m2, write_lines
from .scorer import score_corpus


def _add_combine_flags(p):
    p.add_argument("--source", required=True, help="tokenised source sentences, one per line")
    p.add_argument("--hyp", nargs="+", required=True, help="one hypothesis file per system")
    p.add_argument("--out", required=True, help="where to write combined sentences")


def cmd_generate(args):
    spec = harness.SyntheticSpec(n_sentences=args.sentences, k=args.systems, vocab_size=args.vocab,
                                 min_len=args.min_len, max_len=args.max_len,
                                 corruption_rate=args.corruption, fix_rate=args.fix_rate,
                                 spurious_rate=args.spurious, correlation=args.correlation, seed=args.seed)
    path = harness.generate_synthetic(spec, args.out_dir)
    print(path)


def cmd_train(args):
    split = harness.Split.load(args.source, args.gold, args.hyp)
    cfg = TrainingConfig(learning_rate=args.lr, batch_size=args.batch_size, epochs=args.epochs, seed=args.seed)
    model = harness.train_on_split(split, cfg)
    Path(args.model).write_bytes(save_model(model))
    print(f"trained on {len(split.sources)} sentences, "
          f"{len(model.loss_history)} epochs, final loss {model.loss_history[-1]:.6f}")


def cmd_combine(args):
    model = load_model(Path(args.model).read_bytes())
    cfg = CombineConfig(args.tau, args.alpha, args.beta, args.cap, args.theta)
    sources = read_lines(args.source)
    hyps = [read_lines(h) for h in args.hyp]
    trace = [] if args.trace else None
    outputs = combine_corpus(sources, hyps, model, cfg, trace)
    write_lines(args.out, outputs)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for i, r in trace:
                fh.write(json.dumps({"sentence": i, "a": r.edit.a, "b": r.edit.b,
                                     "replacement": r.edit.replacement, "type": r.edit.etype,
                                     "systems": list(r.systems), "p_raw": r.p_raw, "p_adj": r.p_adj,
                                     "status": r.status}, ensure_ascii=False) + "\n")


def _parse_subset(text):
    return [int(x) for x in text.split(",")] if text else None


def cmd_vote(args):
    sources = read_lines(args.source)
    hyps = [read_lines(h) for h in args.hyp]
    weights = [float(w) for w in args.weights.split(",")] if args.weights else None
    out = []
    for i, src in enumerate(sources):
        sent = [h[i] for h in hyps]
        if args.sentence_level:
            out.append(baselines.weighted_sentence_vote(src, sent, weights))
        else:
            cfg = baselines.VoteConfig(args.min_votes, _parse_subset(args.subset), weights)
            out.append(baselines.edit_majority_vote(aggregate(src, sent), cfg))
    write_lines(args.out, out)


def cmd_mbr(args):
    hyps = [read_lines(h) for h in args.hyp]
    n = len(read_lines(args.source))
    subset = _parse_subset(args.subset)
    if subset:
        hyps = [hyps[j] for j in subset]
    write_lines(args.out, [baselines.mbr_select([h[i] for h in hyps]) for i in range(n)])


def cmd_score(args):
    report = score_corpus(read_lines(args.source), read_lines(args.output), read_m2(args.gold))
    sys.stdout.write(report.to_text(title=f"system={Path(args.output).name}"))


def cmd_run(args):
    rows = harness.run_experiment(harness.ExperimentManifest.from_file(args.manifest))
    sys.stdout.write(harness.summarize(rows))


def cmd_sweep(args):
    manifest = harness.ExperimentManifest.from_file(args.manifest)
    if args.param == "subsets":
        values = args.values
    elif args.param == "min_votes":
        values = [int(v) if v.isdigit() else v for v in args.values]
    else:
        values = [float(v) for v in args.values]
    rows = harness.sweep(manifest, args.param, values, strategies=args.strategies)
    sys.stdout.write(harness.summarize(rows))


def build_parser():
    parser = argparse.ArgumentParser(prog="arbesc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic corpus with train/dev/test splits")
    p.add_argument("out_dir")
    p.add_argument("--sentences", type=int, default=300)
    p.add_argument("--systems", type=int, default=5)
    p.add_argument("--vocab", type=int, default=200)
    p.add_argument("--min-len", type=int, default=8)
    p.add_argument("--max-len", type=int, default=20)
    p.add_argument("--corruption", type=float, default=0.15)
    p.add_argument("--fix-rate", type=float, default=0.7)
    p.add_argument("--spurious", type=float, default=0.05)
    p.add_argument("--correlation", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="fit the edit classifier on a labelled split")
    p.add_argument("--source", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--hyp", nargs="+", required=True)
    p.add_argument("--model", required=True, help="output model file (JSON)")
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("combine", help="combine system outputs with a trained model")
    _add_combine_flags(p)
    p.add_argument("--model", required=True)
    p.add_argument("--tau", type=float, default=0.7)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--cap", type=float, default=1.5)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--trace", help="JSON-lines file with one record per candidate edit")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("vote", help="edit-level majority vote or sentence-level weighted vote")
    _add_combine_flags(p)
    p.add_argument("--min-votes", type=int, default=2)
    p.add_argument("--subset", help="comma-separated system indices")
    p.add_argument("--weights", help="comma-separated per-system weights")
    p.add_argument("--sentence-level", action="store_true", help="weighted whole-sentence vote")
    p.set_defaults(func=cmd_vote)

    p = sub.add_parser("mbr", help="minimum Bayes risk hypothesis selection")
    _add_combine_flags(p)
    p.add_argument("--subset", help="comma-separated system indices")
    p.set_defaults(func=cmd_mbr)

    p = sub.add_parser("score", help="M2-style P/R/F0.5 of a system output")
    p.add_argument("--gold", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--source", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("run", help="run every strategy and grid point in a manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="re-run a manifest sweeping one grid parameter")
    p.add_argument("manifest")
    p.add_argument("--param", required=True, choices=harness.GRID_KEYS)
    p.add_argument("--values", nargs="+", required=True)
    p.add_argument("--strategies", nargs="+", default=["arbesc"], choices=harness.STRATEGIES)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args.func(args)


if __name__ == "__main__":
    main()
