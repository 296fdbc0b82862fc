"""Synthetic corpora, train/combine/score orchestration, and grid sweeps."""
from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from . import baselines
from .alignment import Edit, apply_edits, extract_edits
from .candidates import aggregate
from .classifier import LinearModel, TrainingConfig, label_candidates, save_model, train
from .combiner import CombineConfig, combine_corpus
from .m2 import M2Sentence, m2_from_edits, read_lines, read_m2, write_lines, write_m2
from .scorer import MATCHING_POLICY, ScoreReport, score_corpus

log = logging.getLogger(__name__)

Rate = Union[float, Sequence[float]]


class ManifestError(ValueError):
    pass


# --------------------------------------------------------------------------- synthetic data


@dataclass
class SyntheticSpec:
    n_sentences: int = 300
    k: int = 5
    vocab_size: int = 200
    min_len: int = 8
    max_len: int = 20
    corruption_rate: float = 0.15
    fix_rate: Rate = 0.7
    spurious_rate: Rate = 0.05
    correlation: float = 0.0
    seed: int = 0
    split: tuple = (0.7, 0.15, 0.15)

    def __post_init__(self):
        self.fix_rate = self._per_system(self.fix_rate, "fix_rate")
        self.spurious_rate = self._per_system(self.spurious_rate, "spurious_rate")
        for name in ("corruption_rate", "correlation"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.k < 1 or self.n_sentences < 1 or not 1 <= self.min_len <= self.max_len:
            raise ValueError("k, n_sentences and the length range must be positive")
        if self.vocab_size < 2:
            raise ValueError("vocab_size must be >= 2")
        self.split = tuple(self.split)

    def _per_system(self, rate, name):
        rates = [float(rate)] * self.k if np.isscalar(rate) else [float(r) for r in rate]
        if len(rates) != self.k or not all(0 <= r <= 1 for r in rates):
            raise ValueError(f"{name} must be one rate in [0, 1] or one per system")
        return rates


@dataclass
class SyntheticCorpus:
    sources: List[List[str]]
    targets: List[List[str]]
    gold: List[List[Edit]]
    hypotheses: List[List[List[str]]]  # [system][sentence]

    def __len__(self):
        return len(self.sources)

    def subset(self, idx) -> "SyntheticCorpus":
        return SyntheticCorpus([self.sources[i] for i in idx], [self.targets[i] for i in idx],
                               [self.gold[i] for i in idx], [[h[i] for i in idx] for h in self.hypotheses])

    def gold_m2(self) -> List[M2Sentence]:
        return [m2_from_edits(s, g) for s, g in zip(self.sources, self.gold)]


def _random_other(rng, vocab, word):
    while True:
        w = vocab[rng.integers(len(vocab))]
        if w != word:
            return w


def _stray_decisions(rng, source, rate, vocab):
    """Per-position stray-edit draws: ``None`` or ``(op, word)``."""
    out = []
    for tok in source:
        if rng.random() < rate:
            out.append((("R", "U", "M")[rng.integers(3)], _random_other(rng, vocab, tok)))
        else:
            out.append(None)
    return out


def _spurious_plan(decisions, blocked):
    """Keep decisions on unblocked positions, never two on neighbouring tokens."""
    plan = {}
    for p, d in enumerate(decisions):
        if d is not None and p not in blocked and p - 1 not in plan:
            plan[p] = d
    return plan


def _plan_edits(plan) -> List[Edit]:
    out = []
    for p, (op, word) in plan.items():
        if op == "R":
            out.append(Edit(p, p + 1, word))
        elif op == "U":
            out.append(Edit(p, p + 1, ""))
        else:
            out.append(Edit(p, p, word))
    return out


def make_synthetic(spec: SyntheticSpec) -> SyntheticCorpus:
    """Build a corpus whose gold edits undo injected corruptions.

    Each system fixes a random subset of the gold edits and adds its own stray
    edits; with probability ``correlation`` each fix or stray-edit decision is
    copied from system 0.
    """
    rng = np.random.default_rng(spec.seed)
    vocab = [f"w{i:03d}" for i in range(spec.vocab_size)]
    sources, targets, golds = [], [], []
    hyps = [[] for _ in range(spec.k)]
    for _ in range(spec.n_sentences):
        n = int(rng.integers(spec.min_len, spec.max_len + 1))
        target = [vocab[i] for i in rng.integers(len(vocab), size=n)]
        source = []
        skip = False
        for tok in target:
            if not skip and rng.random() < spec.corruption_rate:
                op = rng.integers(3)
                if op == 0:    # source misses the token: gold insertion
                    pass
                elif op == 1:  # source has a stray token: gold deletion
                    source.extend([_random_other(rng, vocab, tok), tok])
                else:          # wrong word: gold replacement
                    source.append(_random_other(rng, vocab, tok))
                skip = True
            else:
                source.append(tok)
                skip = False
        gold = extract_edits(source, target)

        blocked = set()
        for e in gold:
            blocked.update(range(e.a - 1, e.b + 1))
        base_fix = rng.random(len(gold)) < spec.fix_rate[0]
        base_stray = _stray_decisions(rng, source, spec.spurious_rate[0], vocab)
        for j in range(spec.k):
            if j == 0:
                fixed, stray = base_fix, base_stray
            else:
                share = rng.random(len(gold)) < spec.correlation
                fixed = np.where(share, base_fix, rng.random(len(gold)) < spec.fix_rate[j])
                own = _stray_decisions(rng, source, spec.spurious_rate[j], vocab)
                share = rng.random(len(source)) < spec.correlation
                stray = [b if sh else o for b, o, sh in zip(base_stray, own, share)]
            plan = _spurious_plan(stray, blocked)
            edits = [e for e, f in zip(gold, fixed) if f] + _plan_edits(plan)
            hyps[j].append(apply_edits(source, edits))
        sources.append(source)
        targets.append(target)
        golds.append(gold)
    return SyntheticCorpus(sources, targets, golds, hyps)


def split_indices(n: int, fractions=(0.7, 0.15, 0.15), seed: int = 0):
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(fractions[0] * n))
    n_dev = int(round(fractions[1] * n))
    parts = order[:n_train], order[n_train:n_train + n_dev], order[n_train + n_dev:]
    return [sorted(int(i) for i in p) for p in parts]


def write_corpus(directory, corpus: SyntheticCorpus) -> Dict[str, object]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_lines(d / "source.txt", corpus.sources)
    write_lines(d / "target.txt", corpus.targets)
    write_m2(d / "gold.m2", corpus.gold_m2())
    hyp_paths = []
    for j, h in enumerate(corpus.hypotheses):
        write_lines(d / f"hyp{j}.txt", h)
        hyp_paths.append(f"hyp{j}.txt")
    return {"source": "source.txt", "gold": "gold.m2", "hypotheses": hyp_paths}


def generate_synthetic(spec: SyntheticSpec, out_dir) -> Path:
    """Write train/dev/test splits plus a ready-to-run ``manifest.json``; return the manifest path."""
    out = Path(out_dir)
    corpus = make_synthetic(spec)
    names = ("train", "dev", "test")
    manifest = {"name": f"synthetic-seed{spec.seed}", "systems": [f"sys{j}" for j in range(spec.k)]}
    for name, idx in zip(names, split_indices(len(corpus), spec.split, spec.seed)):
        files = write_corpus(out / name, corpus.subset(idx))
        manifest[name] = {key: (f"{name}/{v}" if isinstance(v, str) else [f"{name}/{x}" for x in v])
                          for key, v in files.items()}
    spec_doc = asdict(spec)
    spec_doc["split"] = list(spec.split)
    (out / "synthetic_spec.json").write_text(json.dumps(spec_doc, indent=2) + "\n", encoding="utf-8")
    manifest.update(DEFAULT_MANIFEST_TAIL)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


# --------------------------------------------------------------------------- corpora on disk


@dataclass
class Split:
    sources: List[List[str]]
    gold: List[M2Sentence]
    hypotheses: List[List[List[str]]]  # [system][sentence]

    def __post_init__(self):
        n = len(self.sources)
        if len(self.gold) != n or any(len(h) != n for h in self.hypotheses):
            raise ManifestError(f"split has {n} sources but gold/hypothesis files of other lengths")

    @property
    def k(self):
        return len(self.hypotheses)

    def gold_edits(self, i) -> List[Edit]:
        """Training labels come from the first annotator."""
        return self.gold[i].gold_edit_sets()[0][1]

    def restrict(self, systems: Sequence[int]) -> "Split":
        return Split(self.sources, self.gold, [self.hypotheses[j] for j in systems])

    @classmethod
    def load(cls, source, gold, hypotheses) -> "Split":
        for p in [source, gold, *hypotheses]:
            if not Path(p).exists():
                raise ManifestError(f"missing input file {p}")
        return cls(read_lines(source), read_m2(gold), [read_lines(h) for h in hypotheses])


def labeled_examples(split: Split):
    data = []
    for i, src in enumerate(split.sources):
        cands = aggregate(src, [h[i] for h in split.hypotheses])
        data.extend(label_candidates(cands, split.gold_edits(i)))
    return data


def train_on_split(split: Split, cfg: Optional[TrainingConfig] = None) -> LinearModel:
    return train(labeled_examples(split), cfg or TrainingConfig(), k=split.k)


def combine_split(split: Split, model: LinearModel, cfg: CombineConfig, trace=None):
    return combine_corpus(split.sources, split.hypotheses, model, cfg, trace)


def score_outputs(split: Split, outputs) -> ScoreReport:
    return score_corpus(split.sources, outputs, split.gold)


def system_scores(split: Split) -> List[ScoreReport]:
    return [score_outputs(split, h) for h in split.hypotheses]


def rank_systems(reports: Sequence[ScoreReport]) -> List[int]:
    """System indices by descending F0.5; ties keep the lower index first."""
    return sorted(range(len(reports)), key=lambda j: (-reports[j].f05, j))


# --------------------------------------------------------------------------- experiments

STRATEGIES = ("single", "weighted_mv", "edit_mv", "mbr", "esc", "arbesc")
GRID_KEYS = ("tau", "alpha", "beta", "cap", "theta", "min_votes", "subsets")
DEFAULT_GRID = {"tau": [0.7], "alpha": [0.9], "beta": [0.1], "cap": [1.5], "theta": [0.0],
                "min_votes": ["majority"], "subsets": ["all"]}
DEFAULT_MANIFEST_TAIL = {
    "strategies": list(STRATEGIES),
    "grid": DEFAULT_GRID,
    "training": {},
    "output_dir": "results",
}
CSV_COLUMNS = ("dataset", "strategy", "systems", "tau", "alpha", "beta", "cap", "theta", "min_votes",
               "tp", "fp", "fn", "precision", "recall", "f1", "f05")


@dataclass
class ExperimentManifest:
    """Inputs and config grid for one experiment.

    Paths are resolved relative to ``base_dir`` (the manifest's directory).
    ``dev`` is optional; without it, system ranking and vote weights use train.
    """
    train: Dict[str, object]
    test: Dict[str, object]
    dev: Optional[Dict[str, object]] = None
    name: str = "experiment"
    systems: List[str] = field(default_factory=list)
    strategies: List[str] = field(default_factory=lambda: list(STRATEGIES))
    grid: Dict[str, list] = field(default_factory=lambda: dict(DEFAULT_GRID))
    training: Dict[str, object] = field(default_factory=dict)
    output_dir: str = "results"
    base_dir: Path = Path(".")

    def __post_init__(self):
        unknown = set(self.grid) - set(GRID_KEYS)
        if unknown:
            raise ManifestError(f"unknown grid keys {sorted(unknown)}")
        self.grid = {**DEFAULT_GRID, **self.grid}
        if any(not isinstance(v, list) or not v for v in self.grid.values()):
            raise ManifestError("every grid entry must be a non-empty list")
        bad = set(self.strategies) - set(STRATEGIES)
        if bad:
            raise ManifestError(f"unknown strategies {sorted(bad)}")
        for part in ("train", "test") + (("dev",) if self.dev else ()):
            files = getattr(self, part)
            if not isinstance(files, dict) or not {"source", "gold", "hypotheses"} <= set(files):
                raise ManifestError(f"{part} needs source, gold and hypotheses entries")
        k = len(self.train["hypotheses"])
        if not self.systems:
            self.systems = [f"sys{j}" for j in range(k)]
        if len(self.systems) != k:
            raise ManifestError(f"{len(self.systems)} system names for {k} hypothesis files")

    @classmethod
    def from_file(cls, path) -> "ExperimentManifest":
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
        try:
            return cls(**doc, base_dir=path.parent)
        except TypeError as exc:
            raise ManifestError(f"bad manifest {path}: {exc}") from exc

    def load_split(self, part: str) -> Optional[Split]:
        files = getattr(self, part)
        if files is None:
            return None
        resolve = lambda p: self.base_dir / p
        return Split.load(resolve(files["source"]), resolve(files["gold"]),
                          [resolve(h) for h in files["hypotheses"]])

    @property
    def out_path(self) -> Path:
        return self.base_dir / self.output_dir


def _subset(spec: str, ranking: List[int]) -> List[int]:
    if spec == "all":
        return sorted(ranking)
    if spec.startswith("best"):
        n = int(spec[4:])
        if not 1 <= n <= len(ranking):
            raise ManifestError(f"subset {spec} needs 1..{len(ranking)} systems")
        return sorted(ranking[:n])
    try:
        return sorted(int(j) for j in spec.split(","))
    except ValueError:
        raise ManifestError(f"bad subset spec {spec!r}") from None


def _min_votes(value, n: int) -> int:
    return n // 2 + 1 if value == "majority" else int(value)


def _row(dataset, strategy, systems, report: ScoreReport, **params):
    row = {c: "" for c in CSV_COLUMNS}
    row.update(dataset=dataset, strategy=strategy, systems=systems, **params)
    row.update({k: f"{v:.6f}" if isinstance(v, float) else v for k, v in report.as_dict().items()})
    return row


def run_experiment(manifest: ExperimentManifest, write: bool = True) -> List[dict]:
    """Train on train, evaluate every strategy and grid point on test, write CSV + summary."""
    train_split = manifest.load_split("train")
    test_split = manifest.load_split("test")
    dev_split = manifest.load_split("dev") or train_split
    tcfg = TrainingConfig(**manifest.training)
    names = manifest.systems
    grid = manifest.grid
    dev_reports = system_scores(dev_split)
    ranking = rank_systems(dev_reports)
    rows = []
    ds = manifest.name

    if "single" in manifest.strategies:
        for j, rep in enumerate(system_scores(test_split)):
            rows.append(_row(ds, "single", names[j], rep))
    if "weighted_mv" in manifest.strategies:
        weights = [r.f05 for r in dev_reports]
        if not any(weights):
            weights = [1.0] * len(weights)
        outs = [baselines.weighted_sentence_vote(s, [h[i] for h in test_split.hypotheses], weights)
                for i, s in enumerate(test_split.sources)]
        rows.append(_row(ds, "weighted_mv", "all", score_outputs(test_split, outs)))
    if "mbr" in manifest.strategies:
        outs = [baselines.mbr_select([h[i] for h in test_split.hypotheses])
                for i in range(len(test_split.sources))]
        rows.append(_row(ds, "mbr", "all", score_outputs(test_split, outs)))

    for subset_spec in grid["subsets"]:
        systems = _subset(str(subset_spec), ranking)
        label = str(subset_spec) if subset_spec == "all" else f"{subset_spec}:" + "+".join(names[j] for j in systems)
        test_sub = test_split.restrict(systems)
        if "edit_mv" in manifest.strategies:
            for mv in grid["min_votes"]:
                m = _min_votes(mv, len(systems))
                if not 1 <= m <= len(systems):
                    continue
                outs = [baselines.edit_majority_vote(aggregate(s, [h[i] for h in test_sub.hypotheses]),
                                                     baselines.VoteConfig(min_votes=m))
                        for i, s in enumerate(test_sub.sources)]
                rows.append(_row(ds, "edit_mv", label, score_outputs(test_sub, outs), min_votes=m))
        if not {"esc", "arbesc"} & set(manifest.strategies):
            continue
        model = train_on_split(train_split.restrict(systems), tcfg)
        if write:
            mdir = manifest.out_path / "models"
            mdir.mkdir(parents=True, exist_ok=True)
            (mdir / f"model_{str(subset_spec).replace(',', '-')}.json").write_bytes(save_model(model))
        if "esc" in manifest.strategies:
            for tau in grid["tau"]:
                outs = [baselines.esc_combine(s, [h[i] for h in test_sub.hypotheses], model, tau)
                        for i, s in enumerate(test_sub.sources)]
                rows.append(_row(ds, "esc", label, score_outputs(test_sub, outs), tau=tau))
        if "arbesc" in manifest.strategies:
            for tau, alpha, beta, cap, theta in itertools.product(
                    grid["tau"], grid["alpha"], grid["beta"], grid["cap"], grid["theta"]):
                cfg = CombineConfig(tau, alpha, beta, cap, theta)
                outs = combine_split(test_sub, model, cfg)
                rows.append(_row(ds, "arbesc", label, score_outputs(test_sub, outs),
                                 tau=tau, alpha=alpha, beta=beta, cap=cap, theta=theta))
    if write:
        write_report(manifest.out_path, rows, title=ds)
    return rows


def sweep(manifest: ExperimentManifest, param: str, values: Sequence, strategies=("arbesc",),
          write: bool = True) -> List[dict]:
    """Re-run ``manifest`` with one grid parameter replaced by ``values``."""
    if param not in GRID_KEYS:
        raise ManifestError(f"cannot sweep {param!r}; choose from {GRID_KEYS}")
    grid = dict(manifest.grid)
    grid[param] = list(values)
    swept = ExperimentManifest(**{**asdict_shallow(manifest), "grid": grid, "strategies": list(strategies),
                                  "output_dir": str(Path(manifest.output_dir) / f"sweep_{param}")})
    return run_experiment(swept, write=write)


def asdict_shallow(m: ExperimentManifest) -> dict:
    return {f: getattr(m, f) for f in m.__dataclass_fields__}


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def summarize(rows: Sequence[dict], title: str = "") -> str:
    lines = [f"# {title}" if title else "# results", f"# matching: {MATCHING_POLICY}", ""]
    head = f"{'strategy':<12} {'systems':<28} {'params':<34} {'P':>7} {'R':>7} {'F1':>7} {'F0.5':>7}"
    lines += [head, "-" * len(head)]
    for r in rows:
        params = " ".join(f"{k}={r[k]}" for k in ("tau", "alpha", "beta", "cap", "theta", "min_votes")
                          if r[k] != "")
        lines.append(f"{r['strategy']:<12} {str(r['systems'])[:28]:<28} {params:<34} "
                     + " ".join(f"{100 * float(r[k]):>6.2f}%" for k in ("precision", "recall", "f1", "f05")))
    return "\n".join(lines) + "\n"


def write_report(out_dir, rows, title=""):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(rows_to_csv(rows), encoding="utf-8")
    (out / "summary.txt").write_text(summarize(rows, title), encoding="utf-8")
