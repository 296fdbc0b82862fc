import json

import pytest

from arbesc.cli import main
from arbesc.m2 import read_lines


@pytest.fixture
def corpus(tmp_path):
    main(["generate", str(tmp_path / "data"), "--sentences", "80", "--systems", "3", "--seed", "2"])
    return tmp_path / "data"


def hyp_args(split_dir, k=3):
    return [str(split_dir / f"hyp{j}.txt") for j in range(k)]


def test_train_combine_score(corpus, tmp_path, capsys):
    train = corpus / "train"
    model = tmp_path / "model.json"
    main(["train", "--source", str(train / "source.txt"), "--gold", str(train / "gold.m2"),
          "--hyp", *hyp_args(train), "--model", str(model)])
    doc = json.loads(model.read_text())
    assert doc["layout"] == {"k": 3, "type_set": ["M", "R", "U"], "order": "system-major"}
    assert doc["dim"] == 9 and doc["hyperparams"]["batch_size"] == 16

    test = corpus / "test"
    out, trace = tmp_path / "out.txt", tmp_path / "trace.jsonl"
    main(["combine", "--source", str(test / "source.txt"), "--hyp", *hyp_args(test), "--model", str(model),
          "--out", str(out), "--tau", "0.6", "--trace", str(trace)])
    assert len(read_lines(out)) == len(read_lines(test / "source.txt"))
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert records and {"sentence", "a", "b", "replacement", "systems", "p_raw", "p_adj", "status"} <= set(records[0])

    capsys.readouterr()
    main(["score", "--gold", str(test / "gold.m2"), "--output", str(out), "--source", str(test / "source.txt")])
    report = capsys.readouterr().out
    assert report.startswith("# matching:")
    values = dict(line.split("=") for line in report.splitlines() if "=" in line and " " not in line)
    assert set(values) == {"tp", "fp", "fn", "precision", "recall", "f1", "f05"}


def test_vote_and_mbr(corpus, tmp_path):
    test = corpus / "test"
    n = len(read_lines(test / "source.txt"))
    for extra in (["--min-votes", "2"], ["--min-votes", "1", "--subset", "0,2"],
                  ["--sentence-level", "--weights", "0.5,0.2,0.3"]):
        out = tmp_path / "vote.txt"
        main(["vote", "--source", str(test / "source.txt"), "--hyp", *hyp_args(test), "--out", str(out), *extra])
        assert len(read_lines(out)) == n
    out = tmp_path / "mbr.txt"
    main(["mbr", "--source", str(test / "source.txt"), "--hyp", *hyp_args(test), "--out", str(out)])
    assert len(read_lines(out)) == n


def test_run_and_sweep(corpus, capsys):
    main(["run", str(corpus / "manifest.json")])
    assert "arbesc" in capsys.readouterr().out
    assert (corpus / "results" / "results.csv").exists()
    main(["sweep", str(corpus / "manifest.json"), "--param", "tau", "--values", "0.5", "0.7", "0.9"])
    lines = (corpus / "results" / "sweep_tau" / "results.csv").read_text().splitlines()
    assert len(lines) == 4
    main(["sweep", str(corpus / "manifest.json"), "--param", "subsets", "--values", "best2", "all",
          "--strategies", "edit_mv"])
    assert "best2:" in (corpus / "results" / "sweep_subsets" / "results.csv").read_text()
