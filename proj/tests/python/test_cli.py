import json
import subprocess
from pathlib import Path

import pytest

import proofsynth as ps

CLI = Path(ps.__file__).resolve().parent / "proofsynth"

pytestmark = pytest.mark.skipif(not CLI.exists(), reason="CLI binary not built")


def run(*args, cwd=None):
    return subprocess.run([str(CLI), *map(str, args)], capture_output=True, text=True, cwd=cwd)


def test_help_and_usage_exit_codes():
    assert run("--help").returncode == 0
    assert run("bogus").returncode == 1
    assert run("gen").returncode == 1  # neither --small nor --large


def test_gen_small(tmp_path):
    out = tmp_path / "c.jsonl"
    r = run("gen", "--small", 2, "--out", out)
    assert r.returncode == 0
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert {"proposition": "(imp (var a) (var a))", "proof": "(lam x0 (var x0))"} in lines
    assert (tmp_path / "c_summary.txt").exists()
    assert (tmp_path / "c_summary.jsonl").exists()

    r = run("gen", "--small", 1, "--out", tmp_path / "e.jsonl")
    assert r.returncode == 0
    assert "warning" in r.stderr
    assert (tmp_path / "e.jsonl").read_text() == ""


def test_gen_large_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run("gen", "--large", 10, 30, "--count", 5, "--seed", 7, "--out", a).returncode == 0
    assert run("gen", "--large", 10, 30, "--count", 5, "--seed", 7, "--out", b).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    sizes = [ps.term_size(json.loads(l)["proof"]) for l in a.read_text().splitlines()]
    assert len(sizes) == 5
    assert all(10 <= s <= 30 for s in sizes)


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    d = tmp_path_factory.mktemp("pipeline")
    assert run("gen", "--small", 5, "--out", d / "c.jsonl").returncode == 0
    assert run("quads", "--corpus", d / "c.jsonl", "--out", d / "q.jsonl").returncode == 0
    r = run("split", "--quads", d / "q.jsonl", "--ratio", 0.9, "--seed", 1,
            "--train-out", d / "tr.jsonl", "--val-out", d / "va.jsonl")
    assert r.returncode == 0
    r = run("train", "--quads", d / "tr.jsonl", "--val", d / "va.jsonl",
            "--epochs", 3, "--batch", 100, "--seed", 5, "--out", d / "m.ckpt")
    assert r.returncode == 0
    return d, r


def test_quads_and_split_counts(pipeline):
    d, _ = pipeline
    corpus = [json.loads(l) for l in (d / "c.jsonl").read_text().splitlines()]
    quads = (d / "q.jsonl").read_text().splitlines()
    assert len(quads) == sum(ps.term_size(p["proof"]) for p in corpus)
    tr = (d / "tr.jsonl").read_text().splitlines()
    va = (d / "va.jsonl").read_text().splitlines()
    assert len(tr) == int(0.9 * len(quads))
    assert len(tr) + len(va) == len(quads)


def test_train_epoch_log(pipeline):
    d, r = pipeline
    log_lines = [l for l in r.stdout.splitlines() if l.startswith("epoch ")]
    assert len(log_lines) == 3
    losses = [float(l.split()[3]) for l in log_lines]
    assert losses[-1] < losses[0]
    report = [json.loads(l) for l in (d / "m_log.jsonl").read_text().splitlines()]
    assert [e["epoch"] for e in report] == [1, 2, 3]


def test_eval_table(pipeline):
    d, _ = pipeline
    r = run("eval", "--quads", d / "va.jsonl", "--ckpt", d / "m.ckpt")
    assert r.returncode == 0
    assert r.stdout.splitlines()[-1].startswith("all")
    assert run("eval", "--quads", d / "va.jsonl", "--uniform").returncode == 0
    assert run("eval", "--quads", d / "va.jsonl").returncode == 1  # no estimator picked


def test_obligation_free_checkpoint_is_q_invariant(pipeline, tmp_path):
    d, _ = pipeline
    r = run("train", "--quads", d / "tr.jsonl", "--epochs", 1, "--batch", 100,
            "--seed", 5, "--obligation-free", "--out", tmp_path / "of.ckpt")
    assert r.returncode == 0
    est = ps.load_checkpoint(str(tmp_path / "of.ckpt"))
    goal = "(imp (var a) (var b))"
    assert est.classify(goal, "[]", "(var a)") == est.classify(goal, "[]", "(prod (var b) (var b))")


def test_prove_and_check(tmp_path):
    r = run("prove", "(imp (var a) (var a))", "--uniform", "--out", tmp_path / "p.txt")
    assert r.returncode == 0
    proof = r.stdout.strip()
    assert ps.verify("(imp (var a) (var a))", proof)
    assert run("check", "(imp (var a) (var a))", proof).returncode == 0
    assert run("check", "(imp (var a) (var b))", proof).returncode == 2
    r = run("check", "(imp (var a) (var a))", "--proof-file", tmp_path / "p.txt")
    assert r.returncode == 0
    assert r.stdout.strip() == "true"


def test_prove_not_found_within_timeout(tmp_path):
    import time

    t0 = time.monotonic()
    r = run("prove", "(var a)", "--uniform", "--timeout", 1)
    assert time.monotonic() - t0 < 2.0  # timeout + 1s
    assert r.returncode == 2
    assert "NOT_FOUND" in r.stdout


def test_bench(tmp_path):
    f = tmp_path / "props.txt"
    f.write_text("(imp (var a) (var a))\n(imp (var a) (imp (var b) (var a)))\n")
    r = run("bench", "--file", f, "--uniform", "--timeout", 5, "--report", tmp_path / "b")
    assert r.returncode == 0
    assert "proved 2/2" in r.stdout
    summary = json.loads((tmp_path / "b.jsonl").read_text().splitlines()[-1])
    assert summary["proved"] == 2
