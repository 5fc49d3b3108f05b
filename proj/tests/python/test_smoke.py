import math

import pytest

import proofsynth as ps


def test_parse_print_roundtrip():
    assert ps.parse_print_prop("(imp (var a) (var a))") == "(imp (var a) (var a))"
    assert ps.parse_print_term("(lam x (var x))") == "(lam x (var x))"
    with pytest.raises(RuntimeError):
        ps.parse_print_prop("(imp (var a)")


def test_calculus_basics():
    assert ps.is_normal("(lam x (var x))")
    assert not ps.is_normal("(app (lam x (var x)) (lam y (var y)))")
    assert ps.beta_step("(app (lam x (var x)) (lam y (var y)))") == "(lam y (var y))"
    assert ps.normalize("(app (lam x (var x)) (lam y (var y)))") == "(lam y (var y))"
    assert ps.infer_principal("(lam x (var x))") == "(imp (var _0) (var _0))"
    assert ps.infer_principal("(app (var x) (var x))") is None
    assert ps.typecheck("(imp (var a) (var a))", "(lam x (var x))")
    assert ps.verify("(imp (var a) (var a))", "(lam x (var x))")
    assert not ps.verify("(imp (var a) (var b))", "(lam x (var x))")


def test_generation_and_quadruples():
    corpus = ps.small_proof_gen(3)
    assert ("(imp (var a) (var a))", "(lam x0 (var x0))") in corpus
    assert all(ps.verify(p, m) for p, m in corpus)

    quads = ps.extract_quadruples(corpus)
    assert len(quads) == sum(ps.term_size(m) for _, m in corpus)
    goal, obligation, path, rule = quads[0]
    assert path == "[]"
    assert rule in ("Var", "Abs", "App", "Pair", "CasePair", "Left", "Right", "CaseSum")

    train, val = ps.split_quadruples(quads, ratio=0.9, seed=1)
    assert len(train) == int(0.9 * len(quads))
    assert len(train) + len(val) == len(quads)

    large = ps.random_large_proof_gen(10, 20, seed=3, count=4)
    assert len(large) == 4
    assert large == ps.random_large_proof_gen(10, 20, seed=3, count=4)
    assert all(10 <= ps.term_size(m) <= 20 for _, m in large)


def test_corpus_io(tmp_path):
    corpus = ps.small_proof_gen(3)
    path = str(tmp_path / "corpus.jsonl")
    ps.write_corpus(path, corpus)
    assert ps.read_corpus(path) == corpus

    quads = ps.extract_quadruples(corpus)
    qpath = str(tmp_path / "quads.jsonl")
    ps.write_quadruples(qpath, quads)
    assert ps.read_quadruples(qpath) == quads


def test_estimators_and_training(tmp_path):
    uni = ps.uniform_estimator()
    dist = uni.classify("(imp (var a) (var a))")
    assert math.isclose(sum(dist.values()), 1.0)
    assert all(math.isclose(v, 1 / 8) for v in dist.values())

    quads = ps.extract_quadruples(ps.small_proof_gen(4))
    est = ps.new_estimator(quads, seed=5)
    stats = ps.train(est, quads, quads, epochs=2, batch_size=32, seed=5)
    assert len(stats) == 2
    assert stats[1][1] < stats[0][1]  # loss falls

    path = str(tmp_path / "model.ckpt")
    est.save(path)
    loaded = ps.load_checkpoint(path)
    assert loaded.classify("(imp (var a) (var a))") == est.classify("(imp (var a) (var a))")
    assert ps.rule_accuracy(loaded, quads) == ps.rule_accuracy(est, quads)


def test_prove_and_phi():
    uni = ps.uniform_estimator()
    proof = ps.prove("(imp (var a) (var a))", uni)
    assert proof is not None
    assert ps.verify("(imp (var a) (var a))", proof)
    assert ps.prove("(var a)", uni, timeout_sec=1.0) is None

    assert ps.exhaustive_prove("(imp (var a) (var a))", 3) == "(lam x0 (var x0))"
    assert ps.exhaustive_prove("(var a)", 4) is None

    p = ps.phi("(imp (var a) (var a))", "(lam x (var x))", uni)
    assert 0.0 < p <= 1.0
