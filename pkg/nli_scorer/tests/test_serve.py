"""Serving behavior with a tiny offline checkpoint."""

import io
import json

import pytest

from nliscorer.config import ModelConfig
from nliscorer.diagnostic import DiagnosticFailure, run_diagnostic
from nliscorer.model import CrossEncoderNli, ModelLoadError
from nliscorer.serve import load_gated_model, serve_batch, serve_lines


def tiny_config(tiny_checkpoint, **overrides):
    values = {"checkpoint": tiny_checkpoint, "max_seq_length": 48,
              "batch_size": 4, "enforce_diagnostic": False}
    values.update(overrides)
    return ModelConfig(**values)


def request_file(tmp_path, requests):
    path = tmp_path / "requests.jsonl"
    lines = ['{"format": "menli-scores", "version": 1}']
    lines += [json.dumps(r) for r in requests]
    path.write_text("\n".join(lines) + "\n")
    return path


def make_requests(n, mode="nli_both"):
    return [{"request_id": f"r{i}", "text_a": f"the man saw dog {i}",
             "text_b": f"a woman was running {i}", "mode": mode}
            for i in range(n)]


def read_responses(path):
    lines = path.read_text().splitlines()[1:]
    return {json.loads(line)["request_id"]: json.loads(line) for line in lines}


def test_serve_batch_bijection_and_simplex(tiny_checkpoint, tmp_path):
    req = request_file(tmp_path, make_requests(7))
    out = tmp_path / "responses.jsonl"
    count = serve_batch(tiny_config(tiny_checkpoint), req, out)
    assert count == 7
    responses = read_responses(out)
    assert set(responses) == {f"r{i}" for i in range(7)}
    for record in responses.values():
        for side in ("forward", "backward"):
            triple = record["triples"][side]
            assert abs(triple["e"] + triple["c"] + triple["n"] - 1) < 1e-4
            assert min(triple.values()) >= 0


def test_serve_batch_deterministic(tiny_checkpoint, tmp_path):
    req = request_file(tmp_path, make_requests(5))
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    config = tiny_config(tiny_checkpoint)
    serve_batch(config, req, out1)
    serve_batch(config, req, out2)
    assert out1.read_text() == out2.read_text()


def test_backward_is_swapped_forward(tiny_checkpoint, tmp_path):
    base = {"request_id": "fwd", "text_a": "the man was sleeping",
            "text_b": "a dog was running", "mode": "nli_forward"}
    swapped = {"request_id": "swp", "text_a": "a dog was running",
               "text_b": "the man was sleeping", "mode": "nli_backward"}
    req = request_file(tmp_path, [base, swapped])
    out = tmp_path / "responses.jsonl"
    serve_batch(tiny_config(tiny_checkpoint), req, out)
    responses = read_responses(out)
    fwd = responses["fwd"]["triples"]["forward"]
    bwd = responses["swp"]["triples"]["backward"]
    for key in ("e", "c", "n"):
        assert fwd[key] == pytest.approx(bwd[key], abs=1e-6)


def test_forward_only_mode(tiny_checkpoint, tmp_path):
    req = request_file(tmp_path, make_requests(3, mode="nli_forward"))
    out = tmp_path / "responses.jsonl"
    serve_batch(tiny_config(tiny_checkpoint), req, out)
    for record in read_responses(out).values():
        assert set(record["triples"]) == {"forward"}


def test_truncation_flag_for_long_input(tiny_checkpoint, tmp_path):
    long_text = " ".join(["museum"] * 80)
    requests = [
        {"request_id": "long", "text_a": long_text, "text_b": "a dog",
         "mode": "nli_forward"},
        {"request_id": "short", "text_a": "the cat", "text_b": "a dog",
         "mode": "nli_forward"},
    ]
    req = request_file(tmp_path, requests)
    out = tmp_path / "responses.jsonl"
    serve_batch(tiny_config(tiny_checkpoint), req, out)
    responses = read_responses(out)
    assert responses["long"]["truncated"]["forward"] is True
    assert "truncated" not in responses["short"]
    triple = responses["long"]["triples"]["forward"]
    assert abs(sum(triple.values()) - 1) < 1e-4


def test_line_mode(tiny_checkpoint):
    stdin = io.StringIO("\n".join(
        json.dumps(r) for r in make_requests(3)) + "\n")
    stdout = io.StringIO()
    count = serve_lines(tiny_config(tiny_checkpoint), stdin, stdout)
    assert count == 3
    lines = stdout.getvalue().strip().splitlines()
    assert [json.loads(line)["request_id"] for line in lines] == \
        ["r0", "r1", "r2"]


def test_random_model_fails_diagnostic_gate(tiny_checkpoint):
    config = tiny_config(tiny_checkpoint, enforce_diagnostic=True)
    model = CrossEncoderNli(config)
    result = run_diagnostic(model)
    assert not result.passed  # random weights cannot pass the gate
    with pytest.raises(DiagnosticFailure, match="label_order"):
        load_gated_model(config)


def test_config_validation(tiny_checkpoint):
    with pytest.raises(ValueError, match="permutation"):
        ModelConfig(checkpoint=tiny_checkpoint,
                    label_order=("entailment", "entailment", "neutral"))
    with pytest.raises(ValueError, match="at least 32"):
        ModelConfig(checkpoint=tiny_checkpoint, max_seq_length=16)


def test_config_file_loading(tmp_path, tiny_checkpoint):
    path = tmp_path / "scorer.json"
    path.write_text(json.dumps({
        "checkpoint": tiny_checkpoint, "batch_size": 2,
        "label_order": ["neutral", "entailment", "contradiction"],
        "enforce_diagnostic": False}))
    config = ModelConfig.load(path)
    assert config.batch_size == 2
    assert config.label_order == ("neutral", "entailment", "contradiction")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"checkpoiint": "typo"}))
    with pytest.raises(ValueError, match="unknown config keys"):
        ModelConfig.load(bad)


def test_label_order_contradiction_with_checkpoint(tmp_path, tiny_checkpoint):
    """A checkpoint that names its outputs must agree with the config."""
    import shutil

    from transformers import AutoModelForSequenceClassification

    labeled = tmp_path / "labeled"
    shutil.copytree(tiny_checkpoint, labeled)
    model = AutoModelForSequenceClassification.from_pretrained(labeled)
    model.config.id2label = {0: "entailment", 1: "neutral", 2: "contradiction"}
    model.config.label2id = {v: k for k, v in model.config.id2label.items()}
    model.save_pretrained(labeled)

    with pytest.raises(ModelLoadError, match="contradicts"):
        CrossEncoderNli(ModelConfig(
            checkpoint=str(labeled),
            label_order=("contradiction", "entailment", "neutral"),
            enforce_diagnostic=False))
    # matching order loads fine
    CrossEncoderNli(ModelConfig(
        checkpoint=str(labeled),
        label_order=("entailment", "neutral", "contradiction"),
        enforce_diagnostic=False))
