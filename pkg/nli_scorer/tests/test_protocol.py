"""Wire-format parsing tests (no model required)."""

import json

import pytest

from nliscorer.protocol import (
    ProtocolError,
    Response,
    Triple,
    read_request_file,
    write_response_file,
)

HEADER = '{"format": "menli-scores", "version": 1, "mode": "nli_both"}'


def write(path, *lines):
    path.write_text("\n".join(lines) + "\n")
    return path


def request_line(rid, mode="nli_both"):
    return json.dumps({"request_id": rid, "text_a": "a text",
                       "text_b": "b text", "mode": mode})


def test_read_request_file(tmp_path):
    path = write(tmp_path / "req.jsonl", HEADER,
                 request_line("r1"), request_line("r2", "nli_forward"))
    requests = read_request_file(path)
    assert [r.request_id for r in requests] == ["r1", "r2"]
    assert requests[0].wants_forward and requests[0].wants_backward
    assert requests[1].wants_forward and not requests[1].wants_backward


def test_read_request_file_requires_header(tmp_path):
    path = write(tmp_path / "req.jsonl", request_line("r1"))
    with pytest.raises(ProtocolError, match="header"):
        read_request_file(path)


def test_read_request_file_rejects_duplicates(tmp_path):
    path = write(tmp_path / "req.jsonl", HEADER,
                 request_line("r1"), request_line("r1"))
    with pytest.raises(ProtocolError, match="duplicate"):
        read_request_file(path)


def test_read_request_file_rejects_scalar_mode(tmp_path):
    path = write(tmp_path / "req.jsonl", HEADER, request_line("r1", "scalar"))
    with pytest.raises(ProtocolError, match="unsupported mode"):
        read_request_file(path)


def test_read_request_file_rejects_empty_text(tmp_path):
    record = json.dumps({"request_id": "r1", "text_a": "  ",
                         "text_b": "x", "mode": "nli_both"})
    path = write(tmp_path / "req.jsonl", HEADER, record)
    with pytest.raises(ProtocolError, match="empty text"):
        read_request_file(path)


def test_write_response_file_shape(tmp_path):
    out = tmp_path / "resp.jsonl"
    count = write_response_file(out, [
        Response("r1", forward=Triple(0.7, 0.2, 0.1),
                 backward=Triple(0.6, 0.3, 0.1)),
        Response("r2", forward=Triple(0.5, 0.25, 0.25),
                 truncated_forward=True),
    ])
    assert count == 2
    lines = out.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["format"] == "menli-scores" and header["version"] == 1
    first = json.loads(lines[1])
    assert set(first["triples"]) == {"forward", "backward"}
    second = json.loads(lines[2])
    assert set(second["triples"]) == {"forward"}
    assert second["truncated"] == {"forward": True, "backward": False}
