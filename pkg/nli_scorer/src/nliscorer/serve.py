"""Batch-file and line-mode serving over the wire protocol."""

from __future__ import annotations

import json
import sys
from typing import Optional, Sequence

from .config import ModelConfig
from .diagnostic import enforce_gate
from .model import CrossEncoderNli
from .protocol import (
    Request,
    Response,
    parse_request,
    read_request_file,
    write_response_file,
)


def load_gated_model(config: ModelConfig) -> CrossEncoderNli:
    model = CrossEncoderNli(config)
    if config.enforce_diagnostic:
        enforce_gate(model)
    return model


def score_requests(model: CrossEncoderNli,
                   requests: Sequence[Request]) -> list[Response]:
    """Score the requested directions for every request, preserving order.

    Forward keeps text_a as the premise; backward swaps the pair. All
    needed pairs run through the model in one deterministic pass.
    """
    pairs: list[tuple[str, str]] = []
    layout: list[tuple[int, Optional[int]]] = []  # (forward idx, backward idx)
    for request in requests:
        fwd_index = bwd_index = None
        if request.wants_forward:
            fwd_index = len(pairs)
            pairs.append((request.text_a, request.text_b))
        if request.wants_backward:
            bwd_index = len(pairs)
            pairs.append((request.text_b, request.text_a))
        layout.append((fwd_index, bwd_index))
    scored = model.score_pairs(pairs)
    responses = []
    for request, (fwd_index, bwd_index) in zip(requests, layout):
        fwd = scored[fwd_index] if fwd_index is not None else None
        bwd = scored[bwd_index] if bwd_index is not None else None
        responses.append(Response(
            request_id=request.request_id,
            forward=fwd.triple if fwd else None,
            backward=bwd.triple if bwd else None,
            truncated_forward=bool(fwd and fwd.truncated),
            truncated_backward=bool(bwd and bwd.truncated),
        ))
    return responses


def serve_batch(config: ModelConfig, in_path, out_path) -> int:
    """Read a request file, write the response file; returns response count."""
    requests = read_request_file(in_path)
    model = load_gated_model(config)
    responses = score_requests(model, requests)
    return write_response_file(out_path, responses)


def serve_lines(config: ModelConfig, stdin=None, stdout=None) -> int:
    """Line mode: one request per input line, one response out, flushed."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    model = load_gated_model(config)
    count = 0
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        request = parse_request(json.loads(line))
        response = score_requests(model, [request])[0]
        stdout.write(json.dumps(response.as_json(), sort_keys=True,
                                ensure_ascii=False) + "\n")
        stdout.flush()
        count += 1
    return count
