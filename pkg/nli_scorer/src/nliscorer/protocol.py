"""The request/response wire format this scorer speaks.

JSON lines, UTF-8, one record per line, with a version header:
``{"format": "menli-scores", "version": 1}``. Requests carry
``request_id``, ``text_a`` (premise slot), ``text_b`` (hypothesis slot),
and ``mode``; responses echo the id and attach ``triples`` with the
requested directions (forward keeps text_a as premise, backward swaps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

FORMAT = "menli-scores"
VERSION = 1

NLI_MODES = ("nli_forward", "nli_backward", "nli_both")


class ProtocolError(Exception):
    """Malformed request file or record."""


@dataclass(frozen=True)
class Request:
    request_id: str
    text_a: str
    text_b: str
    mode: str

    @property
    def wants_forward(self) -> bool:
        return self.mode in ("nli_forward", "nli_both")

    @property
    def wants_backward(self) -> bool:
        return self.mode in ("nli_backward", "nli_both")


@dataclass(frozen=True)
class Triple:
    e: float
    c: float
    n: float

    def as_json(self) -> dict:
        return {"e": self.e, "c": self.c, "n": self.n}


@dataclass(frozen=True)
class Response:
    request_id: str
    forward: Optional[Triple] = None
    backward: Optional[Triple] = None
    truncated_forward: bool = False
    truncated_backward: bool = False

    def as_json(self) -> dict:
        triples = {}
        if self.forward is not None:
            triples["forward"] = self.forward.as_json()
        if self.backward is not None:
            triples["backward"] = self.backward.as_json()
        record = {"request_id": self.request_id, "triples": triples}
        if self.truncated_forward or self.truncated_backward:
            record["truncated"] = {"forward": self.truncated_forward,
                                   "backward": self.truncated_backward}
        return record


def parse_request(record: dict) -> Request:
    try:
        request = Request(record["request_id"], record["text_a"],
                          record["text_b"], record["mode"])
    except KeyError as exc:
        raise ProtocolError(f"request record lacks {exc}")
    if request.mode not in NLI_MODES:
        raise ProtocolError(
            f"request {request.request_id}: unsupported mode {request.mode!r} "
            f"(this scorer serves {', '.join(NLI_MODES)})")
    if not request.text_a.strip() or not request.text_b.strip():
        raise ProtocolError(f"request {request.request_id}: empty text")
    return request


def read_request_file(path) -> list[Request]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = None
    requests = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"line {lineno}: invalid JSON ({exc.msg})")
        if header is None:
            if record.get("format") != FORMAT or record.get("version") != VERSION:
                raise ProtocolError(
                    f"line {lineno}: expected header "
                    f'{{"format": "{FORMAT}", "version": {VERSION}}}')
            header = record
            continue
        request = parse_request(record)
        if request.request_id in seen:
            raise ProtocolError(f"line {lineno}: duplicate id {request.request_id}")
        seen.add(request.request_id)
        requests.append(request)
    if header is None:
        raise ProtocolError("empty request file (missing header line)")
    return requests


def write_response_file(path, responses: Iterable[Response]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": FORMAT, "version": VERSION,
                             "kind": "responses"}, sort_keys=True) + "\n")
        for response in responses:
            fh.write(json.dumps(response.as_json(), sort_keys=True,
                                ensure_ascii=False) + "\n")
            count += 1
    return count
