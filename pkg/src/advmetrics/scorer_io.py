"""Pluggable-metric boundary: request/response files, processes, builtins.

Scoring is batch-shaped: the harness writes a request file (one text pair
per line), a scorer child process reads it and writes a response file, and
the harness validates coverage before using the scores. A stdin/stdout
line mode with the same record schema exists for long-running scorers that
want to amortize model loading. All scorers must emit higher-is-better
scores; the builtin edit-distance scorer is negated for that reason.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import (
    CoverageGap,
    EmptyInput,
    InvalidTriple,
    ParseError,
    ScorerFailed,
    ScorerTimeout,
    UnknownScorer,
)
from .jsonl import (
    SCORES_FORMAT,
    dumps,
    read_records,
    read_records_lenient,
    write_records,
)
from .nli import InstanceTriples, NliTriple
from .textops import levenshtein_normalized, rouge_l_f1, sentence_bleu


class Mode(str, Enum):
    SCALAR = "scalar"
    NLI_FORWARD = "nli_forward"
    NLI_BACKWARD = "nli_backward"
    NLI_BOTH = "nli_both"

    @property
    def wants_forward(self) -> bool:
        return self in (Mode.NLI_FORWARD, Mode.NLI_BOTH)

    @property
    def wants_backward(self) -> bool:
        return self in (Mode.NLI_BACKWARD, Mode.NLI_BOTH)


@dataclass(frozen=True)
class ScoreRequest:
    request_id: str
    text_a: str  # premise slot: reference or source
    text_b: str  # hypothesis slot: candidate
    mode: Mode

    def __post_init__(self):
        if not self.text_a.strip() or not self.text_b.strip():
            raise EmptyInput(f"request {self.request_id}: texts must be non-empty")

    def to_json(self) -> dict:
        return {"request_id": self.request_id, "text_a": self.text_a,
                "text_b": self.text_b, "mode": self.mode.value}

    @classmethod
    def from_json(cls, record: dict) -> "ScoreRequest":
        return cls(record["request_id"], record["text_a"], record["text_b"],
                   Mode(record["mode"]))


@dataclass(frozen=True)
class ScoreResponse:
    request_id: str
    scalar: Optional[float] = None
    forward: Optional[NliTriple] = None
    backward: Optional[NliTriple] = None

    def to_json(self) -> dict:
        record: dict = {"request_id": self.request_id}
        if self.scalar is not None:
            record["scalar"] = self.scalar
        triples = {}
        if self.forward is not None:
            triples["forward"] = {"e": self.forward.e, "c": self.forward.c,
                                  "n": self.forward.n}
        if self.backward is not None:
            triples["backward"] = {"e": self.backward.e, "c": self.backward.c,
                                   "n": self.backward.n}
        if triples:
            record["triples"] = triples
        return record

    @classmethod
    def from_json(cls, record: dict) -> "ScoreResponse":
        triples = record.get("triples", {})

        def parse(side):
            raw = triples.get(side)
            if raw is None:
                return None
            return NliTriple(float(raw["e"]), float(raw["c"]), float(raw["n"]))

        scalar = record.get("scalar")
        return cls(
            request_id=record["request_id"],
            scalar=float(scalar) if scalar is not None else None,
            forward=parse("forward"),
            backward=parse("backward"),
        )

    def matches_mode(self, mode: Mode) -> bool:
        if mode is Mode.SCALAR:
            return self.scalar is not None
        ok = True
        if mode.wants_forward:
            ok = ok and self.forward is not None
        if mode.wants_backward:
            ok = ok and self.backward is not None
        return ok


def write_requests(pairs: Sequence[tuple[str, str, str]], mode: Mode,
                   path) -> int:
    """Write a request file; pairs are (request_id, text_a, text_b).

    Records are ordered by request_id for determinism; duplicate ids are
    rejected before anything is written.
    """
    if not pairs:
        raise EmptyInput("no request pairs given")
    ids = [p[0] for p in pairs]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate request ids: {dupes[:5]}")
    requests = sorted(
        (ScoreRequest(rid, a, b, mode) for rid, a, b in pairs),
        key=lambda r: r.request_id)
    return write_records(path, SCORES_FORMAT,
                         (r.to_json() for r in requests),
                         header_extra={"kind": "requests", "mode": mode.value})


def read_requests(path) -> list[ScoreRequest]:
    _, records = read_records(path, SCORES_FORMAT)
    return [ScoreRequest.from_json(r) for r in records]


def read_responses(path, expected_ids: Optional[Iterable[str]] = None,
                   ) -> dict[str, ScoreResponse]:
    """Read a response file; coverage of ``expected_ids`` must be exact."""
    header, records, problems = read_records_lenient(path, SCORES_FORMAT)
    if header is None:
        raise ParseError(path, problems)
    responses: dict[str, ScoreResponse] = {}
    for lineno, record in records:
        try:
            response = ScoreResponse.from_json(record)
        except (KeyError, TypeError, ValueError, InvalidTriple) as exc:
            problems.append((lineno, f"bad response record: {exc}"))
            continue
        if response.scalar is None and response.forward is None \
                and response.backward is None:
            problems.append((lineno, "response carries neither scalar nor triples"))
            continue
        if response.request_id in responses:
            problems.append((lineno, f"duplicate id {response.request_id}"))
            continue
        responses[response.request_id] = response
    if problems:
        raise ParseError(path, problems)
    if expected_ids is not None:
        expected = set(expected_ids)
        got = set(responses)
        if expected != got:
            raise CoverageGap(missing=expected - got, extra=got - expected)
    return responses


def write_responses(path, responses: Iterable[ScoreResponse]) -> int:
    return write_records(path, SCORES_FORMAT,
                         (r.to_json() for r in responses),
                         header_extra={"kind": "responses"})


# ------------------------------------------------------------- subprocesses

def _sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _meta_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".meta.json")


def run_external_scorer(command_template: str, requests_path,
                        out_path=None, timeout: Optional[float] = None,
                        expected_ids: Optional[Iterable[str]] = None,
                        ) -> Path:
    """Run a scorer child process over a request file.

    The template must contain ``{in}`` and ``{out}`` placeholders. Reruns
    are restart-safe: when the response file already exists, was produced
    for a byte-identical request file (content hash), and covers the
    expected ids, the scorer is not invoked again.
    """
    if "{in}" not in command_template or "{out}" not in command_template:
        raise ValueError("command template needs {in} and {out} placeholders")
    requests_path = Path(requests_path)
    out_path = Path(out_path) if out_path is not None \
        else requests_path.with_name(requests_path.stem + ".responses.jsonl")
    expected = set(expected_ids) if expected_ids is not None \
        else {r.request_id for r in read_requests(requests_path)}
    request_hash = _sha256_file(requests_path)

    meta_path = _meta_path(out_path)
    if out_path.exists() and meta_path.exists():
        try:
            meta = json.loads(meta_path.read_text())
            if meta.get("request_sha256") == request_hash:
                read_responses(out_path, expected)
                return out_path  # complete cached run
        except (ParseError, CoverageGap, json.JSONDecodeError):
            pass  # stale or partial output: rerun the scorer

    command = command_template.replace("{in}", str(requests_path)) \
                              .replace("{out}", str(out_path))
    try:
        proc = subprocess.run(shlex.split(command), capture_output=True,
                              text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        raise ScorerTimeout(f"scorer exceeded {timeout}s: {command}")
    if proc.returncode != 0:
        raise ScorerFailed(command, proc.returncode, proc.stderr[-2000:])
    responses = read_responses(out_path, expected)
    _check_response_shapes(requests_path, responses)
    meta_path.write_text(dumps({"request_sha256": request_hash,
                                "command": command_template}) + "\n")
    return out_path


def _check_response_shapes(requests_path, responses: Mapping[str, ScoreResponse]):
    """Every response must carry what its request's mode asked for."""
    problems = []
    for request in read_requests(requests_path):
        response = responses.get(request.request_id)
        if response is not None and not response.matches_mode(request.mode):
            problems.append((0, f"response {request.request_id} does not "
                                f"match mode {request.mode.value}"))
    if problems:
        raise ParseError(requests_path, problems)


def run_sharded_scorer(command_template: str, requests_path, out_path,
                       shards: int, timeout: Optional[float] = None) -> Path:
    """Split a request file into shards, score them concurrently, merge.

    Response merging is by id and therefore associative and
    order-independent; the merged file covers exactly the original ids.
    """
    requests_path = Path(requests_path)
    out_path = Path(out_path)
    requests = read_requests(requests_path)
    if shards <= 1 or len(requests) <= 1:
        return run_external_scorer(command_template, requests_path,
                                   out_path, timeout=timeout)
    mode = requests[0].mode
    shard_inputs = []
    for k in range(min(shards, len(requests))):
        chunk = requests[k::shards]
        if not chunk:
            continue
        shard_path = out_path.with_name(f"{out_path.stem}.shard{k}.requests.jsonl")
        write_requests([(r.request_id, r.text_a, r.text_b) for r in chunk],
                       mode, shard_path)
        shard_inputs.append(shard_path)

    def run_one(shard_path: Path) -> dict[str, ScoreResponse]:
        result = run_external_scorer(command_template, shard_path,
                                     timeout=timeout)
        return read_responses(result)

    merged: dict[str, ScoreResponse] = {}
    with ThreadPoolExecutor(max_workers=len(shard_inputs)) as pool:
        for responses in pool.map(run_one, shard_inputs):
            merged.update(responses)
    expected = {r.request_id for r in requests}
    if set(merged) != expected:
        raise CoverageGap(missing=expected - set(merged),
                          extra=set(merged) - expected)
    write_responses(out_path, (merged[rid] for rid in sorted(merged)))
    _meta_path(out_path).write_text(
        dumps({"request_sha256": _sha256_file(requests_path)}) + "\n")
    return out_path


def run_line_scorer(command: str, requests: Sequence[ScoreRequest],
                    timeout: Optional[float] = None) -> dict[str, ScoreResponse]:
    """Drive a long-running scorer over its stdin/stdout line protocol.

    One request per input line, one response per output line, in order.
    """
    proc = subprocess.Popen(shlex.split(command), stdin=subprocess.PIPE,
                            stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                            text=True)
    responses: dict[str, ScoreResponse] = {}
    try:
        for request in requests:
            proc.stdin.write(dumps(request.to_json()) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
            if not line:
                raise ScorerFailed(command, proc.poll() or -1,
                                   proc.stderr.read()[-2000:])
            response = ScoreResponse.from_json(json.loads(line))
            responses[response.request_id] = response
        proc.stdin.close()
        proc.wait(timeout=timeout)
    except subprocess.TimeoutExpired:
        proc.kill()
        raise ScorerTimeout(f"line scorer exceeded {timeout}s: {command}")
    finally:
        if proc.poll() is None:
            proc.kill()
    return responses


# ------------------------------------------------------------ builtin side

def _neg_edit_distance(text_a: str, text_b: str) -> float:
    return -levenshtein_normalized(text_a, text_b)


BUILTIN_SCORERS: dict[str, Callable[[str, str], float]] = {
    # higher is better for every scorer, hence the negated edit distance
    "sentbleu": lambda a, b: sentence_bleu(b, a),
    "rougeL": lambda a, b: rouge_l_f1(b, a),
    "neg_edit_distance": _neg_edit_distance,
}


def builtin_scorer(name: str, pairs: Sequence[tuple[str, str, str]],
                   ) -> dict[str, ScoreResponse]:
    """Score (request_id, text_a, text_b) pairs in-process."""
    if name not in BUILTIN_SCORERS:
        raise UnknownScorer(
            f"{name!r}; available: {', '.join(sorted(BUILTIN_SCORERS))}")
    fn = BUILTIN_SCORERS[name]
    return {rid: ScoreResponse(request_id=rid, scalar=fn(a, b))
            for rid, a, b in pairs}


# ------------------------------------------------------- suite orchestration

PARA_SUFFIX = "#para"
ADV_SUFFIX = "#adv"


def requests_for_suite(suite, mode: Mode) -> list[tuple[str, str, str]]:
    """Both candidates of every instance, scored against the anchor."""
    pairs = []
    for inst in suite.instances:
        pairs.append((inst.id + PARA_SUFFIX, inst.anchor, inst.cand_para))
        pairs.append((inst.id + ADV_SUFFIX, inst.anchor, inst.cand_adv))
    return pairs


def split_candidate_id(request_id: str) -> tuple[str, str]:
    base, sep, candidate = request_id.rpartition("#")
    if not sep or candidate not in ("para", "adv"):
        raise ValueError(f"not a suite request id: {request_id!r}")
    return base, candidate


def scalar_batches(responses: Mapping[str, ScoreResponse], metric_id: str,
                   ) -> tuple[dict[str, float], dict[str, float]]:
    """Split suite responses into (para, adv) score mappings."""
    para: dict[str, float] = {}
    adv: dict[str, float] = {}
    for rid, response in responses.items():
        if response.scalar is None:
            raise ValueError(f"response {rid} has no scalar score")
        base, candidate = split_candidate_id(rid)
        (para if candidate == "para" else adv)[base] = response.scalar
    return para, adv


def triple_map(responses: Mapping[str, ScoreResponse],
               ) -> dict[str, InstanceTriples]:
    """Assemble per-instance candidate triples from suite responses."""
    sides: dict[str, dict[str, ScoreResponse]] = {}
    for rid, response in responses.items():
        base, candidate = split_candidate_id(rid)
        sides.setdefault(base, {})[candidate] = response
    out = {}
    for base, pair in sides.items():
        if set(pair) != {"para", "adv"}:
            raise CoverageGap(missing={base + PARA_SUFFIX, base + ADV_SUFFIX}
                              - {base + "#" + c for c in pair})
        out[base] = InstanceTriples(
            para_fwd=pair["para"].forward, para_bwd=pair["para"].backward,
            adv_fwd=pair["adv"].forward, adv_bwd=pair["adv"].backward)
    return out


# --------------------------------------------------------------- score files

def save_scalar_scores(path, metric_id: str,
                       entries: Mapping[str, float]) -> int:
    return write_records(
        path, SCORES_FORMAT,
        ({"instance_id": k, "metric_id": metric_id, "score": entries[k]}
         for k in sorted(entries)),
        header_extra={"kind": "scores", "metric_id": metric_id})


def load_scalar_scores(path) -> tuple[str, dict[str, float]]:
    header, records = read_records(path, SCORES_FORMAT)
    entries = {}
    metric_ids = set()
    for record in records:
        entries[record["instance_id"]] = float(record["score"])
        metric_ids.add(record.get("metric_id", ""))
    metric_id = header.get("metric_id") or (metric_ids.pop() if len(metric_ids) == 1
                                            else "scores")
    return metric_id, entries


def save_triple_scores(path, metric_id: str,
                       responses: Mapping[str, ScoreResponse]) -> int:
    def rows():
        for rid in sorted(responses):
            response = responses[rid]
            for direction, triple in (("forward", response.forward),
                                      ("backward", response.backward)):
                if triple is not None:
                    yield {"instance_id": rid, "metric_id": metric_id,
                           "e": triple.e, "c": triple.c, "n": triple.n,
                           "direction": direction}
    return write_records(path, SCORES_FORMAT, rows(),
                         header_extra={"kind": "triples", "metric_id": metric_id})


def load_triple_scores(path) -> tuple[str, dict[str, ScoreResponse]]:
    header, records = read_records(path, SCORES_FORMAT)
    sides: dict[str, dict[str, NliTriple]] = {}
    for record in records:
        triple = NliTriple(float(record["e"]), float(record["c"]),
                           float(record["n"]))
        sides.setdefault(record["instance_id"], {})[record["direction"]] = triple
    responses = {
        rid: ScoreResponse(request_id=rid, forward=pair.get("forward"),
                           backward=pair.get("backward"))
        for rid, pair in sides.items()}
    return header.get("metric_id", "nli"), responses
