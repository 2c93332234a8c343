"""Evaluation report assembly, rendering, and schema validation.

A report gathers per-dataset preference accuracies, standard correlations,
the winning-frequency table with the selected pooling strategy (globally
or leave-one-out), edit-distance hardness analyses, combination sweep
curves, and overall averages. Reports serialize to JSON (validated
against the shipped structural schema), aligned-column text, and SVG.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import svg
from .combine import ScoreBatch, combine, min_max_normalize
from .errors import AdvMetricsError, TooFewDatasets
from .evalstats import (
    HumanJudgmentRecord,
    edit_distance_analysis,
    kendall,
    leave_one_out_report,
    overall_performance,
    pearson,
    preference_accuracy,
    segment_level,
    select_strategy,
    spearman,
    system_level,
    validate_judgments,
    winning_frequency,
)
from .jsonl import SCORES_FORMAT, read_records, write_records
from .nli import all_strategies, pool, ref_free_summarization_strategies
from .scorer_io import load_scalar_scores, load_triple_scores, triple_map
from .suite import TestSuite, load_suite, suite_stats

CORRELATIONS = {"pearson": pearson, "kendall": kendall, "spearman": spearman}

REPORT_SCHEMA_NAME = "report.schema.json"


@dataclass
class DatasetEntry:
    """One dataset in an evaluation manifest."""

    name: str
    kind: str  # "adversarial" | "standard"
    suite: Optional[str] = None
    judgments: Optional[str] = None
    level: str = "segment"          # standard datasets: segment | system
    correlation: str = "pearson"
    scalar_scores: dict[str, str] = field(default_factory=dict)
    nli_triples: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_json(cls, record: dict) -> "DatasetEntry":
        entry = cls(
            name=record["name"],
            kind=record["kind"],
            suite=record.get("suite"),
            judgments=record.get("judgments"),
            level=record.get("level", "segment"),
            correlation=record.get("correlation", "pearson"),
            scalar_scores=dict(record.get("scalar_scores", {})),
            nli_triples=dict(record.get("nli_triples", {})),
        )
        if entry.kind not in ("adversarial", "standard"):
            raise ValueError(f"dataset {entry.name}: bad kind {entry.kind!r}")
        if entry.kind == "adversarial" and not entry.suite:
            raise ValueError(f"dataset {entry.name}: adversarial needs a suite")
        if entry.kind == "standard" and not entry.judgments:
            raise ValueError(f"dataset {entry.name}: standard needs judgments")
        return entry


def load_manifest(path) -> list[DatasetEntry]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    base = Path(path).parent

    def resolve(p):
        return str((base / p)) if p and not Path(p).is_absolute() else p

    entries = []
    for record in data["datasets"]:
        entry = DatasetEntry.from_json(record)
        entry.suite = resolve(entry.suite)
        entry.judgments = resolve(entry.judgments)
        entry.scalar_scores = {m: resolve(p) for m, p in entry.scalar_scores.items()}
        entry.nli_triples = {m: resolve(p) for m, p in entry.nli_triples.items()}
        entries.append(entry)
    return entries


def load_judgments(path) -> list[HumanJudgmentRecord]:
    _, records = read_records(path, SCORES_FORMAT)
    judgments = [HumanJudgmentRecord.from_json(r) for r in records]
    validate_judgments(judgments)
    return judgments


def save_judgments(path, judgments: Sequence[HumanJudgmentRecord]) -> int:
    return write_records(path, SCORES_FORMAT,
                         (j.to_json() for j in judgments),
                         header_extra={"kind": "judgments"})


def _accuracy_block(result) -> dict:
    return {
        "accuracy": result.accuracy,
        "correct": result.correct,
        "total": result.total,
        "ties": result.ties,
        "per_phenomenon": {
            label: {"accuracy": p.accuracy, "correct": p.correct,
                    "total": p.total, "ties": p.ties}
            for label, p in result.per_phenomenon.items()},
    }


def _standard_value(scores: Mapping[str, float], judgments, level: str,
                    correlation_name: str) -> dict:
    correlation = CORRELATIONS[correlation_name]
    if level == "system":
        result = system_level(scores, judgments, correlation)
        return {"level": "system", "correlation": result.value,
                "statistic": correlation_name, "systems": result.systems,
                "degenerate": result.degenerate}
    result = segment_level(scores, judgments, correlation)
    return {"level": "segment", "correlation": result.value,
            "statistic": correlation_name, "pairs": result.pairs,
            "dropped_scores": result.dropped_scores,
            "dropped_judgments": result.dropped_judgments}


def _pooled_standard_scores(responses, strategy) -> dict[str, float]:
    return {rid: pool(r.forward, r.backward, strategy)
            for rid, r in responses.items()}


def build_report(entries: Sequence[DatasetEntry],
                 pooling: str = "auto",
                 forward_only: Optional[bool] = None) -> dict:
    """Evaluate every dataset entry and assemble the full report.

    ``pooling`` is "auto" (winning frequency over all datasets), "auto-loo"
    (held-out winning frequency per dataset), or an explicit strategy label
    like "bi:e". ``forward_only`` restricts candidate strategies for
    triples without a backward direction (auto-detected when None).
    """
    adversarial: dict[str, dict] = {}
    standard: dict[str, dict] = {}
    edit_distance: dict[str, dict] = {}
    stats_block: dict[str, dict] = {}
    grid: dict = {}
    kinds: dict[str, str] = {}
    suites: dict[str, TestSuite] = {}
    triples_by_dataset: dict[str, dict[str, dict]] = {}
    judgments_by_dataset: dict[str, list[HumanJudgmentRecord]] = {}
    saw_backward_gap = False

    for entry in entries:
        kinds[entry.name] = entry.kind
        if entry.kind == "adversarial":
            suite = load_suite(entry.suite)
            suites[entry.name] = suite
            stats = suite_stats(suite)
            stats_block[entry.name] = {
                "counts": stats.counts,
                "skipped": stats.skipped,
                "mean_para_distance": stats.mean_para_distance,
                "mean_adv_distance": stats.mean_adv_distance,
            }
            block = adversarial.setdefault(entry.name, {})
            for metric, path in sorted(entry.scalar_scores.items()):
                _, entries_map = load_scalar_scores(path)
                para, adv = _split_scalar(entries_map)
                result = preference_accuracy(para, adv)
                block[metric] = _accuracy_block(result)
                analysis = edit_distance_analysis(suite, para, adv)
                edit_distance[f"{entry.name}/{metric}"] = {
                    "mean_distance_failures": analysis.mean_distance_failures,
                    "mean_distance_successes": analysis.mean_distance_successes,
                    "gap": analysis.gap,
                    "failures": analysis.failures,
                    "successes": analysis.successes,
                }
        else:
            judgments_by_dataset[entry.name] = load_judgments(entry.judgments)
            block = standard.setdefault(entry.name, {})
            for metric, path in sorted(entry.scalar_scores.items()):
                _, entries_map = load_scalar_scores(path)
                block[metric] = _standard_value(
                    entries_map, judgments_by_dataset[entry.name],
                    entry.level, entry.correlation)

        for metric, path in sorted(entry.nli_triples.items()):
            _, responses = load_triple_scores(path)
            triples_by_dataset.setdefault(entry.name, {})[metric] = responses
            if any(r.backward is None for r in responses.values()):
                saw_backward_gap = True

    if forward_only is None:
        forward_only = saw_backward_gap
    strategies = (ref_free_summarization_strategies() if forward_only
                  else all_strategies())

    # per-strategy performance grid for every (dataset, nli metric) cell;
    # a strategy whose pooled scores collapse to a constant cannot win
    from .errors import AllTied, ConstantVector
    for entry in entries:
        for metric, responses in triples_by_dataset.get(entry.name, {}).items():
            for strategy in strategies:
                try:
                    if entry.kind == "adversarial":
                        instance_triples = triple_map(responses)
                        para = {i: pool(t.para_fwd, t.para_bwd, strategy)
                                for i, t in instance_triples.items()}
                        adv = {i: pool(t.adv_fwd, t.adv_bwd, strategy)
                               for i, t in instance_triples.items()}
                        value = preference_accuracy(para, adv).accuracy
                    else:
                        pooled = _pooled_standard_scores(responses, strategy)
                        value = _standard_value(
                            pooled, judgments_by_dataset[entry.name],
                            entry.level, entry.correlation)["correlation"]
                except (ConstantVector, AllTied):
                    value = float("-inf")
                grid[(strategy, entry.name, metric)] = value

    report: dict = {
        "kind": "eval-report",
        "version": 1,
        "pooling_mode": pooling,
        "forward_only": forward_only,
        "adversarial": adversarial,
        "standard": standard,
        "suite_stats": stats_block,
        "edit_distance": edit_distance,
    }

    if grid:
        table = winning_frequency(grid, kinds, strategies)
        report["winning_frequency"] = {
            s.label: {"adversarial": c.adversarial, "standard": c.standard}
            for s, c in table.items() if c.total}
        if pooling in ("auto", "auto-loo"):
            selected = select_strategy(grid, kinds, strategies)
        else:
            from .nli import PoolingStrategy
            selected = PoolingStrategy.parse(pooling)
        report["selected_strategy"] = selected.label

        nli_metrics = sorted({m for (_, _, m) in grid})
        datasets_in_grid = sorted({d for (_, d, _) in grid})
        loo: dict[str, dict] = {}
        if pooling == "auto-loo" and len(datasets_in_grid) >= 2:
            for metric in nli_metrics:
                metric_grid = {k: v for k, v in grid.items() if k[2] == metric}
                try:
                    for row in leave_one_out_report(metric_grid, kinds, metric,
                                                    strategies):
                        loo.setdefault(metric, {})[row.dataset] = {
                            "strategy": row.strategy.label,
                            "performance": row.performance,
                            "global_strategy": row.global_strategy.label,
                            "global_performance": row.global_performance,
                            "delta": row.delta,
                        }
                except TooFewDatasets:
                    pass
            report["leave_one_out"] = loo

        # evaluate the pooled metric rows at the chosen strategy
        for entry in entries:
            for metric, responses in triples_by_dataset.get(entry.name, {}).items():
                if pooling == "auto-loo" and metric in loo \
                        and entry.name in loo[metric]:
                    from .nli import PoolingStrategy
                    strategy = PoolingStrategy.parse(
                        loo[metric][entry.name]["strategy"])
                else:
                    strategy = selected
                row_name = f"{metric}@{strategy.label}"
                if entry.kind == "adversarial":
                    instance_triples = triple_map(responses)
                    para = {i: pool(t.para_fwd, t.para_bwd, strategy)
                            for i, t in instance_triples.items()}
                    adv = {i: pool(t.adv_fwd, t.adv_bwd, strategy)
                           for i, t in instance_triples.items()}
                    result = preference_accuracy(para, adv)
                    adversarial.setdefault(entry.name, {})[row_name] = \
                        _accuracy_block(result)
                    analysis = edit_distance_analysis(
                        suites[entry.name], para, adv)
                    edit_distance[f"{entry.name}/{row_name}"] = {
                        "mean_distance_failures": analysis.mean_distance_failures,
                        "mean_distance_successes": analysis.mean_distance_successes,
                        "gap": analysis.gap,
                        "failures": analysis.failures,
                        "successes": analysis.successes,
                    }
                else:
                    pooled = _pooled_standard_scores(responses, strategy)
                    standard.setdefault(entry.name, {})[row_name] = \
                        _standard_value(pooled,
                                        judgments_by_dataset[entry.name],
                                        entry.level, entry.correlation)

    report["overall"] = _overall_block(adversarial, standard)
    return report


def _split_scalar(entries_map: Mapping[str, float]):
    para: dict[str, float] = {}
    adv: dict[str, float] = {}
    for key, value in entries_map.items():
        base, sep, candidate = key.rpartition("#")
        if candidate == "para":
            para[base] = value
        elif candidate == "adv":
            adv[base] = value
        else:
            raise ValueError(f"score id {key!r} lacks a #para/#adv suffix")
    return para, adv


def _overall_block(adversarial: dict, standard: dict) -> dict:
    def base_name(metric: str) -> str:
        return metric.split("@", 1)[0]

    accuracies: dict[str, list[float]] = {}
    correlations: dict[str, list[float]] = {}
    for dataset_block in adversarial.values():
        for metric, block in dataset_block.items():
            accuracies.setdefault(base_name(metric), []).append(block["accuracy"])
    for dataset_block in standard.values():
        for metric, block in dataset_block.items():
            correlations.setdefault(base_name(metric), []).append(
                block["correlation"])
    out: dict[str, dict] = {}
    for metric in sorted(set(accuracies) | set(correlations)):
        entry: dict = {}
        if metric in accuracies:
            entry["adversarial_mean"] = (sum(accuracies[metric])
                                         / len(accuracies[metric]))
        if metric in correlations:
            entry["standard_mean"] = (sum(correlations[metric])
                                      / len(correlations[metric]))
        if metric in accuracies and metric in correlations:
            entry["overall"] = overall_performance(accuracies[metric],
                                                   correlations[metric])
        out[metric] = entry
    return out


# ------------------------------------------------------------ sweep report

def build_sweep_report(suite: TestSuite,
                       nli_scores: Mapping[str, float], nli_id: str,
                       base_scores: Mapping[str, float], base_id: str,
                       weights: Sequence[float],
                       judgments: Optional[Sequence[HumanJudgmentRecord]] = None,
                       nli_standard: Optional[Mapping[str, float]] = None,
                       base_standard: Optional[Mapping[str, float]] = None,
                       level: str = "segment",
                       correlation: str = "pearson") -> dict:
    """Sweep the combination weight; score files carry #para/#adv suffixes.

    Normalization happens per score file (the dataset batch); when
    judgment-side scores are supplied too, each point also carries the
    standard correlation of the combined metric and the best weight is
    chosen by the joint overall performance, otherwise by accuracy.
    """
    norm_nli = min_max_normalize(ScoreBatch(nli_id, dict(nli_scores)))
    norm_base = min_max_normalize(ScoreBatch(base_id, dict(base_scores)))
    with_standard = (judgments is not None and nli_standard is not None
                     and base_standard is not None)
    if with_standard:
        norm_nli_std = min_max_normalize(ScoreBatch(nli_id, dict(nli_standard)))
        norm_base_std = min_max_normalize(ScoreBatch(base_id, dict(base_standard)))

    points = []
    for w in weights:
        combined = combine(norm_nli, norm_base, w)
        para, adv = _split_scalar(combined.entries)
        accuracy = preference_accuracy(para, adv).accuracy
        point = {"w_nli": w, "accuracy": accuracy}
        if with_standard:
            combined_std = combine(norm_nli_std, norm_base_std, w)
            point["correlation"] = _standard_value(
                combined_std.entries, judgments, level,
                correlation)["correlation"]
            point["overall"] = overall_performance(
                [accuracy], [point["correlation"]])
        points.append(point)

    best = max(points,
               key=lambda p: p.get("overall", p["accuracy"]))
    return {
        "kind": "sweep-report",
        "version": 1,
        "nli_metric": nli_id,
        "base_metric": base_id,
        "points": points,
        "best_w": best["w_nli"],
        "best": best,
    }


def _percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile, q in [0, 100]."""
    ordered = sorted(values)
    if len(ordered) == 1:
        return ordered[0]
    position = (len(ordered) - 1) * q / 100
    low = int(position)
    high = min(low + 1, len(ordered) - 1)
    fraction = position - low
    return ordered[low] * (1 - fraction) + ordered[high] * fraction


def sweep_improvements(report: dict, w_lo: float = 0.1,
                       w_hi: float = 0.9) -> dict:
    """Mean and maximal gain of the blend over the base metric alone.

    The baseline is the w=0 point (the base metric by itself); gains are
    taken over the interior weights [w_lo, w_hi], separately for accuracy
    and, when present, the joint overall performance.
    """
    points = report["points"]
    baseline = next(p for p in points if p["w_nli"] == 0.0)
    interior = [p for p in points if w_lo - 1e-9 <= p["w_nli"] <= w_hi + 1e-9]
    if not interior:
        raise ValueError(f"no sweep points inside [{w_lo}, {w_hi}]")

    def gains(key):
        return [p[key] - baseline[key] for p in interior if key in p]

    out = {"w_lo": w_lo, "w_hi": w_hi}
    accuracy_gains = gains("accuracy")
    out["accuracy"] = {"mean_improvement": sum(accuracy_gains) / len(accuracy_gains),
                       "max_improvement": max(accuracy_gains)}
    overall_gains = gains("overall")
    if overall_gains:
        out["overall"] = {"mean_improvement": sum(overall_gains) / len(overall_gains),
                          "max_improvement": max(overall_gains)}
    return out


def summarize_sweeps(reports: Sequence[dict], lo: float = 2.5,
                     hi: float = 97.5) -> dict:
    """Per-weight improvement band across several sweep runs.

    For every weight the improvement over each run's own w=0 baseline is
    collected; the summary reports the mean with a percentile interval over
    the runs (labeled as such: it is a percentile band, not a parametric
    confidence interval).
    """
    if not reports:
        raise ValueError("no sweep reports given")
    by_weight: dict[float, list[float]] = {}
    for report in reports:
        baseline = next(p for p in report["points"] if p["w_nli"] == 0.0)
        for point in report["points"]:
            by_weight.setdefault(point["w_nli"], []).append(
                point["accuracy"] - baseline["accuracy"])
    summary = {
        "kind": "sweep-summary",
        "runs": len(reports),
        "interval": [lo, hi],
        "points": [
            {"w_nli": w,
             "mean_improvement": sum(vals) / len(vals),
             "interval_low": _percentile(vals, lo),
             "interval_high": _percentile(vals, hi)}
            for w, vals in sorted(by_weight.items())
        ],
    }
    return summary


# -------------------------------------------------------------- rendering

def render_text(report: dict) -> str:
    lines: list[str] = []

    def table(title, headers, rows):
        lines.append(title)
        widths = [max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows
                  else len(str(h)) for i, h in enumerate(headers)]
        lines.append("  ".join(str(h).ljust(w) for h, w in zip(headers, widths)))
        for row in rows:
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
        lines.append("")

    if report.get("kind") == "sweep-report":
        headers = ["w_nli", "accuracy"]
        has_corr = any("correlation" in p for p in report["points"])
        if has_corr:
            headers += ["correlation", "overall"]
        rows = []
        for p in report["points"]:
            row = [f"{p['w_nli']:.2f}", f"{p['accuracy']:.4f}"]
            if has_corr:
                row += [f"{p['correlation']:.4f}", f"{p['overall']:.4f}"]
            rows.append(row)
        table(f"combination sweep: {report['nli_metric']} + "
              f"{report['base_metric']}", headers, rows)
        lines.append(f"best w_nli: {report['best_w']:.2f}")
        lines.append("")
        return "\n".join(lines)

    for dataset, metrics in sorted(report.get("adversarial", {}).items()):
        rows = []
        for metric, block in sorted(metrics.items()):
            rows.append([metric, f"{block['accuracy']:.4f}",
                         f"{block['correct']}/{block['total']}",
                         block["ties"]])
        table(f"adversarial accuracy: {dataset}",
              ["metric", "accuracy", "correct", "ties"], rows)
        phenomena = sorted({p for m in metrics.values()
                            for p in m["per_phenomenon"]})
        if phenomena:
            rows = []
            for metric, block in sorted(metrics.items()):
                row = [metric]
                for label in phenomena:
                    cell = block["per_phenomenon"].get(label)
                    row.append(f"{cell['accuracy']:.2f}" if cell else "-")
                rows.append(row)
            table(f"per-phenomenon accuracy: {dataset}",
                  ["metric", *phenomena], rows)

    for dataset, metrics in sorted(report.get("standard", {}).items()):
        rows = [[metric, block["level"], block["statistic"],
                 f"{block['correlation']:.4f}"]
                for metric, block in sorted(metrics.items())]
        table(f"standard correlations: {dataset}",
              ["metric", "level", "statistic", "correlation"], rows)

    if report.get("winning_frequency"):
        rows = [[label, f"{c['adversarial']}+{c['standard']}"]
                for label, c in sorted(report["winning_frequency"].items())]
        table("winning frequency (adversarial+standard)",
              ["strategy", "wins"], rows)
        lines.append(f"selected strategy: {report['selected_strategy']}")
        lines.append("")

    if report.get("leave_one_out"):
        rows = []
        for metric, datasets in sorted(report["leave_one_out"].items()):
            for dataset, entry in sorted(datasets.items()):
                rows.append([metric, dataset, entry["strategy"],
                             f"{entry['delta']:+.4f}"])
        table("leave-one-out strategy selection",
              ["metric", "dataset", "strategy", "delta"], rows)

    if report.get("edit_distance"):
        rows = []
        for key, block in sorted(report["edit_distance"].items()):
            gap = block["gap"]
            rows.append([key,
                         _fmt(block["mean_distance_failures"]),
                         _fmt(block["mean_distance_successes"]),
                         _fmt(gap),
                         f"{block['failures']}/{block['successes']}"])
        table("edit-distance hardness (paraphrase side)",
              ["dataset/metric", "fail mean", "success mean", "gap",
               "fail/success"], rows)

    if report.get("overall"):
        rows = []
        for metric, block in sorted(report["overall"].items()):
            rows.append([metric,
                         _fmt(block.get("adversarial_mean")),
                         _fmt(block.get("standard_mean")),
                         _fmt(block.get("overall"))])
        table("overall performance (equal-weight dataset means)",
              ["metric", "adversarial", "standard", "overall"], rows)

    return "\n".join(lines)


def _fmt(value) -> str:
    return f"{value:.4f}" if value is not None else "-"


def render_svg(report: dict) -> str:
    if report.get("kind") == "sweep-report":
        points = report["points"]
        if any("correlation" in p for p in points):
            coords = [(p["accuracy"], p["correlation"]) for p in points]
            labels = [f"w={p['w_nli']:g}" for p in points]
            return svg.path_plot(coords, labels,
                                 title="combination sweep",
                                 xlabel="adversarial accuracy",
                                 ylabel="standard correlation")
        coords = [(p["w_nli"], p["accuracy"]) for p in points]
        return svg.path_plot(coords, None, title="combination sweep",
                             xlabel="w_nli", ylabel="adversarial accuracy")
    for dataset, metrics in sorted(report.get("adversarial", {}).items()):
        labels = sorted(metrics)
        values = [metrics[m]["accuracy"] for m in labels]
        return svg.bar_chart(labels, values,
                             title=f"adversarial accuracy: {dataset}",
                             ylabel="accuracy")
    raise AdvMetricsError("nothing to plot in this report")


# ------------------------------------------------------- schema validation

def report_schema() -> dict:
    from ._data import data_path
    return json.loads(data_path(REPORT_SCHEMA_NAME).read_text(encoding="utf-8"))


def validate_schema(obj, schema: dict, path: str = "$"):
    """Minimal structural validator: type / required / properties / items."""
    expected = schema.get("type")
    if expected:
        types = {
            "object": dict, "array": list, "string": str, "boolean": bool,
            "number": (int, float), "integer": int, "null": type(None),
        }[expected]
        if expected == "number" and isinstance(obj, bool):
            raise ValueError(f"{path}: expected number, got bool")
        if not isinstance(obj, types):
            raise ValueError(f"{path}: expected {expected}, "
                             f"got {type(obj).__name__}")
    if "enum" in schema and obj not in schema["enum"]:
        raise ValueError(f"{path}: {obj!r} not in {schema['enum']}")
    if isinstance(obj, dict):
        for key in schema.get("required", []):
            if key not in obj:
                raise ValueError(f"{path}: missing required key {key!r}")
        for key, sub in schema.get("properties", {}).items():
            if key in obj:
                validate_schema(obj[key], sub, f"{path}.{key}")
        extra = schema.get("additionalProperties")
        if isinstance(extra, dict):
            for key, value in obj.items():
                if key not in schema.get("properties", {}):
                    validate_schema(value, extra, f"{path}.{key}")
    if isinstance(obj, list) and "items" in schema:
        for i, item in enumerate(obj):
            validate_schema(item, schema["items"], f"{path}[{i}]")


def validate_report(report: dict):
    schemas = report_schema()
    kind = report.get("kind")
    if kind not in schemas:
        raise ValueError(f"unknown report kind {kind!r}")
    validate_schema(report, schemas[kind])
