"""Command-line pipeline: generate, score, evaluate, combine, report."""

from __future__ import annotations

import json
import sys
from functools import wraps
from pathlib import Path

import click

from . import reporting, scorer_io
from .combine import DEFAULT_WEIGHT_GRID
from .errors import AdvMetricsError
from .jsonl import dumps
from .perturb import Lexicon
from .scorer_io import Mode
from .suite import (
    Setting,
    build_ref_based,
    build_ref_free,
    load_seeds,
    load_suite,
    parse_phenomena_arg,
    save_suite,
    suite_stats,
)


def _fail(exc: Exception):
    summary = {"error": type(exc).__name__, "message": str(exc)}
    click.echo(dumps(summary), err=True)
    sys.exit(1)


def harness_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (AdvMetricsError, ValueError, OSError, KeyError) as exc:
            _fail(exc)
    return wrapper


def config_option(fn):
    return click.option(
        "--config", "config_path", type=click.Path(exists=True),
        default=None, help="Declarative run file (JSON); flags override it.",
    )(fn)


def apply_config(ctx: click.Context, config_path):
    """Fill parameters from the run file wherever no flag was given."""
    if not config_path:
        return
    config = json.loads(Path(config_path).read_text(encoding="utf-8"))
    for name, value in config.items():
        key = name.replace("-", "_")
        if key not in ctx.params:
            raise ValueError(f"unknown config key {name!r}")
        source = ctx.get_parameter_source(key)
        if source is not None and source.name == "DEFAULT":
            ctx.params[key] = value


@click.group()
def main():
    """Adversarial robustness harness for NLG evaluation metrics."""


@main.command()
@click.option("--seeds", "seeds_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--setting", type=click.Choice(["ref-based", "ref-free"]),
              default="ref-based", show_default=True)
@click.option("--phenomena", default=",".join(
    ["addition", "omission", "mismatch_noun", "mismatch_verb", "mismatch_adj",
     "negation", "number", "pronoun", "name", "jumbling", "spelling", "svd"]),
    show_default=False,
    help="Comma list; compose with '+', e.g. number+negation. Default: all 12.")
@click.option("--seed", default=0, show_default=True,
              help="Global rng seed; all randomness derives from it.")
@click.option("--para-mode", type=click.Choice(["original", "backtranslation"]),
              default="original", show_default=True,
              help="Provenance of the seed paraphrase field (ref-based).")
@click.option("--lexicon", "lexicon_dir", type=click.Path(exists=True),
              default=None, help="Directory of lexicon data files.")
@click.option("--name", default=None, help="Suite name (defaults to the output stem).")
@click.option("--task", type=click.Choice(["mt", "summarization"]),
              default="mt", show_default=True)
@config_option
@click.pass_context
@harness_errors
def generate(ctx, seeds_path, out_path, setting, phenomena, seed, para_mode,
             lexicon_dir, name, task, config_path):
    """Build a preference test suite from a seeds file."""
    apply_config(ctx, config_path)
    p = ctx.params
    lexicon = Lexicon.load(p["lexicon_dir"]) if p["lexicon_dir"] \
        else Lexicon.default()
    seeds = load_seeds(p["seeds_path"])
    kinds = parse_phenomena_arg(p["phenomena"])
    suite_name = p["name"] or Path(p["out_path"]).stem
    if p["setting"] == "ref-based":
        suite = build_ref_based(seeds, kinds, lexicon, seed=p["seed"],
                                para_mode=p["para_mode"], name=suite_name,
                                task=p["task"])
    else:
        suite = build_ref_free(seeds, kinds, lexicon, seed=p["seed"],
                               name=suite_name, task=p["task"])
    suite.validate()
    save_suite(p["out_path"], suite)
    stats = suite_stats(suite)
    click.echo(f"suite: {suite_name} ({len(suite.instances)} instances)")
    for label in sorted(set(stats.counts) | set(stats.skipped)):
        built = stats.counts.get(label, 0)
        skipped = stats.skipped.get(label, 0)
        click.echo(f"  {label}: {built} built, {skipped} skipped")


@main.command()
@click.option("--suite", "suite_path", type=click.Path(exists=True),
              default=None, help="Score both candidates of a suite.")
@click.option("--pairs", "pairs_path", type=click.Path(exists=True),
              default=None, help="Score an existing request file instead.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--scorer", "builtin_name", default=None,
              help="Builtin scorer: sentbleu, rougeL, neg_edit_distance.")
@click.option("--command", "command_template", default=None,
              help="External scorer command with {in} and {out} placeholders.")
@click.option("--mode", type=click.Choice(["scalar", "nli"]), default="scalar",
              show_default=True)
@click.option("--ref-free-summarization", is_flag=True,
              help="Request forward-direction triples only.")
@click.option("--metric-id", default=None)
@click.option("--shards", default=1, show_default=True)
@click.option("--timeout", type=float, default=None)
@click.option("--workdir", type=click.Path(), default=None,
              help="Where request/response files are kept (default: beside --out).")
@config_option
@click.pass_context
@harness_errors
def score(ctx, suite_path, pairs_path, out_path, builtin_name,
          command_template, mode, ref_free_summarization, metric_id, shards,
          timeout, workdir, config_path):
    """Score a suite (or a pair file) with a builtin or external scorer."""
    apply_config(ctx, config_path)
    p = ctx.params
    if bool(p["suite_path"]) == bool(p["pairs_path"]):
        raise ValueError("give exactly one of --suite or --pairs")
    if bool(p["builtin_name"]) == bool(p["command_template"]):
        raise ValueError("give exactly one of --scorer or --command")

    forward_only = p["ref_free_summarization"]
    if p["suite_path"]:
        suite = load_suite(p["suite_path"])
        if suite.config is not None and suite.config.task == "summarization" \
                and suite.setting is Setting.REF_FREE:
            forward_only = True
        request_mode = Mode.SCALAR if p["mode"] == "scalar" else (
            Mode.NLI_FORWARD if forward_only else Mode.NLI_BOTH)
        pairs = scorer_io.requests_for_suite(suite, request_mode)
    else:
        requests = scorer_io.read_requests(p["pairs_path"])
        request_mode = requests[0].mode
        pairs = [(r.request_id, r.text_a, r.text_b) for r in requests]

    out = Path(p["out_path"])
    metric = p["metric_id"] or p["builtin_name"] \
        or Path(p["command_template"].split()[0]).stem

    if p["builtin_name"]:
        if p["mode"] != "scalar":
            raise ValueError("builtin scorers are scalar-only")
        responses = scorer_io.builtin_scorer(p["builtin_name"], pairs)
    else:
        work = Path(p["workdir"]) if p["workdir"] else out.parent
        work.mkdir(parents=True, exist_ok=True)
        requests_path = work / (out.stem + ".requests.jsonl")
        responses_path = work / (out.stem + ".responses.jsonl")
        scorer_io.write_requests(pairs, request_mode, requests_path)
        if p["shards"] > 1:
            scorer_io.run_sharded_scorer(p["command_template"], requests_path,
                                         responses_path, shards=p["shards"],
                                         timeout=p["timeout"])
        else:
            scorer_io.run_external_scorer(p["command_template"], requests_path,
                                          responses_path, timeout=p["timeout"])
        responses = scorer_io.read_responses(responses_path,
                                             [pair[0] for pair in pairs])

    if p["mode"] == "scalar":
        entries = {}
        for rid, response in responses.items():
            if response.scalar is None:
                raise ValueError(f"scorer returned no scalar for {rid}")
            entries[rid] = response.scalar
        count = scorer_io.save_scalar_scores(out, metric, entries)
    else:
        count = scorer_io.save_triple_scores(out, metric, responses)
    click.echo(f"wrote {count} score records for {metric} to {out}")


def _parse_mapping(values: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for item in values:
        name, sep, path = item.partition("=")
        if not sep:
            raise ValueError(f"expected NAME=PATH, got {item!r}")
        out[name] = path
    return out


@main.command()
@click.option("--manifest", "manifest_path", type=click.Path(exists=True),
              default=None, help="Multi-dataset manifest JSON.")
@click.option("--suite", "suite_path", type=click.Path(exists=True),
              default=None, help="Single adversarial suite to evaluate.")
@click.option("--scores", "scores_args", multiple=True,
              help="METRIC=PATH scalar score file (repeatable).")
@click.option("--triples", "triples_args", multiple=True,
              help="METRIC=PATH triple score file (repeatable).")
@click.option("--name", default="dataset", show_default=True)
@click.option("--pooling", default="auto", show_default=True,
              help='"auto", "auto-loo", or an explicit label like "bi:e".')
@click.option("--forward-only/--all-directions", "forward_only", default=None,
              help="Restrict pooling strategies (default: auto-detect).")
@click.option("--report", "report_path", required=True, type=click.Path())
@click.option("--text", "text_path", type=click.Path(), default=None)
@click.option("--svg", "svg_path", type=click.Path(), default=None)
@config_option
@click.pass_context
@harness_errors
def evaluate(ctx, manifest_path, suite_path, scores_args, triples_args, name,
             pooling, forward_only, report_path, text_path, svg_path,
             config_path):
    """Evaluate scored datasets into an eval report."""
    apply_config(ctx, config_path)
    p = ctx.params
    if bool(p["manifest_path"]) == bool(p["suite_path"]):
        raise ValueError("give exactly one of --manifest or --suite")
    if p["manifest_path"]:
        entries = reporting.load_manifest(p["manifest_path"])
    else:
        entries = [reporting.DatasetEntry(
            name=p["name"], kind="adversarial", suite=p["suite_path"],
            scalar_scores=_parse_mapping(p["scores_args"]),
            nli_triples=_parse_mapping(p["triples_args"]))]
    report = reporting.build_report(entries, pooling=p["pooling"],
                                    forward_only=p["forward_only"])
    reporting.validate_report(report)
    Path(p["report_path"]).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    text = reporting.render_text(report)
    if p["text_path"]:
        Path(p["text_path"]).write_text(text, encoding="utf-8")
    if p["svg_path"]:
        Path(p["svg_path"]).write_text(reporting.render_svg(report),
                                       encoding="utf-8")
    click.echo(text)


def _parse_weights(arg: str) -> list[float]:
    if ":" in arg:
        start, stop, step = (float(x) for x in arg.split(":"))
        weights = []
        w = start
        while w <= stop + 1e-9:
            weights.append(round(w, 10))
            w += step
        return weights
    return [float(x) for x in arg.split(",") if x.strip()]


@main.command()
@click.option("--suite", "suite_path", required=True, type=click.Path(exists=True))
@click.option("--nli-scores", "nli_scores_path", required=True,
              type=click.Path(exists=True),
              help="Suite-side scalar scores of the inference metric "
                   "(pooled, #para/#adv ids).")
@click.option("--base-scores", "base_scores_path", required=True,
              type=click.Path(exists=True))
@click.option("--judgments", "judgments_path", type=click.Path(exists=True),
              default=None)
@click.option("--nli-standard", "nli_standard_path", type=click.Path(exists=True),
              default=None, help="Judgment-side scores of the inference metric.")
@click.option("--base-standard", "base_standard_path", type=click.Path(exists=True),
              default=None)
@click.option("--level", type=click.Choice(["segment", "system"]),
              default="segment", show_default=True)
@click.option("--correlation", type=click.Choice(["pearson", "kendall",
                                                  "spearman"]),
              default="pearson", show_default=True)
@click.option("--weights", default="0.0:1.0:0.1", show_default=True,
              help="Grid as start:stop:step or a comma list.")
@click.option("--report", "report_path", required=True, type=click.Path())
@click.option("--text", "text_path", type=click.Path(), default=None)
@click.option("--svg", "svg_path", type=click.Path(), default=None)
@config_option
@click.pass_context
@harness_errors
def combine(ctx, suite_path, nli_scores_path, base_scores_path, judgments_path,
            nli_standard_path, base_standard_path, level, correlation, weights,
            report_path, text_path, svg_path, config_path):
    """Sweep the weighted combination of two scored metrics."""
    apply_config(ctx, config_path)
    p = ctx.params
    suite = load_suite(p["suite_path"])
    nli_id, nli_scores = scorer_io.load_scalar_scores(p["nli_scores_path"])
    base_id, base_scores = scorer_io.load_scalar_scores(p["base_scores_path"])
    judgments = nli_standard = base_standard = None
    if p["judgments_path"]:
        if not (p["nli_standard_path"] and p["base_standard_path"]):
            raise ValueError("--judgments needs --nli-standard and "
                             "--base-standard score files")
        judgments = reporting.load_judgments(p["judgments_path"])
        _, nli_standard = scorer_io.load_scalar_scores(p["nli_standard_path"])
        _, base_standard = scorer_io.load_scalar_scores(p["base_standard_path"])
    weight_grid = _parse_weights(p["weights"]) or list(DEFAULT_WEIGHT_GRID)
    report = reporting.build_sweep_report(
        suite, nli_scores, nli_id, base_scores, base_id, weight_grid,
        judgments=judgments, nli_standard=nli_standard,
        base_standard=base_standard, level=p["level"],
        correlation=p["correlation"])
    reporting.validate_report(report)
    Path(p["report_path"]).write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    text = reporting.render_text(report)
    if p["text_path"]:
        Path(p["text_path"]).write_text(text, encoding="utf-8")
    if p["svg_path"]:
        Path(p["svg_path"]).write_text(reporting.render_svg(report),
                                       encoding="utf-8")
    click.echo(text)


@main.command("report")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--text", "text_path", type=click.Path(), default=None)
@click.option("--svg", "svg_path", type=click.Path(), default=None)
@harness_errors
def report_cmd(in_path, text_path, svg_path):
    """Render an existing report JSON to text and/or SVG."""
    report = json.loads(Path(in_path).read_text(encoding="utf-8"))
    reporting.validate_report(report)
    text = reporting.render_text(report)
    if text_path:
        Path(text_path).write_text(text, encoding="utf-8")
    if svg_path:
        Path(svg_path).write_text(reporting.render_svg(report),
                                  encoding="utf-8")
    click.echo(text)


if __name__ == "__main__":
    main()
