"""Command-line entry point.

Batch mode (the child-process contract: read {in}, write {out}, exit 0):

    nliscorer requests.jsonl responses.jsonl [--config scorer.json]

Line mode for long-running use, and a standalone diagnostic run:

    nliscorer --line [--config scorer.json]
    nliscorer --diagnose [--config scorer.json]
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ModelConfig
from .diagnostic import DiagnosticFailure, run_diagnostic
from .model import CrossEncoderNli, ModelLoadError
from .protocol import ProtocolError
from .serve import serve_batch, serve_lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nliscorer",
        description="Entailment cross-encoder scorer over the request/response "
                    "wire protocol.")
    parser.add_argument("in_path", nargs="?", help="request file")
    parser.add_argument("out_path", nargs="?", help="response file to write")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--line", action="store_true",
                        help="serve the stdin/stdout line protocol")
    parser.add_argument("--diagnose", action="store_true",
                        help="run the 10-pair diagnostic set and exit")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ModelConfig.load(args.config)
        if args.diagnose:
            model = CrossEncoderNli(config)
            result = run_diagnostic(model)
            print(f"diagnostic: {result.correct}/{result.total} correct "
                  f"({'pass' if result.passed else 'FAIL'})")
            for failure in result.failures:
                print(f"  miss: {failure}")
            return 0 if result.passed else 1
        if args.line:
            serve_lines(config)
            return 0
        if not args.in_path or not args.out_path:
            build_parser().error("batch mode needs IN_PATH and OUT_PATH")
        count = serve_batch(config, args.in_path, args.out_path)
        print(f"wrote {count} responses to {args.out_path}", file=sys.stderr)
        return 0
    except (ModelLoadError, DiagnosticFailure, ProtocolError, ValueError,
            OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
