"""End-to-end demo over the CLI: seeds -> suite -> scores -> reports.

Runs entirely on builtin scorers, so it needs no model downloads. Outputs
land in the directory given by --workdir (default: ./demo_run).

Usage: python scripts/demo_pipeline.py --workdir demo_run
"""

import argparse
import subprocess
import sys
from pathlib import Path

from make_demo_seeds import build_seeds
from advmetrics.suite import save_seeds


def run(args):
    print("+", " ".join(str(a) for a in args))
    subprocess.run([sys.executable, "-m", "advmetrics", *map(str, args)],
                   check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="demo_run")
    parser.add_argument("--count", type=int, default=60)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    work = Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    seeds = work / "seeds.jsonl"
    save_seeds(seeds, build_seeds(args.count, args.seed, ref_free=False))

    suite = work / "suite.jsonl"
    run(["generate", "--seeds", seeds, "--out", suite,
         "--phenomena", "negation,number,pronoun,name,svd,jumbling",
         "--seed", args.seed])

    score_files = {}
    for scorer in ("sentbleu", "rougeL", "neg_edit_distance"):
        out = work / f"scores_{scorer}.jsonl"
        run(["score", "--suite", suite, "--out", out, "--scorer", scorer])
        score_files[scorer] = out

    report = work / "report.json"
    run(["evaluate", "--suite", suite,
         "--scores", f"sentbleu={score_files['sentbleu']}",
         "--scores", f"rougeL={score_files['rougeL']}",
         "--scores", f"neg_edit_distance={score_files['neg_edit_distance']}",
         "--report", report,
         "--text", work / "report.txt",
         "--svg", work / "report.svg"])

    run(["combine", "--suite", suite,
         "--nli-scores", score_files["rougeL"],
         "--base-scores", score_files["sentbleu"],
         "--report", work / "sweep.json",
         "--svg", work / "sweep.svg"])

    print(f"\ndemo outputs in {work}/")


if __name__ == "__main__":
    main()
