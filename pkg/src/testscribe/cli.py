"""Command-line surface: analyze, eval, and stats subcommands.

Exit codes: 0 success, 2 input error, 3 partial (some operations errored but
the report was still written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .backend import handshake
from .errors import TestscribeError
from .gui_intent import load_gallery
from .metrics import MetricReport, evaluate_corpus
from .pipeline import PipelineConfig, load_bundle, render_report, run_pipeline
from .script_model import (comment_code_ratio, find_scripts, parse_script,
                           script_stats)

METRIC_COLUMNS = ["bleu1", "bleu2", "bleu3", "bleu4", "cider", "meteor",
                  "rouge_l"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="testscribe",
        description="Infer natural-language intents for GUI test scripts")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="run the intent pipeline over one script")
    analyze.add_argument("--script", required=True, help="test script file")
    analyze.add_argument("--bundle", required=True,
                         help="trace bundle directory (manifest.json inside)")
    analyze.add_argument("--source", default=None,
                         help="app source tree for response-method search")
    analyze.add_argument("--gallery", default=None,
                         help="caption gallery directory (captions.tsv inside)")
    analyze.add_argument("--backend", default=None,
                         help="external model command speaking the backend "
                              "protocol")
    analyze.add_argument("--format", choices=["json", "md"], default="json")
    analyze.add_argument("--dump-paths", action="store_true",
                         help="write extracted AST paths next to the report "
                              "(<output>.paths)")
    analyze.add_argument("-o", "--output", default=None,
                         help="report file (stdout when omitted)")

    ev = sub.add_parser("eval", help="score candidate intents against "
                                     "references")
    ev.add_argument("--candidates", required=True,
                    help="one candidate sentence per line")
    ev.add_argument("--references", required=True,
                    help="same line count; multiple references separated "
                         "by ' ||| '")
    ev.add_argument("--metrics", default=None,
                    help="comma-separated subset of: "
                         + ",".join(METRIC_COLUMNS))
    ev.add_argument("-o", "--output", default=None,
                    help="machine-readable JSON report file")

    st = sub.add_parser("stats", help="corpus statistics over a script tree")
    st.add_argument("--tests", required=True, help="directory to scan")
    st.add_argument("--glob", default="*Test*.java",
                    help="script file name pattern (default: %(default)s)")
    st.add_argument("-o", "--output", default=None,
                    help="JSON output file (stdout when omitted)")
    return parser


def _cmd_analyze(args) -> int:
    script_path = Path(args.script)
    try:
        script = parse_script(script_path.read_text(encoding="utf-8"),
                              args.script)
        bundle = load_bundle(args.bundle)
        gallery = load_gallery(args.gallery) if args.gallery else None
        backend = handshake(args.backend) if args.backend else None
    except (TestscribeError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        config = PipelineConfig(gallery=gallery, backend=backend)
        report = run_pipeline(script, bundle, args.source, config)
    except TestscribeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    finally:
        if backend is not None:
            backend.close()

    rendered = render_report(report, args.format)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    if args.dump_paths:
        dump_file = Path(args.output + ".paths") if args.output \
            else Path("paths.txt")
        with dump_file.open("w", encoding="utf-8") as fh:
            for res in report.per_op:
                if not res.paths:
                    continue
                method = res.evidence.get("response_method", {})
                fh.write(f"# op {res.op.index} "
                         f"{method.get('method_name', '')}\n")
                for p in res.paths:
                    fh.write(p.render() + "\n")
    return 3 if report.has_errors else 0


def _percentages(report: MetricReport) -> dict[str, float]:
    return {k: v * 100.0 for k, v in report.as_dict().items()}


def _cmd_eval(args) -> int:
    try:
        cand_lines = Path(args.candidates).read_text(
            encoding="utf-8").splitlines()
        ref_lines = Path(args.references).read_text(
            encoding="utf-8").splitlines()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if len(cand_lines) != len(ref_lines):
        print(f"error: candidate/reference line counts differ "
              f"({len(cand_lines)} vs {len(ref_lines)})", file=sys.stderr)
        return 2
    pairs = [(c, [r.strip() for r in refs.split(" ||| ")])
             for c, refs in zip(cand_lines, ref_lines)]
    if not pairs:
        print("error: empty corpus", file=sys.stderr)
        return 2
    try:
        report = evaluate_corpus(pairs)
    except (TestscribeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    selected = METRIC_COLUMNS
    if args.metrics:
        selected = [m.strip() for m in args.metrics.split(",") if m.strip()]
        unknown = [m for m in selected if m not in METRIC_COLUMNS]
        if unknown:
            print(f"error: unknown metrics {unknown}", file=sys.stderr)
            return 2

    scores = report.as_dict()
    header = "  ".join(f"{m:>8}" for m in selected)
    values = "  ".join(f"{scores[m] * 100:8.4f}" for m in selected)
    print(f"{'metric':>8}: {header}")
    print(f"{'% score':>8}: {values}")

    if args.output:
        payload = {
            "items": len(pairs),
            "scores": {m: scores[m] for m in selected},
            "percent": {m: scores[m] * 100.0 for m in selected},
            "per_item": [
                {"bleu1": s.bleu[0], "bleu2": s.bleu[1], "bleu3": s.bleu[2],
                 "bleu4": s.bleu[3], "cider": s.cider, "meteor": s.meteor,
                 "rouge_l": s.rouge_l}
                for s in report.per_item],
        }
        Path(args.output).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return 0


def _cmd_stats(args) -> int:
    root = Path(args.tests)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return 2
    scripts = find_scripts(root, args.glob)
    per_script = []
    sequences = []
    for path in scripts:
        rel = path.relative_to(root).as_posix()
        try:
            text = path.read_text(encoding="utf-8")
            seq = parse_script(text, rel)
        except (TestscribeError, OSError) as e:
            per_script.append({"path": rel, "error": str(e)})
            continue
        ratio = comment_code_ratio(text)
        sequences.append(seq)
        per_script.append({
            "path": rel,
            "operations": len(seq),
            "comment_lines": ratio.comment_lines,
            "code_lines": ratio.code_lines,
            "comment_ratio": round(ratio.ratio, 6)
            if ratio.ratio != float("inf") else None,
            "comment_class": ratio.comment_class.value,
        })
    payload: dict = {"scripts": len(sequences), "per_script": per_script}
    if sequences:
        stats = script_stats(sequences)
        payload["mean_ops"] = round(stats.mean_ops, 6)
        payload["stddev_ops"] = round(stats.stddev_ops, 6)
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return _cmd_analyze(args)
    if args.command == "eval":
        return _cmd_eval(args)
    return _cmd_stats(args)


if __name__ == "__main__":
    sys.exit(main())
