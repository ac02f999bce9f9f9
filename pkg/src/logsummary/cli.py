"""Command-line entry point: parse, extract, summarize, eval, bench.

Exit codes: 0 success, 2 input error, 3 ranking did not converge,
4 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from pathlib import Path

from .config import PipelineConfig
from .embedding import load_embeddings
from .errors import ConfigError, EmptyInput, EmptyLog, LogSummaryError
from .evaluation import benchmark_throughput, evaluate, read_gold, read_predictions, report_lines
from .extraction import LogIE
from .ranking import rank_triples
from .templates import TemplateStore, load_templates, save_templates, tokenize
from .triples import dump_triples, read_triples

log = logging.getLogger("logsummary")

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_CONFIG = 0, 2, 3, 4
_CHUNK = 4096


def _read_logs(path):
    """Yield (line number, text) for each line, newline stripped."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            yield lineno, line.rstrip("\r\n")


def _write(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    mapping = {"logs": "logs", "templates": "templates", "embeddings": "embeddings",
               "domain_triples": "domain_triples", "gold": "gold", "out": "output",
               "pred": "triples", "merge_threshold": "merge_threshold", "damping": "damping",
               "tolerance": "tolerance", "max_iterations": "max_iterations", "top_k": "k",
               "overlap_threshold": "overlap_threshold", "runs": "runs", "threads": "threads"}
    for arg_name, field_name in mapping.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            setattr(cfg, field_name, value)
    return cfg.validate()


def _run_logs(ie: LogIE, path, threads: int = 1):
    """Process a log file in order; returns (per-log triples, error messages)."""
    results, errors = [], []

    def one(item):
        lineno, text = item
        try:
            return ie.process_log(text, lineno - 1), None
        except EmptyLog:
            return None, f"{path}:{lineno}: empty log line"

    lines = _read_logs(path)
    if threads == 1:
        for item in lines:
            triples, err = one(item)
            results.append(triples) if err is None else errors.append(err)
        return results, errors
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            chunk = list(islice(lines, _CHUNK))
            if not chunk:
                break
            for triples, err in pool.map(one, chunk):
                results.append(triples) if err is None else errors.append(err)
    return results, errors


def _report_errors(errors):
    for msg in errors:
        print(f"error: {msg}", file=sys.stderr)


def cmd_parse(args) -> int:
    cfg = _config(args)
    store = TemplateStore(merge_threshold=cfg.merge_threshold)
    seen, errors = 0, []
    for lineno, text in _read_logs(cfg.logs):
        seen += 1
        try:
            store.learn(tokenize(text))
        except EmptyLog:
            errors.append(f"{cfg.logs}:{lineno}: empty log line")
    if seen == 0:
        raise EmptyInput(f"{cfg.logs}: no logs")
    save_templates(store, args.templates)
    print(f"templates: {len(store)}")
    _report_errors(errors)
    return EXIT_INPUT if errors else EXIT_OK


def cmd_extract(args) -> int:
    cfg = _config(args)
    store = load_templates(cfg.templates, cfg.merge_threshold)
    ie = LogIE(store, threadsafe=cfg.threads > 1)
    results, errors = _run_logs(ie, cfg.logs, cfg.threads)
    _write(cfg.output, "".join(dump_triples(ts) for ts in results))
    s = ie.stats
    print(f"logs: {s.lookups}  cache hits: {s.hits}  misses: {s.misses}  "
          f"hit ratio: {s.hit_ratio:.4f}  templates: {len(store)}")
    _report_errors(errors)
    return EXIT_INPUT if errors else EXIT_OK


def cmd_summarize(args) -> int:
    cfg = _config(args)
    store = load_templates(cfg.templates, cfg.merge_threshold)
    table = load_embeddings(cfg.embeddings)
    ie = LogIE(store)
    results, errors = _run_logs(ie, cfg.logs)
    if errors:
        _report_errors(errors)
        return EXIT_INPUT
    if not results:
        raise EmptyInput(f"{cfg.logs}: no logs")
    triples = [t for ts in results for t in ts]
    if cfg.domain_triples:
        triples += read_triples(cfg.domain_triples)
    summary = rank_triples(triples, table, cfg.rank_config())

    records = summary.to_records()
    if not summary.converged:
        for rec in records:
            rec["converged"] = False
    _write(cfg.output, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records))
    text_out = args.text_out or str(Path(cfg.output).with_suffix(".txt"))
    if Path(text_out) == Path(cfg.output):
        text_out += ".txt"
    _write(text_out, summary.render())
    sys.stdout.write(summary.render())
    if not summary.converged:
        print(f"warning: ranking did not converge in {cfg.max_iterations} iterations",
              file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _config(args)
    report = evaluate(args.metric, read_predictions(args.pred), read_gold(cfg.gold),
                      cfg.overlap_threshold)
    lines = report_lines(report)
    if cfg.output:
        _write(cfg.output, "".join(line + "\n" for line in lines))
    means = "  ".join(f"{k}={v:.4f}" for k, v in report["mean"].items())
    print(f"{args.metric}: groups={len(report['groups'])}  {means}")
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config(args)
    store = load_templates(cfg.templates, cfg.merge_threshold)
    logs = []
    for lineno, text in _read_logs(cfg.logs):
        if text.strip():
            logs.append(text)
    report = benchmark_throughput(logs, cfg.runs, store)
    out = json.dumps(report.to_dict(), indent=2)
    if cfg.output:
        _write(cfg.output, out + "\n")
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--print-config", action="store_true",
                        help="print the effective configuration and exit")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="logsummary", parents=[common],
                                description="Summarize service logs as ranked relational triples.")
    sub = p.add_subparsers(dest="command")

    sp = sub.add_parser("parse", parents=[common], help="learn templates from a log file")
    sp.add_argument("--logs", required=True)
    sp.add_argument("--templates", required=True, help="template file to write")
    sp.add_argument("--merge-threshold", type=float)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("extract", parents=[common], help="extract per-log triples")
    sp.add_argument("--logs", required=True)
    sp.add_argument("--templates", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--merge-threshold", type=float)
    sp.add_argument("--threads", type=int)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("summarize", parents=[common], help="rank triples into a summary")
    sp.add_argument("--logs", required=True)
    sp.add_argument("--templates", required=True)
    sp.add_argument("--embeddings", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--top-k", type=int)
    sp.add_argument("--damping", type=float)
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--max-iterations", type=int)
    sp.add_argument("--domain-triples")
    sp.add_argument("--merge-threshold", type=float)
    sp.add_argument("--text-out", help="plain-text rendering (default: OUT with .txt suffix)")
    sp.set_defaults(func=cmd_summarize)

    sp = sub.add_parser("eval", parents=[common], help="score predictions against gold data")
    sp.add_argument("metric", choices=["rouge", "triples", "ratio"])
    sp.add_argument("--pred", required=True)
    sp.add_argument("--gold", required=True)
    sp.add_argument("--out")
    sp.add_argument("--overlap-threshold", type=float)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("bench", parents=[common], help="cached vs uncached throughput")
    sp.add_argument("--logs", required=True)
    sp.add_argument("--templates", required=True)
    sp.add_argument("--runs", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.print_config:
            print(json.dumps(_config(args).to_dict(), indent=2))
            return EXIT_OK
        if args.command is None:
            parser.print_help()
            return EXIT_INPUT
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LogSummaryError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
