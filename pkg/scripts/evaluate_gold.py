"""Summarize every group of a gold file, write predictions, and score them.

Gold file: one JSON object per line with ``group_id``, ``logs`` (list of raw
lines), ``gold_triples`` (list of ``[arg1, relation, arg2]``) and an optional
reference ``summary``.  Without ``--embeddings`` every word gets its hashed
fallback vector.
"""

import argparse
from pathlib import Path

from logsummary.embedding import EmbeddingTable, load_embeddings
from logsummary.evaluation import evaluate, predict_groups, read_gold, report_lines, write_predictions
from logsummary.ranking import RankConfig


def main():
    p = argparse.ArgumentParser(description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--gold", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--out-dir", default="eval_out")
    p.add_argument("--top-k", type=int, default=5)
    args = p.parse_args()

    gold = read_gold(args.gold)
    table = load_embeddings(args.embeddings) if args.embeddings else EmbeddingTable(32, {})
    preds = predict_groups(gold, table, RankConfig(k=args.top_k))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_predictions(preds, out / "predictions.jsonl")
    for metric in ("triples", "rouge", "ratio"):
        report = evaluate(metric, preds, gold)
        (out / f"{metric}.jsonl").write_text("\n".join(report_lines(report)) + "\n",
                                             encoding="utf-8")
        means = "  ".join(f"{k}={v:.4f}" for k, v in report["mean"].items())
        print(f"{metric}: groups={len(gold)}  {means}")


if __name__ == "__main__":
    main()
