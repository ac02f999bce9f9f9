"""Cached vs uncached extraction throughput on a synthetic corpus."""

import argparse
import json

from logsummary.evaluation import benchmark_throughput
from logsummary.synthetic import synthetic_corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--logs", type=int, default=10_000)
    p.add_argument("--templates", type=int, default=20)
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()

    report = benchmark_throughput(synthetic_corpus(args.logs, args.templates, args.seed), args.runs)
    print(json.dumps(report.to_dict(), indent=2))


if __name__ == "__main__":
    main()
