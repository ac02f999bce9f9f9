"""Write a seeded synthetic log file and a matching word2vec-format embedding table."""

import argparse
from pathlib import Path

from logsummary.embedding import text_words
from logsummary.synthetic import GENERATORS, random_embeddings, synthetic_corpus


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="data")
    p.add_argument("--logs", type=int, default=10_000)
    p.add_argument("--templates", type=int, default=20, choices=range(1, len(GENERATORS) + 1),
                   metavar=f"1..{len(GENERATORS)}")
    p.add_argument("--dimension", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    logs = synthetic_corpus(args.logs, args.templates, seed=args.seed)
    (out / "logs.txt").write_text("\n".join(logs) + "\n", encoding="utf-8")
    vocab = {w for line in logs for w in text_words(line)}
    (out / "embeddings.txt").write_text(random_embeddings(vocab, args.dimension, args.seed),
                                        encoding="utf-8")
    print(f"wrote {len(logs)} logs and {len(vocab)} word vectors to {out}/")


if __name__ == "__main__":
    main()
