import pytest

from logsummary.embedding import text_words
from logsummary.synthetic import random_embeddings


def write_inputs(directory, logs, dimension=16, seed=0):
    """Write a log file and a matching embedding table; returns their paths."""
    logs_path = directory / "logs.txt"
    logs_path.write_text("\n".join(logs) + "\n", encoding="utf-8")
    vocab = {w for line in logs for w in text_words(line)}
    emb_path = directory / "we.txt"
    emb_path.write_text(random_embeddings(vocab, dimension, seed), encoding="utf-8")
    return logs_path, emb_path


@pytest.fixture
def inputs(tmp_path):
    def make(logs, **kw):
        return write_inputs(tmp_path, logs, **kw)
    return make
