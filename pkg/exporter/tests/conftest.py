"""Fixtures: a small 4-category corpus CSV and a tiny on-disk BERT checkpoint.

No network and no pretrained weights: the BERT fixture builds a random
768-hidden 2-layer model with a handcrafted WordPiece vocabulary, saves it
locally, and the exporter loads it like any checkpoint directory.
"""

import csv

import numpy as np
import pytest

CATEGORY_WORDS = {
    1: ["summit", "border", "treaty", "minister", "embassy", "election", "envoy"],
    2: ["match", "coach", "league", "season", "striker", "stadium", "playoff"],
    3: ["market", "shares", "profit", "merger", "earnings", "investor", "bank"],
    4: ["chip", "software", "internet", "robot", "satellite", "quantum", "server"],
}
SHARED_WORDS = ["the", "new", "report", "week", "plan", "official", "group", "year",
                "today", "major", "deal", "first"]


def write_toy_csv(path, per_category, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    for cat, count in per_category.items():
        pool = CATEGORY_WORDS[cat]
        for _ in range(count):
            length = int(rng.integers(14, 30))
            toks = [
                pool[rng.integers(0, len(pool))]
                if rng.random() < 0.5
                else SHARED_WORDS[rng.integers(0, len(SHARED_WORDS))]
                for _ in range(length)
            ]
            rows.append([cat, " ".join(toks[:4]), " ".join(toks[4:])])
    order = rng.permutation(len(rows))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for i in order:
            writer.writerow(rows[i])
    return path


@pytest.fixture(scope="session")
def toy_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "toy.csv"
    return str(write_toy_csv(path, {1: 40, 2: 40, 3: 40, 4: 40}, seed=3))


@pytest.fixture(scope="session")
def train_indices_file(toy_csv, tmp_path_factory):
    """A sports-free reference split, written the way the harness emits it."""
    from docdrift_export.corpus import load_corpus

    _, labels = load_corpus(toy_csv)
    idx = [i for i, lab in enumerate(labels) if lab != 1][:60]
    path = tmp_path_factory.mktemp("split") / "train.idx"
    path.write_text("".join(f"{i}\n" for i in idx))
    return str(path)


@pytest.fixture(scope="session")
def tiny_bert_dir(tmp_path_factory):
    torch = pytest.importorskip("torch")
    transformers = pytest.importorskip("transformers")

    out = tmp_path_factory.mktemp("bert") / "tiny-bert"
    out.mkdir()
    wordpieces = sorted(
        {w for words in CATEGORY_WORDS.values() for w in words} | set(SHARED_WORDS)
    )
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + wordpieces + [
        "##a", "##e", "##s", "a", "e", "s",
    ]
    (out / "vocab.txt").write_text("\n".join(vocab) + "\n")
    tokenizer = transformers.BertTokenizer(str(out / "vocab.txt"))
    config = transformers.BertConfig(
        vocab_size=len(vocab),
        hidden_size=768,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=512,
    )
    torch.manual_seed(0)
    model = transformers.BertModel(config)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return str(out)
