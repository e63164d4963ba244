"""Fixtures: tiny randomly initialized checkpoints, one per task tag."""

import pytest
import torch
from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

from model_server import ModelRegistry
from model_server.config import TASK_TAGS

VOCAB = (
    ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    + list("abcdefghijklmnopqrstuvwxyz0123456789")
    + ["claim", "title", "evidence", "sentence", "alpha", "beta", "gamma",
       "delta", "study", "review", "report", "marker", "outcome", "risk",
       "improves", "reduces", "supports", "refutes", "##s", "##ing"]
)


def build_tiny_checkpoint(directory, seed: int) -> str:
    """A minimal two-label BERT pair classifier saved to ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    vocab_file = directory / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB))
    tokenizer = BertTokenizer(str(vocab_file), do_lower_case=True)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=64,
        num_labels=2,
    )
    torch.manual_seed(seed)
    model = BertForSequenceClassification(config)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return str(directory)


@pytest.fixture(scope="session")
def checkpoints(tmp_path_factory):
    root = tmp_path_factory.mktemp("checkpoints")
    return {
        tag: build_tiny_checkpoint(root / tag, seed=i)
        for i, tag in enumerate(TASK_TAGS)
    }


@pytest.fixture(scope="session")
def registry(checkpoints):
    registry = ModelRegistry(device="cpu", precision="float64", max_length=64)
    for tag, path in checkpoints.items():
        registry.load_checkpoint(tag, path)
    return registry
