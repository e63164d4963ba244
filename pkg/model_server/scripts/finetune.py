#!/usr/bin/env python3
"""Fine-tune a sequence-pair classifier on a pairs file (offline, not served).

Input pairs come from ``make_pairs.py`` (one ``{"a", "b", "label"}`` object
per line). The resulting checkpoint directory loads straight into the
service configuration. Hyperparameter defaults here are our own; tune per
task and record them with the checkpoint.

Usage:
  python scripts/finetune.py --pairs abstract_pairs.jsonl \
      --base-model <pretrained-name-or-path> --out checkpoints/abstract
"""

import argparse
import json
import random

import torch
from torch.optim import AdamW
from transformers import AutoModelForSequenceClassification, AutoTokenizer


def read_pairs(path):
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                record = json.loads(line)
                yield record["a"], record["b"], int(record["label"])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", required=True)
    parser.add_argument("--base-model", required=True,
                        help="pretrained checkpoint name or local path")
    parser.add_argument("--out", required=True, help="output checkpoint directory")
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--lr", type=float, default=2e-5)
    parser.add_argument("--max-length", type=int, default=256)
    parser.add_argument("--seed", type=int, default=13)
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args()

    random.seed(args.seed)
    torch.manual_seed(args.seed)

    pairs = list(read_pairs(args.pairs))
    if not pairs:
        raise SystemExit("no training pairs found")
    tokenizer = AutoTokenizer.from_pretrained(args.base_model)
    model = AutoModelForSequenceClassification.from_pretrained(
        args.base_model, num_labels=2
    )
    model.to(args.device)
    model.train()
    optimizer = AdamW(model.parameters(), lr=args.lr)

    for epoch in range(args.epochs):
        random.shuffle(pairs)
        total_loss = 0.0
        batches = 0
        for start in range(0, len(pairs), args.batch_size):
            batch = pairs[start : start + args.batch_size]
            encoded = tokenizer(
                [a for a, _, _ in batch],
                [b for _, b, _ in batch],
                truncation="only_second",
                max_length=args.max_length,
                padding=True,
                return_tensors="pt",
            ).to(args.device)
            labels = torch.tensor([y for _, _, y in batch], device=args.device)
            loss = model(**encoded, labels=labels).loss
            loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            total_loss += float(loss)
            batches += 1
        print(f"epoch {epoch + 1}/{args.epochs}: mean loss {total_loss / batches:.4f}")

    model.eval()
    model.save_pretrained(args.out)
    tokenizer.save_pretrained(args.out)
    print(f"checkpoint -> {args.out}")


if __name__ == "__main__":
    main()
