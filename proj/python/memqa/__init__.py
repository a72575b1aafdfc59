"""Python bindings for the memqa memory question answering engine."""

import json
import os

from ._core import (
    MemqaError,
    a_key,
    bm25_scores,
    embed_text,
    fuse,
    ndcg_at_k,
    parse_instant,
    prompt_ids,
    published_weights,
    recall_at_k,
    recency_score,
    render_prompt,
    train_weights,
    write_synthetic_suite,
)
from . import _core

__all__ = [
    "Engine",
    "MemqaError",
    "a_key",
    "bm25_scores",
    "embed_text",
    "fuse",
    "ndcg_at_k",
    "parse_instant",
    "parse_temporal",
    "prompt_ids",
    "published_weights",
    "recall_at_k",
    "recency_score",
    "render_prompt",
    "train_weights",
    "write_synthetic_suite",
]


def parse_temporal(question, asked_at, tz_offset_minutes=0):
    return json.loads(_core.parse_temporal(question, asked_at, tz_offset_minutes))


class Engine:
    """Thin wrapper returning (status, dict) pairs like the HTTP API."""

    def __init__(self, config=None, base_dir=""):
        self._engine = _core._Engine(json.dumps(config or {}), os.fspath(base_dir))

    def record(self, entry, augment=False):
        body = dict(entry)
        body["augment"] = augment
        status, text = self._engine.record(json.dumps(body))
        return status, json.loads(text)

    def query(self, question, asked_at, tz_offset_minutes=0, mode="retrieve", k=None):
        body = {"question": question, "asked_at": asked_at,
                "tz_offset_minutes": tz_offset_minutes, "mode": mode}
        if k is not None:
            body["k"] = k
        status, text = self._engine.query(json.dumps(body))
        return status, json.loads(text)

    def ingest(self, path):
        return self._engine.ingest(os.fspath(path))

    def augment_pending(self):
        return self._engine.augment_pending()

    def evaluate(self, bench_path, generate=False):
        return json.loads(self._engine.evaluate(os.fspath(bench_path), generate))

    def __len__(self):
        return len(self._engine)
