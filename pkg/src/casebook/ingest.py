"""Offline corpus preparation: filter a raw tweet dump into reader texts.

Filters run in a fixed order (missing text, geography, duplicates, length)
because the per-stage rejection counts depend on it. Accepted texts keep
their dump order within each reader, and the stage counts always reconcile
with the input count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyAfterCleaning, EmptyDump
from .pipeline import PipelineConfig, RawText, preprocess

MIN_WORDS_EXCLUSIVE = 20  # texts must have strictly more words than this
HOME_COUNTRY = "ES"

STAGES = ("malformed", "missing_text", "outside_country", "duplicate", "too_short")


@dataclass
class ReaderCorpus:
    """Accepted texts grouped by author, plus per-stage rejection stats."""

    readers: dict[str, list[str]] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def accepted_count(self) -> int:
        return sum(len(texts) for texts in self.readers.values())


def filter_dump(path: str | Path, pipeline: PipelineConfig = PipelineConfig()) -> ReaderCorpus:
    """Build a ReaderCorpus from line-delimited JSON tweet records.

    Malformed lines are counted and skipped, not fatal. Duplicate detection
    compares cleaned text; the first occurrence wins. A record that cleans
    to nothing has zero words and is rejected at the length stage.
    """
    corpus = ReaderCorpus(stats={"input": 0, **{s: 0 for s in STAGES}, "accepted": 0})
    seen_clean: set[str] = set()
    any_line = False
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            any_line = True
            corpus.stats["input"] += 1
            try:
                rec = json.loads(line)
                if not isinstance(rec, dict):
                    raise ValueError("record is not an object")
            except (json.JSONDecodeError, ValueError):
                corpus.stats["malformed"] += 1
                continue

            text = rec.get("text")
            if not text or not str(text).strip():
                corpus.stats["missing_text"] += 1
                continue
            if rec.get("country") != HOME_COUNTRY:
                corpus.stats["outside_country"] += 1
                continue
            try:
                cleaned = preprocess(RawText(content=str(text)), pipeline).content
            except EmptyAfterCleaning:
                corpus.stats["too_short"] += 1
                continue
            if cleaned in seen_clean:
                corpus.stats["duplicate"] += 1
                continue
            seen_clean.add(cleaned)
            if len(cleaned.split()) <= MIN_WORDS_EXCLUSIVE:
                corpus.stats["too_short"] += 1
                continue

            author = str(rec.get("author_id", ""))
            corpus.readers.setdefault(author, []).append(str(text))
            corpus.stats["accepted"] += 1
    if not any_line:
        raise EmptyDump(f"no records in {path}")
    return corpus


def corpus_report(corpus: ReaderCorpus) -> dict:
    """Summary with exact count reconciliation: accepted + rejections == input."""
    rejected = sum(corpus.stats[s] for s in STAGES)
    report = {
        "input_records": corpus.stats["input"],
        "rejections": {s: corpus.stats[s] for s in STAGES},
        "rejected_total": rejected,
        "accepted": corpus.stats["accepted"],
        "reader_count": len(corpus.readers),
    }
    assert report["accepted"] + rejected == report["input_records"]
    return report
