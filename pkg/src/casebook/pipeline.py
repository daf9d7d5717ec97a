"""Text pipeline: cleaning, tokenization and embedding-based vectorization.

Raw reader text and case text go through the same three steps, so the
representations compared during retrieval are always built identically.
All operations are pure; the embedding table is immutable after load and
safe for concurrent readers.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyAfterCleaning,
    EmptyFile,
    MalformedLine,
    NoCoverage,
)

_URL_RE = re.compile(r"(?:https?://\S+|www\.\S+)", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#(\w)")
# \w keeps accented Spanish letters and digits; underscore counts as punctuation here
_PUNCT_RE = re.compile(r"[^\w\s]|_", re.UNICODE)
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class RawText:
    """A unit of text with an opaque origin id (tweet id or case id)."""

    content: str
    source_id: str = ""


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple[str, ...]
    token_set: frozenset[str]
    token_count: int


@dataclass(frozen=True)
class DocumentVector:
    """Mean-pooled embedding of a token sequence.

    covered_tokens counts tokens that had an embedding; out-of-vocabulary
    tokens are skipped, never zero-substituted.
    """

    values: np.ndarray
    covered_tokens: int
    total_tokens: int


@dataclass(frozen=True)
class PipelineConfig:
    remove_stopwords: bool = False
    stopwords: frozenset[str] = frozenset()

    @classmethod
    def with_stopword_file(cls, path: str | Path) -> "PipelineConfig":
        words = frozenset(
            w.strip().lower()
            for w in Path(path).read_text(encoding="utf-8").splitlines()
            if w.strip()
        )
        return cls(remove_stopwords=True, stopwords=words)

    def cache_key(self) -> str:
        """Stable hash of the config, used to detect stale cached representations."""
        import hashlib

        h = hashlib.sha256()
        h.update(str(self.remove_stopwords).encode())
        for w in sorted(self.stopwords):
            h.update(w.encode("utf-8"))
            h.update(b"\x00")
        return h.hexdigest()


DEFAULT_PIPELINE = PipelineConfig()


def preprocess(raw: RawText, config: PipelineConfig = DEFAULT_PIPELINE) -> RawText:
    """Clean raw text: lowercase, strip URLs/mentions/hashtag marks and punctuation.

    The result is NFC-normalized with collapsed whitespace. Idempotent.
    Raises EmptyAfterCleaning when nothing but noise remained.
    """
    text = unicodedata.normalize("NFC", raw.content)
    text = text.lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(r"\1", text)
    text = _PUNCT_RE.sub(" ", text)
    text = _WS_RE.sub(" ", text).strip()
    if config.remove_stopwords and text:
        kept = [t for t in text.split(" ") if t not in config.stopwords]
        text = " ".join(kept)
    if not text:
        raise EmptyAfterCleaning(f"nothing left after cleaning {raw.source_id!r}")
    return RawText(content=text, source_id=raw.source_id)


def tokenize(clean: RawText) -> TokenizedText:
    """Split cleaned text on whitespace. Expects `preprocess` output."""
    tokens = tuple(clean.content.split())
    return TokenizedText(
        tokens=tokens,
        token_set=frozenset(tokens),
        token_count=len(tokens),
    )


@dataclass(frozen=True)
class EmbeddingTable:
    """token -> dense vector map; all vectors share one dimension."""

    dimension: int
    entries: dict[str, np.ndarray] = field(repr=False)

    @property
    def vocab_size(self) -> int:
        return len(self.entries)

    def get(self, token: str) -> Optional[np.ndarray]:
        return self.entries.get(token)

    def __contains__(self, token: str) -> bool:
        return token in self.entries


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a plain-text embedding file: one `token v1 ... vD` per line.

    Dimension is inferred from the first line. No header, no comments;
    a line starting with '#' is malformed.
    """
    entries: dict[str, np.ndarray] = {}
    dimension = 0
    with open(path, encoding="utf-8") as fh:
        line_no = 0
        for raw_line in fh:
            line_no += 1
            line = raw_line.rstrip("\n")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                raise MalformedLine(line_no, "comment lines are not supported")
            parts = line.split()
            if len(parts) < 2:
                raise MalformedLine(line_no, "expected token followed by vector components")
            token, comps = parts[0], parts[1:]
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError:
                raise MalformedLine(line_no, "non-numeric vector component") from None
            if dimension == 0:
                dimension = len(comps)
            elif len(comps) != dimension:
                raise DimensionMismatch(line_no, dimension, len(comps))
            if token in entries:
                raise MalformedLine(line_no, f"duplicate token {token!r}")
            vec.setflags(write=False)
            entries[token] = vec
    if not entries:
        raise EmptyFile(f"no embedding lines in {path}")
    return EmbeddingTable(dimension=dimension, entries=entries)


def vectorize(text: TokenizedText, table: EmbeddingTable) -> DocumentVector:
    """Arithmetic mean of the embeddings of in-vocabulary tokens.

    Raises NoCoverage when no token is in the table; the caller decides
    whether to fall back to a set-based metric or fail.
    """
    found = [table.entries[t] for t in text.tokens if t in table.entries]
    if not found:
        raise NoCoverage(f"none of {text.token_count} tokens in embedding table")
    values = np.mean(np.stack(found), axis=0)
    values.setflags(write=False)
    return DocumentVector(
        values=values,
        covered_tokens=len(found),
        total_tokens=text.token_count,
    )
