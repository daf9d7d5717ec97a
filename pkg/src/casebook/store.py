"""Case memory: the persistent, append-only collection of solved cases.

Seed cases come from the character-personality dataset; retained cases are
admitted through the expert review loop. Each case caches its tokenized
and (when embeddings are configured) vectorized form so retrieval never
re-runs the pipeline. Many readers, one serialized writer; readers work
on immutable snapshots.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import (
    CorruptStore,
    DuplicateRecord,
    InvalidPersonality,
    NoCoverage,
    NotAccepted,
    SchemaError,
)
from .pipeline import (
    DocumentVector,
    EmbeddingTable,
    PipelineConfig,
    RawText,
    TokenizedText,
    preprocess,
    tokenize,
    vectorize,
)
from .review import ReviewTicket, TicketState

MBTI_CODES = frozenset(
    a + b + c + d for a in "IE" for b in "NS" for c in "TF" for d in "JP"
)


@dataclass(frozen=True)
class PersonalityLabel:
    """One of the 16 Myers-Briggs four-letter codes."""

    code: str

    def __post_init__(self):
        if self.code not in MBTI_CODES:
            raise ValueError(f"not a Myers-Briggs code: {self.code!r}")

    @classmethod
    def parse(cls, value: str) -> "PersonalityLabel":
        return cls(code=value.strip().upper())


@dataclass(frozen=True)
class Case:
    case_id: str
    text: str
    book_title: str
    personality: PersonalityLabel
    origin: str  # "seed" | "retained"
    created_at: datetime
    tokenized: TokenizedText
    vector: Optional[DocumentVector] = None
    ticket_id: Optional[str] = None  # set for retained cases


@dataclass(frozen=True)
class StoreView:
    """Point-in-time snapshot; never observes a half-applied mutation."""

    cases: tuple[Case, ...]
    version: int

    def __len__(self) -> int:
        return len(self.cases)


class CaseStore:
    """Append-only case collection with a monotonically increasing version."""

    def __init__(
        self,
        pipeline: PipelineConfig = PipelineConfig(),
        embeddings: Optional[EmbeddingTable] = None,
    ):
        self.pipeline = pipeline
        self.embeddings = embeddings
        self._cases: list[Case] = []
        self._dup_keys: set[tuple[str, str]] = set()
        self._version = 0
        self._next_id = 1
        self._lock = threading.RLock()

    # --- internals ---

    def _dup_key(self, text: str, book_title: str) -> tuple[str, str]:
        cleaned = preprocess(RawText(content=text), self.pipeline).content
        return (cleaned, book_title)

    def _build_case(
        self,
        text: str,
        book_title: str,
        personality: PersonalityLabel,
        origin: str,
        ticket_id: Optional[str] = None,
    ) -> Case:
        tokenized = tokenize(preprocess(RawText(content=text), self.pipeline))
        vector = None
        if self.embeddings is not None:
            try:
                vector = vectorize(tokenized, self.embeddings)
            except NoCoverage:
                vector = None
        case_id = f"case-{self._next_id:06d}"
        self._next_id += 1
        return Case(
            case_id=case_id,
            text=text,
            book_title=book_title,
            personality=personality,
            origin=origin,
            created_at=datetime.now(timezone.utc),
            tokenized=tokenized,
            vector=vector,
            ticket_id=ticket_id,
        )

    # --- operations ---

    def import_seed(self, path: str | Path) -> int:
        """Load a JSON array of {text, book_title, personality} seed records.

        All-or-nothing: any schema error aborts the import untouched.
        Bumps the version once.
        """
        records = json.loads(Path(path).read_text(encoding="utf-8"))
        return self.import_records(records)

    def import_records(self, records: object) -> int:
        """Validate and append seed records given as parsed JSON."""
        if not isinstance(records, list):
            raise SchemaError(0, "top-level JSON array")
        with self._lock:
            # validate everything before touching state: import is all-or-nothing
            validated: list[tuple[str, str, PersonalityLabel]] = []
            staged_keys: set[tuple[str, str]] = set()
            for i, rec in enumerate(records):
                for key in ("text", "book_title", "personality"):
                    if not isinstance(rec, dict) or key not in rec:
                        raise SchemaError(i, key)
                try:
                    personality = PersonalityLabel.parse(rec["personality"])
                except ValueError:
                    raise InvalidPersonality(i, rec["personality"]) from None
                if not rec["text"] or not rec["book_title"]:
                    raise SchemaError(i, "text" if not rec["text"] else "book_title")
                key = self._dup_key(rec["text"], rec["book_title"])
                if key in self._dup_keys or key in staged_keys:
                    raise DuplicateRecord(f"record {i}: duplicate (text, book_title)")
                staged_keys.add(key)
                validated.append((rec["text"], rec["book_title"], personality))
            if validated:
                for text, book_title, personality in validated:
                    self._cases.append(self._build_case(text, book_title, personality, "seed"))
                self._dup_keys |= staged_keys
                self._version += 1
            return len(validated)

    def retain(self, ticket: ReviewTicket) -> Case:
        """Append the accepted ticket's candidate as a retained case.

        A ticket is consumed by retention; retaining it twice raises.
        """
        with self._lock:
            if ticket.state is not TicketState.ACCEPTED or ticket.retained_case_id:
                raise NotAccepted(ticket.ticket_id)
            cand = ticket.candidate
            key = self._dup_key(cand.text, cand.book_title)
            if key in self._dup_keys:
                raise DuplicateRecord(f"ticket {ticket.ticket_id}: duplicate candidate")
            case = self._build_case(
                cand.text,
                cand.book_title,
                PersonalityLabel.parse(cand.personality),
                "retained",
                ticket_id=ticket.ticket_id,
            )
            self._cases.append(case)
            self._dup_keys.add(key)
            self._version += 1
            ticket.retained_case_id = case.case_id
            return case

    def snapshot(self) -> StoreView:
        with self._lock:
            return StoreView(cases=tuple(self._cases), version=self._version)

    # --- persistence: cases.jsonl + manifest.json ---

    def persist(self, directory: str | Path) -> None:
        """Write the store to `cases.jsonl` plus a checksummed `manifest.json`."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with self._lock:
            lines = [json.dumps(self._case_to_record(c), ensure_ascii=False, sort_keys=True)
                     for c in self._cases]
            payload = "".join(line + "\n" for line in lines)
            (directory / "cases.jsonl").write_text(payload, encoding="utf-8")
            manifest = {
                "version": self._version,
                "pipeline_hash": self.pipeline.cache_key(),
                "checksum": hashlib.sha256(payload.encode("utf-8")).hexdigest(),
                "case_count": len(self._cases),
            }
            (directory / "manifest.json").write_text(
                json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
            )

    def restore(self, directory: str | Path) -> None:
        """Replace in-memory state with a persisted store, verifying the checksum."""
        directory = Path(directory)
        cases_path = directory / "cases.jsonl"
        manifest_path = directory / "manifest.json"
        if not cases_path.exists() or not manifest_path.exists():
            raise CorruptStore(f"missing store files in {directory}")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptStore(f"unreadable manifest: {exc}") from None
        payload = cases_path.read_text(encoding="utf-8")
        checksum = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        if checksum != manifest.get("checksum"):
            raise CorruptStore("cases.jsonl checksum mismatch")
        if manifest.get("pipeline_hash") != self.pipeline.cache_key():
            raise CorruptStore("pipeline config changed since persist; re-import required")
        cases: list[Case] = []
        dup_keys: set[tuple[str, str]] = set()
        for line_no, line in enumerate(payload.splitlines(), start=1):
            try:
                rec = json.loads(line)
                case = self._case_from_record(rec)
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise CorruptStore(f"cases.jsonl line {line_no}: {exc}") from None
            cases.append(case)
            dup_keys.add(self._dup_key(case.text, case.book_title))
        with self._lock:
            self._cases = cases
            self._dup_keys = dup_keys
            self._version = int(manifest["version"])
            self._next_id = len(cases) + 1

    def _case_to_record(self, case: Case) -> dict:
        return {
            "case_id": case.case_id,
            "text": case.text,
            "book_title": case.book_title,
            "personality": case.personality.code,
            "origin": case.origin,
            "created_at": case.created_at.isoformat(),
            "ticket_id": case.ticket_id,
            "vector": None if case.vector is None else {
                "values": [float(v) for v in case.vector.values],
                "covered_tokens": case.vector.covered_tokens,
                "total_tokens": case.vector.total_tokens,
            },
        }

    def _case_from_record(self, rec: dict) -> Case:
        tokenized = tokenize(preprocess(RawText(content=rec["text"]), self.pipeline))
        vector = None
        if rec.get("vector") is not None:
            values = np.array(rec["vector"]["values"], dtype=np.float64)
            values.setflags(write=False)
            vector = DocumentVector(
                values=values,
                covered_tokens=rec["vector"]["covered_tokens"],
                total_tokens=rec["vector"]["total_tokens"],
            )
        return Case(
            case_id=rec["case_id"],
            text=rec["text"],
            book_title=rec["book_title"],
            personality=PersonalityLabel.parse(rec["personality"]),
            origin=rec["origin"],
            created_at=datetime.fromisoformat(rec["created_at"]),
            tokenized=tokenized,
            vector=vector,
            ticket_id=rec.get("ticket_id"),
        )
