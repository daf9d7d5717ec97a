"""Recommendation engine: retrieve similar cases, gate on the reliability
threshold, and open review tickets for retention candidates.

A query above the 0.50 threshold yields a single high-confidence pick and
becomes eligible for expert review; otherwise the two best-scoring books
are offered as a low-confidence fallback. Each solve() call works on an
immutable store snapshot, so concurrent queries and retentions never
interfere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .errors import EmptyCaseBase, EmptySet, NoCoverage, ZeroNorm, ZeroVector
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
from .review import Candidate, ReviewBoard, ReviewTicket
from .similarity import (
    Metric,
    SimilarityScore,
    cosine,
    jaccard,
    soft_cosine_texts,
)
from .store import Case, CaseStore, StoreView

HIGH_CONFIDENCE_MESSAGE = "Reliability of the recommendation: +50%"
LOW_CONFIDENCE_MESSAGE = "Recommendation reliability: -50%"


@dataclass(frozen=True)
class EngineConfig:
    metric: Metric = Metric.JACCARD
    threshold: float = 0.50
    top_k: int = 5
    fallback_count: int = 2

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie strictly between 0 and 1")
        if self.top_k < 1:
            raise ValueError("top_k must be positive")
        if not 1 <= self.fallback_count <= self.top_k:
            raise ValueError("fallback_count must be in [1, top_k]")


@dataclass(frozen=True)
class QueryText:
    raw: RawText
    tokenized: TokenizedText
    vector: Optional[DocumentVector] = None


@dataclass(frozen=True)
class RankedCase:
    case_id: str
    book_title: str
    personality: str
    score: SimilarityScore


@dataclass(frozen=True)
class RetrievalResult:
    ranked: tuple[RankedCase, ...]
    query: QueryText
    metric_used: Metric
    fell_back_to_jaccard: bool = False


class RecommendationKind(str, enum.Enum):
    HIGH_CONFIDENCE = "high_confidence"
    LOW_CONFIDENCE = "low_confidence"


@dataclass(frozen=True)
class Recommendation:
    kind: RecommendationKind
    picks: tuple[RankedCase, ...]
    reliability_message: str
    eligible_for_retention: bool


def score_case(query: QueryText, case: Case, metric: Metric,
               embeddings: Optional[EmbeddingTable]) -> float:
    """Similarity of one query/case pair under the given metric.

    Under vector metrics a case without embedding coverage scores 0
    rather than erroring, so a single sparse case cannot fail retrieval.
    """
    if metric is Metric.JACCARD:
        try:
            return jaccard(query.tokenized, case.tokenized).value
        except EmptySet:
            return 0.0
    if metric is Metric.COSINE:
        if query.vector is None or case.vector is None:
            return 0.0
        try:
            return cosine(query.vector, case.vector).value
        except ZeroVector:
            return 0.0
    # soft cosine builds a per-pair feature matrix; fine at case-base scale
    assert embeddings is not None
    try:
        return soft_cosine_texts(query.tokenized, case.tokenized, embeddings).value
    except ZeroNorm:
        return 0.0


def retrieve(query: QueryText, view: StoreView, config: EngineConfig,
             embeddings: Optional[EmbeddingTable] = None) -> RetrievalResult:
    """Score every case, rank descending, tie-break on ascending case id.

    If the configured metric needs vectors but the query has no embedding
    coverage, the engine falls back to Jaccard and flags it in the result.
    """
    if len(view) == 0:
        raise EmptyCaseBase("case base is empty; import seed cases first")
    metric = config.metric
    fell_back = False
    if metric.needs_embeddings and query.vector is None:
        metric = Metric.JACCARD
        fell_back = True

    scored = [
        (score_case(query, case, metric, embeddings), case)
        for case in view.cases
    ]
    scored.sort(key=lambda sc: (-sc[0], sc[1].case_id))
    ranked = tuple(
        RankedCase(
            case_id=case.case_id,
            book_title=case.book_title,
            personality=case.personality.code,
            score=SimilarityScore(value=value, metric=metric),
        )
        for value, case in scored[: config.top_k]
    )
    return RetrievalResult(
        ranked=ranked, query=query, metric_used=metric, fell_back_to_jaccard=fell_back
    )


def reuse(result: RetrievalResult, config: EngineConfig) -> Recommendation:
    """Threshold gate: strictly above threshold keeps the single best case;
    otherwise the top fallback picks are offered, descending."""
    if not result.ranked:
        raise EmptyCaseBase("retrieval returned no ranked cases")
    best = result.ranked[0]
    if best.score.value > config.threshold:
        return Recommendation(
            kind=RecommendationKind.HIGH_CONFIDENCE,
            picks=(best,),
            reliability_message=HIGH_CONFIDENCE_MESSAGE,
            eligible_for_retention=True,
        )
    return Recommendation(
        kind=RecommendationKind.LOW_CONFIDENCE,
        picks=result.ranked[: config.fallback_count],
        reliability_message=LOW_CONFIDENCE_MESSAGE,
        eligible_for_retention=False,
    )


class Engine:
    """Wires pipeline, store, similarity and review into the full cycle."""

    def __init__(
        self,
        store: CaseStore,
        board: ReviewBoard,
        config: EngineConfig = EngineConfig(),
        pipeline: Optional[PipelineConfig] = None,
    ):
        self.store = store
        self.board = board
        self.config = config
        self.pipeline = pipeline if pipeline is not None else store.pipeline

    def prepare_query(self, raw: RawText) -> QueryText:
        tokenized = tokenize(preprocess(raw, self.pipeline))
        vector = None
        if self.store.embeddings is not None:
            try:
                vector = vectorize(tokenized, self.store.embeddings)
            except NoCoverage:
                vector = None
        return QueryText(raw=raw, tokenized=tokenized, vector=vector)

    def solve(self, raw: RawText) -> tuple[Recommendation, Optional[ReviewTicket]]:
        """Run the full query path; opens a pending review ticket (never
        retains directly) when the recommendation clears the threshold."""
        query = self.prepare_query(raw)
        view = self.store.snapshot()
        result = retrieve(query, view, self.config, self.store.embeddings)
        recommendation = reuse(result, self.config)
        ticket = None
        if recommendation.eligible_for_retention:
            best = recommendation.picks[0]
            ticket = self.board.open_ticket(
                Candidate(
                    text=raw.content,
                    book_title=best.book_title,
                    personality=best.personality,
                    score=best.score.value,
                )
            )
        return recommendation, ticket
