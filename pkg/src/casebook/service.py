"""HTTP facade over the engine and review workflow.

All payloads are JSON; errors use the body shape {code, detail}. Write
endpoints serialize through the store/board writers; reads work on
snapshots. Scores are serialized with 8 decimal places so responses are
stable across platforms.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors
from .config import AppConfig
from .engine import Engine, EngineConfig, Recommendation
from .pipeline import RawText, load_embeddings
from .review import Decision, ReviewBoard, Vote
from .store import CaseStore


class ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str):
        self.status = status
        self.code = code
        self.detail = detail


# every domain error maps to exactly one (status, code); 4xx caller, 5xx store
_ERROR_STATUS = {
    errors.EmptyAfterCleaning: 422,
    errors.EmptyCaseBase: 503,
    errors.UnknownExpert: 401,
    errors.UnknownTicket: 404,
    errors.AlreadyVoted: 409,
    errors.TicketClosed: 409,
    errors.JustificationRequired: 422,
    errors.SchemaError: 422,
    errors.InvalidPersonality: 422,
    errors.DuplicateRecord: 422,
    errors.NotAccepted: 409,
    errors.CorruptStore: 500,
}


def _round_score(value: float) -> float:
    return round(value, 8)


class RecommendRequest(BaseModel):
    text: str


class PickModel(BaseModel):
    book_title: str
    personality: str
    score: float


class RecommendResponse(BaseModel):
    kind: str
    picks: list[PickModel]
    reliability_message: str
    eligible_for_retention: bool
    ticket_id: Optional[str] = None
    metric_used: Optional[str] = None


class VoteRequest(BaseModel):
    expert_token: str
    decision: str
    justification: Optional[str] = None


class ServiceState:
    """Long-lived application components shared by all requests."""

    def __init__(self, config: AppConfig):
        self.config = config
        pipeline = config.pipeline()
        embeddings = (
            load_embeddings(config.embeddings_path)
            if config.embeddings_path is not None
            else None
        )
        self.store = CaseStore(pipeline=pipeline, embeddings=embeddings)
        store_dir = config.store_dir
        if (store_dir / "manifest.json").exists():
            self.store.restore(store_dir)
        self.board = ReviewBoard(
            experts=[e.expert_id for e in config.experts],
            on_accept=self.store.retain,
        )
        self.engine = Engine(
            store=self.store,
            board=self.board,
            config=EngineConfig(
                metric=config.metric,
                threshold=config.threshold,
                top_k=config.top_k,
                fallback_count=config.fallback_count,
            ),
        )
        self._tokens = {e.token: e.expert_id for e in config.experts}

    def expert_for_token(self, token: str) -> str:
        expert_id = self._tokens.get(token)
        if expert_id is None:
            raise ApiError(401, "unknown_expert", "expert token not recognized")
        return expert_id

    def save(self) -> None:
        self.store.persist(self.config.store_dir)


def recommendation_payload(rec: Recommendation, ticket_id: Optional[str],
                           metric_used: Optional[str] = None) -> dict:
    return {
        "kind": rec.kind.value,
        "picks": [
            {
                "book_title": p.book_title,
                "personality": p.personality,
                "score": _round_score(p.score.value),
            }
            for p in rec.picks
        ],
        "reliability_message": rec.reliability_message,
        "eligible_for_retention": rec.eligible_for_retention,
        "ticket_id": ticket_id,
        "metric_used": metric_used,
    }


def create_app(config: AppConfig, state: Optional[ServiceState] = None) -> FastAPI:
    app = FastAPI(title="casebook", version="0.1.0")
    app.state.service = state if state is not None else ServiceState(config)

    def svc() -> ServiceState:
        return app.state.service

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "detail": exc.detail}
        )

    @app.exception_handler(errors.CasebookError)
    async def domain_error_handler(request: Request, exc: errors.CasebookError):
        status = _ERROR_STATUS.get(type(exc), 500)
        return JSONResponse(
            status_code=status, content={"code": exc.code, "detail": str(exc)}
        )

    @app.post("/recommend", response_model=RecommendResponse)
    def recommend(body: RecommendRequest):
        if not body.text or not body.text.strip():
            raise ApiError(400, "empty_text", "request body field 'text' is empty")
        rec, ticket = svc().engine.solve(RawText(content=body.text))
        return recommendation_payload(
            rec, ticket.ticket_id if ticket else None, svc().engine.config.metric.value
        )

    @app.get("/reviews/pending")
    def reviews_pending(expert_token: Optional[str] = None):
        for_expert = svc().expert_for_token(expert_token) if expert_token else None
        queue = svc().board.pending_queue(for_expert=for_expert)
        return [
            {
                "ticket_id": t["ticket_id"],
                "candidate": {
                    "text": t["candidate"].text,
                    "book_title": t["candidate"].book_title,
                    "personality": t["candidate"].personality,
                    "score": _round_score(t["candidate"].score),
                },
                "opened_at": t["opened_at"].isoformat(),
                "vote_count": t["vote_count"],
                "already_voted": t["already_voted"],
            }
            for t in queue
        ]

    @app.post("/reviews/{ticket_id}/vote")
    def cast_vote(ticket_id: str, body: VoteRequest):
        expert_id = svc().expert_for_token(body.expert_token)
        try:
            decision = Decision(body.decision.lower())
        except ValueError:
            raise ApiError(400, "bad_decision", "decision must be 'approve' or 'reject'")
        ticket = svc().board.cast_vote(
            ticket_id,
            Vote(expert_id=expert_id, decision=decision, justification=body.justification),
        )
        return {
            "ticket_id": ticket.ticket_id,
            "state": ticket.state.value,
            "vote_count": len(ticket.votes),
            "justification": ticket.justification,
            "retained_case_id": ticket.retained_case_id,
        }

    @app.get("/cases")
    def list_cases(limit: str = "50", offset: str = "0"):
        try:
            limit_n, offset_n = int(limit), int(offset)
        except ValueError:
            raise ApiError(400, "bad_pagination", "limit and offset must be integers")
        if limit_n < 1 or offset_n < 0:
            raise ApiError(400, "bad_pagination", "limit must be >= 1, offset >= 0")
        view = svc().store.snapshot()
        page = view.cases[offset_n : offset_n + limit_n]
        return {
            "total": len(view),
            "store_version": view.version,
            "limit": limit_n,
            "offset": offset_n,
            "cases": [
                {
                    "case_id": c.case_id,
                    "text": c.text,
                    "book_title": c.book_title,
                    "personality": c.personality.code,
                    "origin": c.origin,
                    "created_at": c.created_at.isoformat(),
                    "ticket_id": c.ticket_id,
                }
                for c in page
            ],
        }

    @app.post("/cases/import")
    def import_cases(records: list[dict]):
        count = svc().store.import_records(records)
        return {"imported": count, "case_count": len(svc().store.snapshot())}

    @app.get("/health")
    def health():
        view = svc().store.snapshot()
        return {"status": "ok", "store_version": view.version, "case_count": len(view)}

    return app
