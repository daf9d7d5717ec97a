"""Expert review workflow for retention candidates.

A fixed panel of three experts votes on each pending ticket. Resolution
depends only on the multiset of decisions, never on arrival order:
three approvals accept the case, two approvals reject it with the
dissenter's mandatory justification, one or zero approvals reject it
outright.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Optional

from .errors import (
    AlreadyVoted,
    JustificationRequired,
    TicketClosed,
    UnknownExpert,
    UnknownTicket,
)

PANEL_SIZE = 3


class Decision(str, enum.Enum):
    APPROVE = "approve"
    REJECT = "reject"


class TicketState(str, enum.Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED_SINGLE_APPROVAL = "rejected_single_approval"
    REJECTED_WITH_JUSTIFICATION = "rejected_with_justification"


@dataclass(frozen=True)
class Candidate:
    """What would be stored if the ticket is accepted."""

    text: str
    book_title: str
    personality: str
    score: float = 0.0


@dataclass(frozen=True)
class Vote:
    expert_id: str
    decision: Decision
    justification: Optional[str] = None
    cast_at: Optional[datetime] = None


@dataclass
class ReviewTicket:
    ticket_id: str
    candidate: Candidate
    votes: dict[str, Vote] = field(default_factory=dict)
    state: TicketState = TicketState.PENDING
    justification: Optional[str] = None
    opened_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    closed_at: Optional[datetime] = None
    retained_case_id: Optional[str] = None

    def approvals(self) -> int:
        return sum(1 for v in self.votes.values() if v.decision is Decision.APPROVE)


def resolve_state(decisions: list[Decision]) -> TicketState:
    """Final state for a complete multiset of three decisions."""
    assert len(decisions) == PANEL_SIZE
    approvals = sum(1 for d in decisions if d is Decision.APPROVE)
    if approvals == 3:
        return TicketState.ACCEPTED
    if approvals == 2:
        return TicketState.REJECTED_WITH_JUSTIFICATION
    return TicketState.REJECTED_SINGLE_APPROVAL


class ReviewBoard:
    """Serializes votes per ticket and keeps an append-only audit log.

    `on_accept` is invoked (inside the writer lock) when a ticket resolves
    to ACCEPTED; the case memory hooks its retain operation there.
    """

    def __init__(
        self,
        experts: list[str],
        on_accept: Optional[Callable[[ReviewTicket], object]] = None,
    ):
        if len(experts) != PANEL_SIZE or len(set(experts)) != PANEL_SIZE:
            raise ValueError(f"expert panel must contain exactly {PANEL_SIZE} distinct ids")
        self.experts = tuple(experts)
        self.on_accept = on_accept
        self._tickets: dict[str, ReviewTicket] = {}
        self._audit: dict[str, list[Vote]] = {}
        self._counter = itertools.count(1)
        self._lock = threading.RLock()

    def open_ticket(self, candidate: Candidate) -> ReviewTicket:
        with self._lock:
            ticket_id = f"ticket-{next(self._counter):06d}"
            ticket = ReviewTicket(ticket_id=ticket_id, candidate=candidate)
            self._tickets[ticket_id] = ticket
            self._audit[ticket_id] = []
            return ticket

    def get(self, ticket_id: str) -> ReviewTicket:
        with self._lock:
            ticket = self._tickets.get(ticket_id)
            if ticket is None:
                raise UnknownTicket(ticket_id)
            return ticket

    def cast_vote(self, ticket_id: str, vote: Vote) -> ReviewTicket:
        """Record one expert's vote; resolves the ticket on the third vote.

        A vote that would complete the two-approvals pattern is refused
        (nothing recorded) unless the dissenting reject carries a
        justification, so the invariant "rejected-with-justification implies
        justification present" holds by construction.
        """
        with self._lock:
            ticket = self.get(ticket_id)
            if vote.expert_id not in self.experts:
                raise UnknownExpert(vote.expert_id)
            if ticket.state is not TicketState.PENDING:
                raise TicketClosed(ticket_id)
            if vote.expert_id in ticket.votes:
                raise AlreadyVoted(f"{vote.expert_id} already voted on {ticket_id}")

            pending_votes = dict(ticket.votes)
            pending_votes[vote.expert_id] = vote
            if len(pending_votes) == PANEL_SIZE:
                final = resolve_state([v.decision for v in pending_votes.values()])
                if final is TicketState.REJECTED_WITH_JUSTIFICATION:
                    rejecter = next(
                        v for v in pending_votes.values() if v.decision is Decision.REJECT
                    )
                    if not (rejecter.justification and rejecter.justification.strip()):
                        raise JustificationRequired(
                            "a lone dissenting reject must carry a justification"
                        )
                    ticket.justification = rejecter.justification
                ticket.state = final
                ticket.closed_at = datetime.now(timezone.utc)

            stamped = Vote(
                expert_id=vote.expert_id,
                decision=vote.decision,
                justification=vote.justification,
                cast_at=datetime.now(timezone.utc),
            )
            ticket.votes[vote.expert_id] = stamped
            self._audit[ticket_id].append(stamped)

            if ticket.state is TicketState.ACCEPTED and self.on_accept is not None:
                self.on_accept(ticket)
            return ticket

    def pending_queue(self, for_expert: Optional[str] = None) -> list[dict]:
        """Pending tickets oldest first, with vote counts and an own-vote flag."""
        with self._lock:
            out = []
            for ticket in self._tickets.values():
                if ticket.state is not TicketState.PENDING:
                    continue
                out.append(
                    {
                        "ticket_id": ticket.ticket_id,
                        "candidate": ticket.candidate,
                        "opened_at": ticket.opened_at,
                        "vote_count": len(ticket.votes),
                        "already_voted": for_expert in ticket.votes if for_expert else False,
                    }
                )
            out.sort(key=lambda t: t["opened_at"])
            return out

    def audit_log(self, ticket_id: str) -> list[Vote]:
        with self._lock:
            if ticket_id not in self._audit:
                raise UnknownTicket(ticket_id)
            return list(self._audit[ticket_id])
