// Shapes of the JSON payloads served by the recommendation service.
// The client never derives resolution states itself; every state string
// displayed comes from these server responses.

export interface CandidatePayload {
  text: string;
  book_title: string;
  personality: string;
  score: number;
}

export interface PendingTicket {
  ticket_id: string;
  candidate: CandidatePayload;
  opened_at: string;
  vote_count: number;
  already_voted: boolean;
}

export interface VoteResponse {
  ticket_id: string;
  state: string;
  vote_count: number;
  justification: string | null;
  retained_case_id: string | null;
}

export interface CaseRow {
  case_id: string;
  text: string;
  book_title: string;
  personality: string;
  origin: string;
  created_at: string;
  ticket_id: string | null;
}

export interface CasePage {
  total: number;
  store_version: number;
  limit: number;
  offset: number;
  cases: CaseRow[];
}

export interface HealthPayload {
  status: string;
  store_version: number;
  case_count: number;
}

export interface ApiErrorBody {
  code: string;
  detail: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    public detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}
