import {
  ApiError,
  ApiErrorBody,
  CasePage,
  HealthPayload,
  PendingTicket,
  VoteResponse,
} from "./types.js";

async function parseError(resp: Response): Promise<ApiError> {
  let body: ApiErrorBody = { code: "unknown_error", detail: resp.statusText };
  try {
    body = (await resp.json()) as ApiErrorBody;
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiError(resp.status, body.code, body.detail);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private expertToken: string,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(this.baseUrl + path);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  async health(): Promise<HealthPayload> {
    return this.get<HealthPayload>("/health");
  }

  async pendingTickets(): Promise<PendingTicket[]> {
    const token = encodeURIComponent(this.expertToken);
    return this.get<PendingTicket[]>(`/reviews/pending?expert_token=${token}`);
  }

  async cases(limit: number, offset: number): Promise<CasePage> {
    return this.get<CasePage>(`/cases?limit=${limit}&offset=${offset}`);
  }

  async vote(
    ticketId: string,
    decision: "approve" | "reject",
    justification?: string,
  ): Promise<VoteResponse> {
    const body: Record<string, string> = {
      expert_token: this.expertToken,
      decision,
    };
    if (justification !== undefined) body.justification = justification;
    const resp = await fetch(`${this.baseUrl}/reviews/${ticketId}/vote`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as VoteResponse;
  }
}
