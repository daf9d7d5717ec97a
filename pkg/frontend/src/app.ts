import { ApiClient } from "./api.js";
import { ApiError, CasePage, PendingTicket } from "./types.js";
import { TicketViewState, casesView, loginView, queueView } from "./views.js";

const PAGE_SIZE = 20;

export interface AppOptions {
  pollIntervalMs?: number; // queue refresh; 0 disables polling
}

/**
 * Single-page controller. All displayed states come from server
 * responses; the client never resolves votes locally, and each user
 * confirmation issues exactly one API call (in-flight votes are
 * guarded so a double click cannot send twice).
 */
export class App {
  private client: ApiClient | null = null;
  private root: HTMLElement;
  private view: "login" | "queue" | "cases" = "login";
  private tickets: PendingTicket[] = [];
  private ticketState = new Map<string, TicketViewState>();
  private casePage: CasePage | null = null;
  private caseCount: number | null = null;
  private offset = 0;
  private loginError = "";
  private voteInFlight = new Set<string>();
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private pollIntervalMs: number;

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.root = root;
    this.pollIntervalMs = options.pollIntervalMs ?? 5000;
  }

  start(): void {
    this.render();
  }

  stop(): void {
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
    this.pollTimer = null;
  }

  async login(serverUrl: string, token: string): Promise<void> {
    const client = new ApiClient(serverUrl.replace(/\/+$/, ""), token);
    try {
      // pending queue doubles as the token check: bad tokens get a 401
      this.tickets = await client.pendingTickets();
      const health = await client.health();
      this.caseCount = health.case_count;
    } catch (err) {
      this.loginError =
        err instanceof ApiError && err.status === 401
          ? "Token not recognized."
          : "Could not reach the service.";
      this.render();
      return;
    }
    this.client = client;
    this.loginError = "";
    this.view = "queue";
    this.render();
    if (this.pollIntervalMs > 0) {
      this.pollTimer = setInterval(() => void this.refreshQueue(), this.pollIntervalMs);
    }
  }

  async refreshQueue(): Promise<void> {
    if (!this.client) return;
    try {
      this.tickets = await this.client.pendingTickets();
      const health = await this.client.health();
      this.caseCount = health.case_count;
    } catch {
      return; // transient poll failure; keep the last good view
    }
    if (this.view === "queue") this.render();
  }

  async showCases(offset = this.offset): Promise<void> {
    if (!this.client) return;
    this.casePage = await this.client.cases(PAGE_SIZE, offset);
    this.offset = offset;
    this.view = "cases";
    this.render();
  }

  async showQueue(): Promise<void> {
    this.view = "queue";
    await this.refreshQueue();
    this.render();
  }

  async approve(ticketId: string): Promise<void> {
    await this.castVote(ticketId, "approve");
  }

  beginReject(ticketId: string): void {
    this.ticketState.set(ticketId, {
      rejecting: true,
      requiresJustification:
        this.ticketState.get(ticketId)?.requiresJustification ?? false,
    });
    this.render();
  }

  async submitReject(ticketId: string, justification: string): Promise<void> {
    const trimmed = justification.trim();
    const state = this.ticketState.get(ticketId);
    if (state?.requiresJustification && trimmed === "") {
      return; // submission stays blocked until text is entered
    }
    await this.castVote(ticketId, "reject", trimmed === "" ? undefined : trimmed);
  }

  private async castVote(
    ticketId: string,
    decision: "approve" | "reject",
    justification?: string,
  ): Promise<void> {
    if (!this.client || this.voteInFlight.has(ticketId)) return;
    this.voteInFlight.add(ticketId);
    try {
      const result = await this.client.vote(ticketId, decision, justification);
      this.ticketState.delete(ticketId);
      this.toast(`Ticket ${result.ticket_id}: ${result.state}`);
      await this.refreshQueue();
      this.render();
    } catch (err) {
      if (err instanceof ApiError && err.code === "justification_required") {
        this.ticketState.set(ticketId, {
          rejecting: true,
          requiresJustification: true,
        });
        this.render();
      } else if (err instanceof ApiError && err.status === 409) {
        // duplicate click or a vote that raced a resolution; re-sync silently
        await this.refreshQueue();
        this.render();
      } else {
        this.toast(err instanceof Error ? err.message : String(err));
      }
    } finally {
      this.voteInFlight.delete(ticketId);
    }
  }

  private toast(message: string): void {
    const el = this.root.querySelector<HTMLElement>("#toast");
    if (el) el.textContent = message;
    this.lastToast = message;
  }

  lastToast = "";

  render(): void {
    if (this.view === "login") {
      this.root.innerHTML = loginView(this.loginError);
    } else if (this.view === "queue") {
      this.root.innerHTML = queueView(this.tickets, this.ticketState, this.caseCount);
    } else {
      this.root.innerHTML = casesView(this.casePage!);
    }
    if (this.lastToast) this.toast(this.lastToast);
    this.wire();
  }

  private wire(): void {
    const form = this.root.querySelector<HTMLFormElement>("#login-form");
    if (form) {
      form.addEventListener("submit", (event) => {
        event.preventDefault();
        const server =
          this.root.querySelector<HTMLInputElement>("#login-server")!.value;
        const token =
          this.root.querySelector<HTMLInputElement>("#login-token")!.value;
        void this.login(server, token);
      });
      return;
    }

    this.root
      .querySelector("#tab-queue")
      ?.addEventListener("click", () => void this.showQueue());
    this.root
      .querySelector("#tab-cases")
      ?.addEventListener("click", () => void this.showCases(0));
    this.root
      .querySelector("#page-prev")
      ?.addEventListener("click", () =>
        void this.showCases(Math.max(0, this.offset - PAGE_SIZE)),
      );
    this.root
      .querySelector("#page-next")
      ?.addEventListener("click", () => void this.showCases(this.offset + PAGE_SIZE));

    for (const button of this.root.querySelectorAll<HTMLButtonElement>("[data-approve]")) {
      button.addEventListener("click", () => void this.approve(button.dataset.approve!));
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>("[data-reject]")) {
      button.addEventListener("click", () => this.beginReject(button.dataset.reject!));
    }
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(
      "[data-submit-reject]",
    )) {
      const ticketId = button.dataset.submitReject!;
      const textarea = this.root.querySelector<HTMLTextAreaElement>(
        `[data-justification="${ticketId}"]`,
      )!;
      textarea.addEventListener("input", () => {
        const state = this.ticketState.get(ticketId);
        if (state?.requiresJustification) {
          button.disabled = textarea.value.trim() === "";
        }
      });
      button.addEventListener("click", () =>
        void this.submitReject(ticketId, textarea.value),
      );
    }
  }
}
