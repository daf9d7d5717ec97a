import { CasePage, PendingTicket } from "./types.js";

// Renderers are pure string builders; the controller owns all event wiring.

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function loginView(errorMessage = ""): string {
  return `
    <section class="login">
      <h1>Reviewer console</h1>
      <form id="login-form">
        <label>Server URL
          <input id="login-server" type="text" value="http://127.0.0.1:8000" />
        </label>
        <label>Expert token
          <input id="login-token" type="password" autocomplete="off" />
        </label>
        <button type="submit">Enter</button>
      </form>
      ${errorMessage ? `<p class="error" data-testid="login-error">${escapeHtml(errorMessage)}</p>` : ""}
    </section>`;
}

export interface TicketViewState {
  // set after the server answered justification_required for this ticket
  requiresJustification: boolean;
  rejecting: boolean;
}

export function queueView(
  tickets: PendingTicket[],
  ticketState: Map<string, TicketViewState>,
  caseCount: number | null,
): string {
  const header = `
    <nav>
      <button id="tab-queue" class="active">Pending queue</button>
      <button id="tab-cases">Case base${caseCount === null ? "" : ` (${caseCount})`}</button>
      <span id="toast" role="status"></span>
    </nav>`;
  if (tickets.length === 0) {
    return `${header}<p class="empty" data-testid="queue-empty">No tickets awaiting review.</p>`;
  }
  const rows = tickets
    .map((t) => {
      const st = ticketState.get(t.ticket_id) ?? {
        requiresJustification: false,
        rejecting: false,
      };
      const justificationBlock = st.rejecting
        ? `
        <div class="justify" data-testid="justify-${t.ticket_id}">
          ${
            st.requiresJustification
              ? `<p class="prompt" data-testid="justify-prompt-${t.ticket_id}">A justification is required to reject this case.</p>`
              : ""
          }
          <textarea data-justification="${t.ticket_id}" placeholder="Why should this case not be stored?"></textarea>
          <button data-submit-reject="${t.ticket_id}" ${st.requiresJustification ? "disabled" : ""}>Submit rejection</button>
        </div>`
        : "";
      return `
      <article class="ticket" data-ticket="${t.ticket_id}">
        <header>
          <strong>${escapeHtml(t.candidate.book_title)}</strong>
          <span class="badge" data-testid="votes-${t.ticket_id}">${t.vote_count}/3</span>
          ${t.already_voted ? `<span class="badge own" data-testid="voted-${t.ticket_id}">you voted</span>` : ""}
        </header>
        <blockquote>${escapeHtml(t.candidate.text)}</blockquote>
        <p>personality ${escapeHtml(t.candidate.personality)} · score ${t.candidate.score.toFixed(8)}</p>
        <div class="actions">
          <button data-approve="${t.ticket_id}" ${t.already_voted ? "disabled" : ""}>Approve</button>
          <button data-reject="${t.ticket_id}" ${t.already_voted ? "disabled" : ""}>Reject</button>
        </div>
        ${justificationBlock}
      </article>`;
    })
    .join("");
  return `${header}<section id="queue">${rows}</section>`;
}

export function casesView(page: CasePage): string {
  const header = `
    <nav>
      <button id="tab-queue">Pending queue</button>
      <button id="tab-cases" class="active">Case base (${page.total})</button>
      <span id="toast" role="status"></span>
    </nav>`;
  if (page.cases.length === 0) {
    return `${header}<p class="empty" data-testid="cases-empty">No cases on this page.</p>`;
  }
  const rows = page.cases
    .map(
      (c) => `
      <tr data-case="${c.case_id}">
        <td>${escapeHtml(c.case_id)}</td>
        <td>${escapeHtml(c.book_title)}</td>
        <td>${escapeHtml(c.personality)}</td>
        <td><span class="origin ${c.origin}" data-testid="origin-${c.case_id}">${escapeHtml(c.origin)}</span></td>
      </tr>`,
    )
    .join("");
  const lastPage = page.offset + page.cases.length >= page.total;
  return `${header}
    <table id="case-table">
      <thead><tr><th>id</th><th>book</th><th>personality</th><th>origin</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    <div class="pager">
      <button id="page-prev" ${page.offset === 0 ? "disabled" : ""}>Previous</button>
      <span>${page.offset + 1}–${page.offset + page.cases.length} of ${page.total}</span>
      <button id="page-next" ${lastPage ? "disabled" : ""}>Next</button>
    </div>`;
}
