import { describe, expect, it } from "vitest";
import { CasePage, PendingTicket } from "../src/types.js";
import { casesView, escapeHtml, queueView } from "../src/views.js";

function ticket(id: string, voteCount = 0, alreadyVoted = false): PendingTicket {
  return {
    ticket_id: id,
    candidate: {
      text: "<b>no html</b> aquí",
      book_title: 'La "sombra" del viento',
      personality: "INFJ",
      score: 0.61234567,
    },
    opened_at: "2022-03-02T00:00:00+00:00",
    vote_count: voteCount,
    already_voted: alreadyVoted,
  };
}

describe("escapeHtml", () => {
  it("neutralizes markup and quotes", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;",
    );
  });
});

describe("queueView", () => {
  it("renders candidate text escaped, never as markup", () => {
    const html = queueView([ticket("ticket-000001")], new Map(), 0);
    expect(html).toContain("&lt;b&gt;no html&lt;/b&gt; aquí");
    expect(html).not.toContain("<b>no html</b>");
  });

  it("shows vote progress out of the panel size", () => {
    const html = queueView([ticket("ticket-000001", 2)], new Map(), 0);
    expect(html).toContain(">2/3<");
  });

  it("disables actions once the viewer has voted", () => {
    const html = queueView([ticket("ticket-000001", 1, true)], new Map(), 0);
    expect(html).toContain('data-approve="ticket-000001" disabled');
    expect(html).toContain('data-testid="voted-ticket-000001"');
  });

  it("keeps the rejection submit disabled while a justification is mandatory", () => {
    const state = new Map([
      ["ticket-000001", { rejecting: true, requiresJustification: true }],
    ]);
    const html = queueView([ticket("ticket-000001")], state, 0);
    expect(html).toContain('data-testid="justify-prompt-ticket-000001"');
    expect(html).toContain('data-submit-reject="ticket-000001" disabled');
  });
});

describe("casesView", () => {
  const page = (cases: CasePage["cases"], offset = 0, total = cases.length): CasePage => ({
    total,
    store_version: 1,
    limit: 20,
    offset,
    cases,
  });

  it("flags retained rows by origin", () => {
    const html = casesView(
      page([
        {
          case_id: "case-000009",
          text: "t",
          book_title: "b",
          personality: "ENTP",
          origin: "retained",
          created_at: "2022-03-03T00:00:00+00:00",
          ticket_id: "ticket-000004",
        },
      ]),
    );
    expect(html).toContain('data-testid="origin-case-000009"');
    expect(html).toContain('class="origin retained"');
  });

  it("shows an explicit message for a page past the end", () => {
    const html = casesView(page([], 40, 25));
    expect(html).toContain('data-testid="cases-empty"');
  });
});
