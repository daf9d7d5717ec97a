// Drives the console through the full reviewer workflow against a
// scripted in-memory server: login, voting a ticket to acceptance,
// checking the retained row in the case base, and the dissent path
// where a justification is demanded before the rejection can land.

import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { App } from "../src/app.js";
import { FakeServer } from "./fake_server.js";

const BASE = "http://127.0.0.1:8000";

async function flush(rounds = 6): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

function mount(): HTMLElement {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return root;
}

function click(root: HTMLElement, selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element matches ${selector}`);
  el.dispatchEvent(new Event("click", { bubbles: true }));
}

async function loginThroughForm(
  root: HTMLElement,
  token: string,
): Promise<App> {
  const app = new App(root, { pollIntervalMs: 0 });
  app.start();
  root.querySelector<HTMLInputElement>("#login-server")!.value = BASE;
  root.querySelector<HTMLInputElement>("#login-token")!.value = token;
  root
    .querySelector<HTMLFormElement>("#login-form")!
    .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  await flush();
  return app;
}

describe("reviewer workflow", () => {
  let server: FakeServer;

  beforeEach(() => {
    server = new FakeServer();
    server.install();
  });

  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("rejects an unknown token at login", async () => {
    const root = mount();
    await loginThroughForm(root, "tok-nadie");
    const error = root.querySelector('[data-testid="login-error"]');
    expect(error?.textContent).toBe("Token not recognized.");
    expect(root.querySelector("#login-form")).not.toBeNull();
  });

  it("shows the empty-queue message when nothing is pending", async () => {
    const root = mount();
    await loginThroughForm(root, "tok-ana");
    expect(
      root.querySelector('[data-testid="queue-empty"]')?.textContent,
    ).toBe("No tickets awaiting review.");
  });

  it("retains a unanimously approved case and lists it in the case base", async () => {
    server.seedCases(2);
    server.addTicket("ticket-000001");
    const roots = [mount(), mount(), mount()];
    const tokens = ["tok-ana", "tok-bruno", "tok-carla"];
    for (let i = 0; i < 3; i++) {
      await loginThroughForm(roots[i], tokens[i]);
      expect(
        roots[i].querySelector('[data-ticket="ticket-000001"]'),
      ).not.toBeNull();
      click(roots[i], '[data-approve="ticket-000001"]');
      await flush();
    }

    // the resolving vote empties every refreshed queue
    expect(roots[2].querySelector('[data-testid="queue-empty"]')).not.toBeNull();
    const record = server.tickets.get("ticket-000001")!;
    expect(record.state).toBe("accepted");

    click(roots[2], "#tab-cases");
    await flush();
    const origin = roots[2].querySelector(
      '[data-testid="origin-case-000003"]',
    );
    expect(origin?.textContent).toBe("retained");
    expect(origin?.classList.contains("retained")).toBe(true);
  });

  it("intermediate votes show progress badges to other reviewers", async () => {
    server.addTicket("ticket-000001");
    const anaRoot = mount();
    await loginThroughForm(anaRoot, "tok-ana");
    click(anaRoot, '[data-approve="ticket-000001"]');
    await flush();

    const brunoRoot = mount();
    await loginThroughForm(brunoRoot, "tok-bruno");
    expect(
      brunoRoot.querySelector('[data-testid="votes-ticket-000001"]')?.textContent,
    ).toBe("1/3");
    expect(
      brunoRoot.querySelector('[data-testid="voted-ticket-000001"]'),
    ).toBeNull();

    // ana's own refreshed view marks the ticket as voted and locks buttons
    expect(
      anaRoot.querySelector('[data-testid="voted-ticket-000001"]'),
    ).not.toBeNull();
    const approve = anaRoot.querySelector<HTMLButtonElement>(
      '[data-approve="ticket-000001"]',
    );
    expect(approve?.disabled).toBe(true);
  });

  it("demands a justification from a lone dissenter before the rejection lands", async () => {
    server.addTicket("ticket-000001");
    const tokens = ["tok-ana", "tok-bruno"];
    for (const token of tokens) {
      const root = mount();
      await loginThroughForm(root, token);
      click(root, '[data-approve="ticket-000001"]');
      await flush();
    }

    const root = mount();
    await loginThroughForm(root, "tok-carla");
    click(root, '[data-reject="ticket-000001"]');
    await flush();

    // the justification box opens, but no mandatory prompt yet
    expect(
      root.querySelector('[data-testid="justify-ticket-000001"]'),
    ).not.toBeNull();
    expect(
      root.querySelector('[data-testid="justify-prompt-ticket-000001"]'),
    ).toBeNull();

    // submitting empty: the server pushes back and the UI blocks resubmission
    click(root, '[data-submit-reject="ticket-000001"]');
    await flush();
    expect(
      root.querySelector('[data-testid="justify-prompt-ticket-000001"]')
        ?.textContent,
    ).toBe("A justification is required to reject this case.");
    const submit = root.querySelector<HTMLButtonElement>(
      '[data-submit-reject="ticket-000001"]',
    )!;
    expect(submit.disabled).toBe(true);
    expect(server.tickets.get("ticket-000001")!.state).toBe("pending");

    // a disabled-state click goes nowhere even if forced
    click(root, '[data-submit-reject="ticket-000001"]');
    await flush();
    expect(server.tickets.get("ticket-000001")!.state).toBe("pending");

    // typing a reason re-enables the button, and submission resolves
    const textarea = root.querySelector<HTMLTextAreaElement>(
      '[data-justification="ticket-000001"]',
    )!;
    textarea.value = "el texto no menciona ningún libro";
    textarea.dispatchEvent(new Event("input", { bubbles: true }));
    expect(submit.disabled).toBe(false);
    click(root, '[data-submit-reject="ticket-000001"]');
    await flush();

    const record = server.tickets.get("ticket-000001")!;
    expect(record.state).toBe("rejected_with_justification");
    expect(record.justification).toBe("el texto no menciona ningún libro");
    expect(root.querySelector('[data-testid="queue-empty"]')).not.toBeNull();
    expect(server.cases).toHaveLength(0);
  });

  it("sends a single vote even when the approve button is double-clicked", async () => {
    server.addTicket("ticket-000001");
    const root = mount();
    await loginThroughForm(root, "tok-ana");
    const before = server.requests.filter((r) => r.includes("/vote")).length;
    click(root, '[data-approve="ticket-000001"]');
    click(root, '[data-approve="ticket-000001"]');
    await flush();
    const after = server.requests.filter((r) => r.includes("/vote")).length;
    expect(after - before).toBe(1);
    expect(server.tickets.get("ticket-000001")!.votes.size).toBe(1);
  });

  it("absorbs a stale duplicate vote as a silent queue refresh", async () => {
    server.addTicket("ticket-000001");
    const root = mount();
    const app = await loginThroughForm(root, "tok-ana");
    click(root, '[data-approve="ticket-000001"]');
    await flush();

    // the rendered queue already dropped the button, so replay via the API
    await app.approve("ticket-000001");
    await flush();
    expect(server.tickets.get("ticket-000001")!.votes.size).toBe(1);
    expect(app.lastToast).not.toContain("already_voted");
  });

  it("pages through the case base and reports an empty page past the end", async () => {
    server.seedCases(25);
    const root = mount();
    const app = await loginThroughForm(root, "tok-ana");
    click(root, "#tab-cases");
    await flush();

    expect(root.querySelectorAll("[data-case]")).toHaveLength(20);
    expect(
      root.querySelector<HTMLButtonElement>("#page-prev")!.disabled,
    ).toBe(true);

    click(root, "#page-next");
    await flush();
    expect(root.querySelectorAll("[data-case]")).toHaveLength(5);
    expect(
      root.querySelector<HTMLButtonElement>("#page-next")!.disabled,
    ).toBe(true);

    await app.showCases(40);
    expect(root.querySelector('[data-testid="cases-empty"]')).not.toBeNull();
  });
});
