// Tabbed chat shell. Each tab is an isolated conversation whose rendering
// state derives solely from service responses.

import { ApiError, ServiceClient } from "./api.js";
import { renderConfirmationCard } from "./card.js";
import { createReviewPane, type ReviewPane } from "./review.js";
import type { ConfirmBody, ConfirmResponse } from "./types.js";

function message(doc: Document, role: "user" | "assistant", text: string): HTMLElement {
  const el = doc.createElement("div");
  el.className = `message ${role}`;
  el.textContent = text;
  return el;
}

export class TabController {
  readonly root: HTMLElement;
  private readonly log: HTMLElement;
  private readonly resultPanel: HTMLElement;
  private review: ReviewPane | null = null;

  constructor(
    private readonly doc: Document,
    private readonly client: ServiceClient,
    private readonly session: string,
    readonly tabId: string,
  ) {
    this.root = doc.createElement("section");
    this.root.className = "tab-view";
    this.log = doc.createElement("div");
    this.log.className = "message-log";
    this.resultPanel = doc.createElement("div");
    this.resultPanel.className = "result-panel";

    const form = doc.createElement("form");
    const input = doc.createElement("input");
    input.type = "text";
    input.placeholder = "Ask about individuals, biosamples or variants";
    input.className = "question-input";
    const send = doc.createElement("button");
    send.type = "submit";
    send.textContent = "Ask";
    const workflow = doc.createElement("select");
    workflow.className = "workflow";
    for (const name of ["parallel", "multistep"]) {
      const opt = doc.createElement("option");
      opt.value = name;
      opt.textContent = name;
      workflow.appendChild(opt);
    }
    form.appendChild(input);
    form.appendChild(workflow);
    form.appendChild(send);
    form.onsubmit = (event) => {
      event.preventDefault();
      const question = input.value.trim();
      if (question) {
        input.value = "";
        void this.ask(question, workflow.value as "parallel" | "multistep");
      }
    };

    this.root.appendChild(this.log);
    this.root.appendChild(form);
    this.root.appendChild(this.resultPanel);
  }

  private say(role: "user" | "assistant", text: string): void {
    this.log.appendChild(message(this.doc, role, text));
  }

  async ask(question: string, workflow?: "parallel" | "multistep"): Promise<void> {
    this.say("user", question);
    try {
      const response = await this.client.ask(this.session, this.tabId, question, workflow);
      if (response.kind === "greeting") {
        this.say("assistant", response.reply ?? "Hello!");
        return;
      }
      if (response.kind === "refusal") {
        this.say("assistant", `I can only help with Beacon queries: ${response.reason}`);
        return;
      }
      this.say("assistant", "Here is what I extracted; please review and confirm.");
      const form = renderConfirmationCard(this.doc, response.card!, (body) => {
        void this.confirm(body);
      });
      this.resultPanel.textContent = "";
      this.resultPanel.appendChild(form.root);
    } catch (error) {
      this.say("assistant", this.describeError(error));
    }
  }

  async confirm(body: ConfirmBody): Promise<void> {
    try {
      const result = await this.client.confirm(this.session, this.tabId, body);
      this.renderResult(result);
    } catch (error) {
      this.say("assistant", this.describeError(error));
    }
  }

  private renderResult(result: ConfirmResponse): void {
    this.resultPanel.textContent = "";
    if (result.kind === "count") {
      this.say("assistant", `Count: ${result.count}`);
      return;
    }
    if (result.kind === "boolean") {
      this.say("assistant", result.exists ? "Yes, matching data exists." : "No matching data.");
      return;
    }
    this.say("assistant", `Fetched ${result.row_count} records.`);
    const table = this.doc.createElement("table");
    table.className = "records";
    const head = this.doc.createElement("tr");
    for (const column of result.columns ?? []) {
      const th = this.doc.createElement("th");
      th.textContent = `${column.name} (${column.kind})`;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const row of result.rows ?? []) {
      const tr = this.doc.createElement("tr");
      for (const cell of row) {
        const td = this.doc.createElement("td");
        td.textContent = typeof cell === "object" && cell !== null
          ? JSON.stringify(cell) : String(cell ?? "");
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    this.resultPanel.appendChild(table);

    const analyze = this.doc.createElement("form");
    analyze.className = "analysis-form";
    const request = this.doc.createElement("input");
    request.type = "text";
    request.placeholder = "Describe an analysis, e.g. plot a pie chart";
    const go = this.doc.createElement("button");
    go.type = "submit";
    go.textContent = "Generate code";
    analyze.appendChild(request);
    analyze.appendChild(go);
    analyze.onsubmit = (event) => {
      event.preventDefault();
      if (request.value.trim()) {
        void this.requestAnalysis(request.value.trim());
      }
    };
    this.resultPanel.appendChild(analyze);
  }

  async requestAnalysis(request: string): Promise<void> {
    this.say("user", request);
    try {
      const analysis = await this.client.requestAnalysis(this.session, this.tabId, request);
      this.say("assistant", "Review the generated code before running it.");
      this.review = createReviewPane(
        this.doc,
        analysis,
        (code) => void this.runAnalysis(code),
        (name) => this.client.artifactPath(this.session, this.tabId, name),
      );
      this.resultPanel.appendChild(this.review.root);
    } catch (error) {
      this.say("assistant", this.describeError(error));
    }
  }

  async runAnalysis(code: string): Promise<void> {
    if (!this.review) {
      return;
    }
    try {
      const run = await this.client.runAnalysis(this.session, this.tabId, code);
      this.review.showOutcome({ ok: true, run });
      this.say("assistant", `Execution finished with status ${run.exit_status}.`);
    } catch (error) {
      if (error instanceof ApiError && error.body.code === "guard_rejected") {
        const violations = Array.isArray(error.body.detail)
          ? (error.body.detail as { rule: string; line: number; excerpt: string }[])
          : [];
        this.review.showOutcome({ ok: false, violations });
        this.say("assistant", "The edit failed static checks; fix the flagged lines.");
        return;
      }
      if (error instanceof ApiError && error.body.code === "timeout") {
        const detail = error.body.detail as { stdout?: string; stderr?: string } | null;
        this.review.showTimeout(detail?.stdout ?? "", detail?.stderr ?? "");
        return;
      }
      this.say("assistant", this.describeError(error));
    }
  }

  private describeError(error: unknown): string {
    if (error instanceof ApiError) {
      return `Service error (${error.body.code}): ${error.body.message}`;
    }
    return `Request failed: ${String(error)}`;
  }
}

export class AppShell {
  readonly root: HTMLElement;
  private readonly tabBar: HTMLElement;
  private readonly tabHost: HTMLElement;
  private readonly tabs: TabController[] = [];
  private session: string | null = null;

  constructor(private readonly doc: Document, private readonly client: ServiceClient) {
    this.root = doc.createElement("div");
    this.root.className = "app-shell";
    this.tabBar = doc.createElement("nav");
    this.tabBar.className = "tab-bar";
    this.tabHost = doc.createElement("main");
    const newTab = doc.createElement("button");
    newTab.type = "button";
    newTab.textContent = "+ tab";
    newTab.onclick = () => void this.openTab();
    this.tabBar.appendChild(newTab);
    this.root.appendChild(this.tabBar);
    this.root.appendChild(this.tabHost);
  }

  async start(): Promise<void> {
    const created = await this.client.newSession();
    this.session = created.session_id;
    await this.openTab();
  }

  async openTab(): Promise<void> {
    if (!this.session) {
      return;
    }
    const opened = await this.client.openTab(this.session);
    const controller = new TabController(this.doc, this.client, this.session, opened.tab_id);
    this.tabs.push(controller);
    const button = this.doc.createElement("button");
    button.type = "button";
    button.textContent = `tab ${this.tabs.length}`;
    button.onclick = () => this.show(controller);
    this.tabBar.insertBefore(button, this.tabBar.lastChild);
    this.show(controller);
  }

  private show(controller: TabController): void {
    this.tabHost.textContent = "";
    this.tabHost.appendChild(controller.root);
  }
}
