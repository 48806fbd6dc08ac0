// Thin typed client over the service HTTP API. Every path the UI can ever
// request is built here and nowhere else, so the contract test only has to
// check this module's output against the endpoint table.

import type {
  AnalysisResponse,
  ApiErrorBody,
  ConfirmBody,
  ConfirmResponse,
  QuestionResponse,
  RunResponse,
} from "./types.js";

export const ENDPOINT_PATTERNS: RegExp[] = [
  /^POST \/sessions$/,
  /^POST \/sessions\/[^/]+\/tabs$/,
  /^GET \/sessions\/[^/]+\/tabs$/,
  /^POST \/sessions\/[^/]+\/tabs\/[^/]+\/question$/,
  /^POST \/sessions\/[^/]+\/tabs\/[^/]+\/confirm$/,
  /^POST \/sessions\/[^/]+\/tabs\/[^/]+\/analysis$/,
  /^POST \/sessions\/[^/]+\/tabs\/[^/]+\/analysis\/run$/,
  /^GET \/sessions\/[^/]+\/tabs\/[^/]+\/artifacts\/[^/]+$/,
];

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private token: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  setToken(token: string): void {
    this.token = token;
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        "Content-Type": "application/json",
      },
    };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let errorBody: ApiErrorBody;
      try {
        errorBody = (await response.json()) as ApiErrorBody;
      } catch {
        errorBody = { code: "unknown", message: response.statusText, detail: null };
      }
      throw new ApiError(response.status, errorBody);
    }
    return (await response.json()) as T;
  }

  newSession(): Promise<{ session_id: string }> {
    return this.call("POST", "/sessions");
  }

  openTab(session: string): Promise<{ tab_id: string }> {
    return this.call("POST", `/sessions/${session}/tabs`);
  }

  listTabs(session: string): Promise<{ tabs: { tab_id: string; state: string }[] }> {
    return this.call("GET", `/sessions/${session}/tabs`);
  }

  ask(session: string, tab: string, question: string,
      workflow?: "parallel" | "multistep"): Promise<QuestionResponse> {
    const body: Record<string, unknown> = { question };
    if (workflow) {
      body.workflow = workflow;
    }
    return this.call("POST", `/sessions/${session}/tabs/${tab}/question`, body);
  }

  confirm(session: string, tab: string, body: ConfirmBody): Promise<ConfirmResponse> {
    return this.call("POST", `/sessions/${session}/tabs/${tab}/confirm`, body);
  }

  requestAnalysis(session: string, tab: string, request: string): Promise<AnalysisResponse> {
    return this.call("POST", `/sessions/${session}/tabs/${tab}/analysis`, { request });
  }

  runAnalysis(session: string, tab: string, code: string): Promise<RunResponse> {
    return this.call("POST", `/sessions/${session}/tabs/${tab}/analysis/run`, { code });
  }

  artifactPath(session: string, tab: string, name: string): string {
    return `/sessions/${session}/tabs/${tab}/artifacts/${encodeURIComponent(name)}`;
  }

  async fetchArtifact(session: string, tab: string, name: string): Promise<Blob> {
    const response = await this.fetchFn(
      this.baseUrl + this.artifactPath(session, tab, name),
      { method: "GET", headers: { Authorization: `Bearer ${this.token}` } },
    );
    if (!response.ok) {
      throw new ApiError(response.status, {
        code: "artifact_fetch_failed",
        message: response.statusText,
        detail: null,
      });
    }
    return response.blob();
  }
}
