import type { Card, AnalysisResponse } from "../src/types.js";

export function sampleCard(): Card {
  return {
    scope: { value: "individuals", status: "known", reason: "" },
    granularity: { value: "record", status: "known", reason: "" },
    variant: {
      assembly_id: null,
      reference_name: "4",
      start: [90600000],
      end: [90700000],
      reference_bases: null,
      alternate_bases: null,
      gene_id: null,
    },
    variant_status: { value: null, status: "known", reason: "" },
    filters: [{
      filter_type: "custom",
      id: null,
      value: null,
      term: "parkinson disease",
      scope: "individuals",
    }],
    filters_status: { value: null, status: "known", reason: "" },
    residue: [],
    editable: true,
  };
}

export function sampleAnalysis(verdict: "pass" | "reject" = "pass"): AnalysisResponse {
  return {
    state: "awaiting_code_review",
    artifact: {
      code: "counts = df['karyotypic_sex'].value_counts()\nplt.savefig('/tmp/pie.png')\n",
      files: ["/tmp/pie.png"],
      assumptions: ["one category per row"],
      feedback: [],
    },
    guard: {
      verdict,
      violations: verdict === "reject"
        ? [{ rule: "R1", line: 1, excerpt: "import os" }]
        : [],
    },
  };
}

export interface RecordedRequest {
  method: string;
  url: string;
  body: unknown;
  headers: Record<string, string>;
}

export function stubFetch(
  respond: (method: string, url: string, body: unknown) => { status: number; json: unknown },
): { fetchFn: (url: string, init: RequestInit) => Promise<Response>; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const fetchFn = async (url: string, init: RequestInit): Promise<Response> => {
    const method = init.method ?? "GET";
    const body = typeof init.body === "string" ? JSON.parse(init.body) : undefined;
    requests.push({
      method,
      url,
      body,
      headers: (init.headers ?? {}) as Record<string, string>,
    });
    const out = respond(method, url, body);
    return new Response(JSON.stringify(out.json), {
      status: out.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, requests };
}
