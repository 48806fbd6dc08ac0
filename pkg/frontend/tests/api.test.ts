import { describe, expect, it } from "vitest";

import { ApiError, ENDPOINT_PATTERNS, ServiceClient } from "../src/api.js";
import { stubFetch } from "./helpers.js";

const BASE = "http://svc.test";

function okJson(method: string, url: string): { status: number; json: unknown } {
  if (url.endsWith("/sessions")) return { status: 201, json: { session_id: "s1" } };
  if (url.endsWith("/tabs") && method === "POST") return { status: 201, json: { tab_id: "t1" } };
  if (url.endsWith("/tabs")) return { status: 200, json: { tabs: [] } };
  return { status: 200, json: {} };
}

describe("service client contract", () => {
  it("issues only requests the service API defines", async () => {
    const { fetchFn, requests } = stubFetch(okJson);
    const client = new ServiceClient(BASE, "tok", fetchFn);
    await client.newSession();
    await client.openTab("s1");
    await client.listTabs("s1");
    await client.ask("s1", "t1", "Which individuals have colon cancer?", "multistep");
    await client.confirm("s1", "t1", {
      scope: "individuals", granularity: "count", variant: null, filters: [],
    });
    await client.requestAnalysis("s1", "t1", "plot something");
    await client.runAnalysis("s1", "t1", "x = 1");
    await client.fetchArtifact("s1", "t1", "pie.png");

    expect(requests.length).toBe(8);
    for (const request of requests) {
      const path = request.url.replace(BASE, "");
      const line = `${request.method} ${path}`;
      const matched = ENDPOINT_PATTERNS.some((pattern) => pattern.test(line));
      expect(matched, `undefined endpoint: ${line}`).toBe(true);
    }
  });

  it("sends the bearer token on every request", async () => {
    const { fetchFn, requests } = stubFetch(okJson);
    const client = new ServiceClient(BASE, "secret-token", fetchFn);
    await client.newSession();
    await client.ask("s1", "t1", "q");
    for (const request of requests) {
      expect(request.headers.Authorization).toBe("Bearer secret-token");
    }
  });

  it("question bodies carry the question and optional workflow", async () => {
    const { fetchFn, requests } = stubFetch(okJson);
    const client = new ServiceClient(BASE, "tok", fetchFn);
    await client.ask("s1", "t1", "How many?", "parallel");
    await client.ask("s1", "t1", "How many?");
    expect(requests[0].body).toEqual({ question: "How many?", workflow: "parallel" });
    expect(requests[1].body).toEqual({ question: "How many?" });
  });

  it("confirm bodies pass edited fields through verbatim", async () => {
    const { fetchFn, requests } = stubFetch(okJson);
    const client = new ServiceClient(BASE, "tok", fetchFn);
    const body = {
      scope: "individuals",
      granularity: "record",
      variant: {
        assembly_id: null, reference_name: "X", start: [1], end: [2],
        reference_bases: null, alternate_bases: null, gene_id: null,
      },
      filters: [{ filter_type: "custom", id: null, value: null,
                  term: "asthma", scope: "individuals" }],
    };
    await client.confirm("s1", "t1", body);
    expect(requests[0].body).toEqual(body);
  });

  it("error bodies become typed ApiError", async () => {
    const { fetchFn } = stubFetch(() => ({
      status: 422,
      json: { code: "guard_rejected", message: "static checks failed",
              detail: [{ rule: "R1", line: 1, excerpt: "import os" }] },
    }));
    const client = new ServiceClient(BASE, "tok", fetchFn);
    await expect(client.runAnalysis("s1", "t1", "import os")).rejects.toSatisfy(
      (error: unknown) => error instanceof ApiError
        && error.status === 422 && error.body.code === "guard_rejected",
    );
  });
});
