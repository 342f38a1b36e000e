import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { ApiClient, ApiRequestError, FetchLike } from "../src/api.js";

function fixture(name: string): unknown {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8"));
}

type Route = { status: number; body: unknown };

function fakeFetch(routes: Record<string, Route | Route[]>): {
  fetch: FetchLike;
  calls: string[];
} {
  const calls: string[] = [];
  const fetch: FetchLike = async (url, init) => {
    const key = `${init?.method ?? "GET"} ${url}`;
    calls.push(key);
    const entry = routes[key];
    if (entry === undefined) {
      return { status: 404, json: async () => ({ kind: "unknown", error: key }) };
    }
    const route = Array.isArray(entry) ? entry.shift() ?? entry[0] : entry;
    if (route === undefined) throw new Error(`route exhausted: ${key}`);
    return { status: route.status, json: async () => route.body };
  };
  return { fetch, calls };
}

describe("api client", () => {
  it("parses a served session", async () => {
    const { fetch } = fakeFetch({
      "GET /v1/sessions/fixture-session": {
        status: 200,
        body: fixture("session-sso-q3"),
      },
    });
    const client = new ApiClient("", fetch);
    const session = await client.session("fixture-session");
    expect(session.nodes.map((n) => n.problem.labels.length)).toEqual([
      2, 3, 5, 7,
    ]);
  });

  it("surfaces cap-exceeded errors with the completed step count", async () => {
    const { fetch } = fakeFetch({
      "POST /v1/ops/qpow": { status: 409, body: fixture("error-cap-exceeded") },
    });
    const client = new ApiClient("", fetch);
    try {
      await client.applyOperation("qpow", { k: 3 });
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiRequestError);
      const typed = err as ApiRequestError;
      expect(typed.status).toBe(409);
      expect(typed.payload.kind).toBe("cap-exceeded");
      expect(typed.payload.partial_index).toBe(2);
    }
  });

  it("resolves deferred jobs by polling", async () => {
    const result = fixture("op-q-sso");
    const { fetch, calls } = fakeFetch({
      "POST /v1/ops/q": { status: 202, body: { job: "j1" } },
      "GET /v1/jobs/j1": [
        {
          status: 200,
          body: { id: "j1", status: "running", progress: { elapsed: 0.01 } },
        },
        {
          status: 200,
          body: {
            id: "j1",
            status: "done",
            progress: { elapsed: 0.02 },
            result,
          },
        },
      ],
    });
    const client = new ApiClient("", fetch);
    const out = await client.applyOperation("q", { problem: {} }, 1);
    expect(out).toEqual(result);
    expect(calls.filter((c) => c.startsWith("GET /v1/jobs/j1")).length).toBe(2);
  });

  it("fetches catalog problems with query parameters", async () => {
    const { fetch, calls } = fakeFetch({
      "GET /v1/catalog/sso-qk?k=2": {
        status: 200,
        body: fixture("catalog-sso"),
      },
    });
    const client = new ApiClient("", fetch);
    const problem = await client.catalogProblem("sso-qk", { k: 2 });
    expect(problem.labels.length).toBe(2);
    expect(calls).toEqual(["GET /v1/catalog/sso-qk?k=2"]);
  });
});
