import {
  ApiError,
  ApiErrorSchema,
  Job,
  JobSchema,
  Problem,
  ProblemSchema,
  Session,
  SessionNode,
  SessionNodeSchema,
  SessionSchema,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly payload: ApiError,
  ) {
    super(`${payload.kind}: ${payload.error}`);
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

/** Thin typed client over the /v1 JSON API.  All state lives server-side. */
export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async call(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<unknown> {
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (response.status >= 400) {
      throw new ApiRequestError(
        response.status,
        ApiErrorSchema.parse(payload),
      );
    }
    return payload;
  }

  async parseProblem(text: string): Promise<Problem> {
    const out = (await this.call("POST", "/v1/problems", { text })) as {
      problem: unknown;
    };
    return ProblemSchema.parse(out.problem);
  }

  async catalogProblem(
    name: string,
    params?: { delta?: number; k?: number },
  ): Promise<Problem> {
    const query = new URLSearchParams();
    if (params?.delta !== undefined) query.set("delta", String(params.delta));
    if (params?.k !== undefined) query.set("k", String(params.k));
    const suffix = query.size > 0 ? `?${query.toString()}` : "";
    const out = (await this.call(
      "GET",
      `/v1/catalog/${name}${suffix}`,
    )) as { problem: unknown };
    return ProblemSchema.parse(out.problem);
  }

  /** Run one operation; resolves the job transparently when the server
   * answers 202. */
  async applyOperation(
    op: string,
    payload: Record<string, unknown>,
    pollMs = 50,
  ): Promise<unknown> {
    const out = (await this.call("POST", `/v1/ops/${op}`, payload)) as Record<
      string,
      unknown
    >;
    if (typeof out.job !== "string") return out;
    for (;;) {
      const job = await this.job(out.job);
      if (job.status === "done") return job.result;
      if (job.status === "error" || job.status === "cancelled") {
        throw new ApiRequestError(
          job.status === "error" ? 400 : 499,
          ApiErrorSchema.parse(
            job.error ?? { kind: "cancelled", error: "job cancelled" },
          ),
        );
      }
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }

  async job(id: string): Promise<Job> {
    return JobSchema.parse(await this.call("GET", `/v1/jobs/${id}`));
  }

  async cancelJob(id: string): Promise<void> {
    await this.call("POST", `/v1/jobs/${id}/cancel`);
  }

  async createSession(root: Record<string, unknown>): Promise<Session> {
    return SessionSchema.parse(
      await this.call("POST", "/v1/sessions", { root }),
    );
  }

  async session(id: string): Promise<Session> {
    return SessionSchema.parse(await this.call("GET", `/v1/sessions/${id}`));
  }

  async listSessions(): Promise<string[]> {
    const out = (await this.call("GET", "/v1/sessions")) as {
      sessions: string[];
    };
    return out.sessions;
  }

  async deleteSession(id: string): Promise<void> {
    await this.call("DELETE", `/v1/sessions/${id}`);
  }

  /** Apply an operation as a session step; problem-producing operations
   * return the new child node, verdict operations the annotation record. */
  async addStep(
    sessionId: string,
    node: number,
    op: string,
    params: Record<string, unknown> = {},
    note = "",
  ): Promise<SessionNode | Record<string, unknown>> {
    const out = (await this.call("POST", `/v1/sessions/${sessionId}/steps`, {
      node,
      note,
      op,
      ...params,
    })) as Record<string, unknown>;
    if (typeof out.id === "number") return SessionNodeSchema.parse(out);
    return out;
  }
}
