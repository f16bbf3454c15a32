// Service client. One selection request in flight at a time: each call
// takes a token and a response is dropped as stale when a newer request
// was issued meanwhile.

import type { Catalog, ExerciseResponse, SelectRequest, SelectResponse } from "./types.js";
import { serializeBody } from "./controls.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiError {
  status: number;
  errors: string[];
}

export type SelectOutcome =
  | { kind: "ok"; response: SelectResponse }
  | { kind: "stale" }
  | { kind: "error"; error: ApiError };

async function readError(resp: Response): Promise<ApiError> {
  try {
    const doc = await resp.json();
    const errors = doc?.detail?.errors ?? [JSON.stringify(doc)];
    return { status: resp.status, errors };
  } catch {
    return { status: resp.status, errors: [`HTTP ${resp.status}`] };
  }
}

export class ApiClient {
  private selectToken = 0;

  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async criteria(): Promise<Catalog> {
    const resp = await this.fetchFn(`${this.base}/criteria`);
    if (!resp.ok) throw new Error(`criteria endpoint failed: HTTP ${resp.status}`);
    return (await resp.json()) as Catalog;
  }

  async select(body: SelectRequest): Promise<SelectOutcome> {
    const token = ++this.selectToken;
    const resp = await this.fetchFn(`${this.base}/select`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: serializeBody(body),
    });
    if (token !== this.selectToken) return { kind: "stale" };
    if (!resp.ok) return { kind: "error", error: await readError(resp) };
    return { kind: "ok", response: (await resp.json()) as SelectResponse };
  }

  async exercises(body: unknown): Promise<ExerciseResponse> {
    const resp = await this.fetchFn(`${this.base}/exercises`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      const error = await readError(resp);
      throw new Error(`exercise request rejected: ${error.errors.join("; ")}`);
    }
    return (await resp.json()) as ExerciseResponse;
  }
}
