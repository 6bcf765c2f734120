/**
 * Thin client for the solver service. Every number the UI shows comes out
 * of these responses untouched.
 */

import type { RunConfig } from "./schema.js";

export interface DegreeRecord {
  degree: number;
  status: string;
  gamma: number | null;
  lambda: number | null;
  c: number | null;
  confidence: number | null;
  wall_time: number;
  detail: string;
}

export interface LevelSetPlot {
  xs: number[];
  ys: number[];
  values: number[][];
  gamma: number | null;
  lambda: number | null;
}

export interface RunResult {
  status: string;
  mode: string | null;
  name: string | null;
  barrier: { dim: number; variables: string[]; text: string; terms: unknown[] } | null;
  gamma: number | null;
  lambda: number | null;
  c: number | null;
  confidence: number | null;
  degree: number | null;
  policy: string | null;
  per_degree: DegreeRecord[];
  validation: { ok: boolean; clauses: unknown[] } | null;
  timings: Record<string, number>;
  error: string | null;
  plot: LevelSetPlot | null;
  tool_version: string;
}

export interface FieldDetail {
  loc: (string | number)[];
  msg: string;
  type?: string;
}

export type SolveResponse =
  | { kind: "result"; result: RunResult }
  | { kind: "invalid"; detail: FieldDetail[] }       // 422
  | { kind: "timeout"; message: string }             // 408
  | { kind: "busy"; message: string }                // 409
  | { kind: "accepted"; jobId: string }              // 202 (async)
  | { kind: "error"; message: string };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async solve(config: RunConfig, wait: "sync" | "async" = "sync"): Promise<SolveResponse> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/api/v1/solve?wait=${wait}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(config),
      });
    } catch (error) {
      return { kind: "error", message: `service unreachable: ${String(error)}` };
    }
    if (response.status === 200) {
      return { kind: "result", result: (await response.json()) as RunResult };
    }
    if (response.status === 202) {
      const body = (await response.json()) as { job_id: string };
      return { kind: "accepted", jobId: body.job_id };
    }
    if (response.status === 422) {
      const body = (await response.json()) as { detail: FieldDetail[] };
      return { kind: "invalid", detail: body.detail ?? [] };
    }
    if (response.status === 408) {
      const body = await response.json().catch(() => ({ detail: "job timed out" }));
      return { kind: "timeout", message: String((body as { detail?: string }).detail ?? "job timed out") };
    }
    if (response.status === 409) {
      const body = await response.json().catch(() => ({ detail: "job capacity exceeded" }));
      return { kind: "busy", message: String((body as { detail?: string }).detail ?? "busy") };
    }
    return { kind: "error", message: `unexpected status ${response.status}` };
  }

  async jobStatus(jobId: string): Promise<{ status: string; result?: RunResult }> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/jobs/${jobId}`);
    if (!response.ok) throw new Error(`job poll failed: ${response.status}`);
    return (await response.json()) as { status: string; result?: RunResult };
  }

  async cancelJob(jobId: string): Promise<void> {
    await this.fetchImpl(`${this.baseUrl}/api/v1/jobs/${jobId}`, { method: "DELETE" });
  }

  async listExamples(): Promise<{ name: string; mode: string; description: string }[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/examples`);
    if (!response.ok) throw new Error(`examples listing failed: ${response.status}`);
    const body = (await response.json()) as { examples: { name: string; mode: string; description: string }[] };
    return body.examples;
  }

  async exampleText(name: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/examples/${name}`);
    if (!response.ok) throw new Error(`no example ${name}`);
    return await response.text();
  }
}
