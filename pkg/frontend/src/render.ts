/**
 * Result view models. The UI performs no mathematics: every number in a
 * view model is copied verbatim from the service response.
 */

import type { FieldDetail, RunResult, SolveResponse } from "./api.js";

export interface ResultView {
  kind: "result";
  status: string;
  feasible: boolean;
  barrierText: string | null;
  gamma: number | null;
  lambda: number | null;
  c: number | null;
  confidence: number | null;
  degree: number | null;
  policy: string | null;
  totalWall: number | null;
  perDegree: { degree: number; status: string; confidence: number | null; wall: number }[];
  validationOk: boolean | null;
  hasPlot: boolean;
  suggestion: string | null;
}

export interface BannerView {
  kind: "banner";
  level: "error" | "warning";
  message: string;
}

export interface FieldErrorView {
  kind: "field-errors";
  errors: Record<string, string>;
}

export type SubmitView = ResultView | BannerView | FieldErrorView;

export function resultView(result: RunResult): ResultView {
  const feasible = result.status === "feasible";
  let suggestion: string | null = null;
  if (result.status === "infeasible") {
    suggestion = "No certificate at the attempted degrees. Try a higher "
      + "barrier degree or, for stochastic classes, the minimum-confidence "
      + "mode instead of a pinned lambda.";
  }
  return {
    kind: "result",
    status: result.status,
    feasible,
    barrierText: result.barrier ? result.barrier.text : null,
    gamma: result.gamma,
    lambda: result.lambda,
    c: result.c,
    confidence: result.confidence,
    degree: result.degree,
    policy: result.policy,
    totalWall: result.timings ? result.timings.total_wall ?? null : null,
    perDegree: (result.per_degree ?? []).map((record) => ({
      degree: record.degree,
      status: record.status,
      confidence: record.confidence,
      wall: record.wall_time,
    })),
    validationOk: result.validation ? result.validation.ok : null,
    hasPlot: result.plot !== null && result.plot !== undefined,
    suggestion,
  };
}

function fieldOf(detail: FieldDetail): string {
  const parts = detail.loc.filter((part) => part !== "body");
  return parts.join(".") || "<document>";
}

/** Turn a solve response into what the page should show. */
export function submitView(response: SolveResponse): SubmitView {
  switch (response.kind) {
    case "result":
      return resultView(response.result);
    case "invalid": {
      const errors: Record<string, string> = {};
      for (const detail of response.detail) {
        const field = fieldOf(detail);
        if (!(field in errors)) errors[field] = detail.msg;
      }
      return { kind: "field-errors", errors };
    }
    case "timeout":
      return { kind: "banner", level: "error", message: response.message };
    case "busy":
      return { kind: "banner", level: "warning", message: response.message };
    case "accepted":
      return { kind: "banner", level: "warning",
               message: `job ${response.jobId} accepted; polling...` };
    case "error":
      return { kind: "banner", level: "error", message: response.message };
  }
}
