// Typed fetch wrappers for the service routes the dashboard consumes.

import type { ModelSummary, SummaryPayload } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function getJson<T>(url: string): Promise<T> {
  const response = await fetch(url);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      detail = body.message ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as T;
}

export function fetchSummary(base: string, worker: string | null,
                             date: string | null): Promise<SummaryPayload> {
  const params = new URLSearchParams();
  if (worker) params.set("worker", worker);
  if (date) params.set("date", date);
  const qs = params.toString();
  return getJson(`${base}/dashboard/summary${qs ? "?" + qs : ""}`);
}

export function fetchReport(base: string, sessionId: string):
    Promise<{ report: string }> {
  return getJson(`${base}/reports/${encodeURIComponent(sessionId)}`);
}

export function fetchModels(base: string): Promise<ModelSummary[]> {
  return getJson(`${base}/models`);
}

export async function retrain(base: string, family: string, delta: number,
                              seed: number): Promise<Record<string, unknown>> {
  const response = await fetch(`${base}/train`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({
      scenario: 2,
      delta,
      model: { family, seed, hyperparams: {} },
    }),
  });
  if (!response.ok) {
    const body = await response.json().catch(() => ({ message: response.statusText }));
    throw new ApiError(String(body.message ?? response.statusText), response.status);
  }
  return (await response.json()) as Record<string, unknown>;
}
