// Page boot: control wiring, data fetching, what-if retraining.

import { ApiError, fetchModels, fetchReport, fetchSummary, retrain } from "./api.js";
import { renderError, renderReport, renderSummary } from "./render.js";
import { buildViewModel } from "./viewmodel.js";

const BASE = ""; // served under /ui by the same origin

function input(id: string): HTMLInputElement {
  return document.getElementById(id) as HTMLInputElement;
}

function select(id: string): HTMLSelectElement {
  return document.getElementById(id) as HTMLSelectElement;
}

let inFlight: AbortController | null = null;

async function refresh(): Promise<void> {
  inFlight?.abort();
  inFlight = new AbortController();
  const worker = input("worker-filter").value.trim() || null;
  const date = input("date-filter").value.trim() || null;
  try {
    const payload = await fetchSummary(BASE, worker, date);
    renderError("");
    const root = document.getElementById("dashboard");
    if (root) {
      renderSummary(root, buildViewModel(payload), (sessionId) => {
        fetchReport(BASE, sessionId)
          .then((body) => renderReport(body.report))
          .catch((err) => renderError(`report failed: ${message(err)}`));
      });
    }
  } catch (err) {
    renderError(`summary failed: ${message(err)}`);
  }
}

function message(err: unknown): string {
  if (err instanceof ApiError) return `${err.message} (HTTP ${err.status})`;
  return err instanceof Error ? err.message : String(err);
}

async function runRetrain(): Promise<void> {
  const family = select("model-family").value;
  const delta = parseFloat(input("delta").value || "0.2");
  const status = document.getElementById("train-status");
  if (status) status.textContent = "training…";
  try {
    const entry = await retrain(BASE, family, delta, 0) as {
      model_id: string;
      eval: { accuracy: number; macro: { f1: number } };
    };
    if (status) {
      status.textContent =
        `${entry.model_id}: accuracy ${(entry.eval.accuracy * 100).toFixed(1)}%, ` +
        `macro-F ${(entry.eval.macro.f1 * 100).toFixed(1)}%`;
    }
    await refresh();
  } catch (err) {
    if (status) status.textContent = "";
    renderError(`train failed: ${message(err)}`);
  }
}

async function boot(): Promise<void> {
  document.getElementById("refresh")?.addEventListener("click", refresh);
  document.getElementById("retrain")?.addEventListener("click", runRetrain);
  input("worker-filter").addEventListener("change", refresh);
  input("date-filter").addEventListener("change", refresh);
  try {
    const models = await fetchModels(BASE);
    if (!models.some((m) => m.scenario === 2)) {
      renderError("no scenario-2 model registered yet; use the retrain control");
    }
  } catch (err) {
    renderError(`service unreachable: ${message(err)}`);
  }
  await refresh();
}

boot();
