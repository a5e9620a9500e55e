// Pure mapping from the /dashboard/summary payload to the view model.

import { ratioColor, statusColor } from "./colors.js";
import type { BoxView, DashboardViewModel, SummaryPayload } from "./types.js";

const KPI_LABELS: Record<string, string> = {
  n_inc: "Incidences",
  n_inv: "Invalid pieces",
  n_val: "Valid pieces",
  n_task: "Tasks",
  t_val: "Time between valid (s)",
  t_total: "Session time (s)",
};

const FEATURE_LABELS: Record<string, string> = {
  "f09": "Pieces to buffer",
  "f03(avg)": "Output delay avg (s)",
};

function round2(x: number): string {
  return (Math.round(x * 100) / 100).toString();
}

export function buildViewModel(payload: SummaryPayload): DashboardViewModel {
  const times = payload.timeline.map((p) => p.start_time);
  const t0 = Math.min(...times);
  const t1 = Math.max(...times);
  const span = t1 > t0 ? t1 - t0 : 1;

  const timeline = payload.timeline.map((p) => ({
    sessionId: p.session_id,
    workerId: p.worker_id,
    label: p.predicted,
    confidencePct: Math.round(p.confidence * 100),
    x: (p.start_time - t0) / span,
    y: p.predicted === "expert" ? 1 : 0,
  }));

  const kpiBoxes: BoxView[] = (payload.kpi_boxes ?? []).map((box) => ({
    label: KPI_LABELS[box.kpi] ?? box.kpi,
    value: round2(box.value),
    color: statusColor(box.status),
  }));

  const featureBoxes: BoxView[] = Object.entries(payload.feature_boxes).map(
    ([name, value]) => ({
      label: FEATURE_LABELS[name] ?? name,
      value: round2(value),
      color: "blue",
    }),
  );

  let ratioBox: BoxView | null = null;
  if (payload.valid_ratio) {
    const pct = payload.valid_ratio.ratio * 100;
    ratioBox = {
      label: "Valid piece ratio",
      value: `${round2(pct)}%`,
      color: ratioColor(payload.valid_ratio.ratio),
    };
  }

  return {
    modelId: payload.model_id,
    worker: payload.worker,
    date: payload.date,
    timeline,
    kpiBoxes,
    featureBoxes,
    ratioBox,
  };
}
