// Payload shapes of the service API and the dashboard's view model.

export type Status = "over" | "under" | "neutral";

export interface TimelinePoint {
  session_id: string;
  worker_id: string;
  start_time: number;
  predicted: "expert" | "inexpert";
  confidence: number;
}

export interface KpiBox {
  kpi: string;
  value: number;
  status: Status;
  status_intra: Status;
  status_inter: Status;
}

export interface SummaryPayload {
  model_id: string;
  worker: string | null;
  date: string | null;
  timeline: TimelinePoint[];
  kpi_boxes: KpiBox[] | null;
  feature_boxes: Record<string, number>;
  valid_ratio: { ratio: number; green: boolean } | null;
}

export interface ModelSummary {
  model_id: string;
  scenario: number;
  accuracy: number | null;
  features: string[];
  created_at: string;
}

export interface BoxView {
  label: string;
  value: string;
  color: string;
}

export interface TimelinePointView {
  sessionId: string;
  workerId: string;
  label: "expert" | "inexpert";
  confidencePct: number;
  x: number; // 0..1 position along the time axis
  y: number; // 1 for expert row, 0 for inexpert row
}

/** Everything the page renders; a pure function of the fetched payload. */
export interface DashboardViewModel {
  modelId: string;
  worker: string | null;
  date: string | null;
  timeline: TimelinePointView[];
  kpiBoxes: BoxView[];
  featureBoxes: BoxView[];
  ratioBox: BoxView | null;
}
