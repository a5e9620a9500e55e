// Single source of truth for box coloring across the dashboard.

import type { Status } from "./types.js";

export const STATUS_COLORS: Record<Status, string> = {
  over: "green",
  under: "red",
  neutral: "blue",
};

export function statusColor(status: Status): string {
  return STATUS_COLORS[status];
}

// "exceeds 66.67%", strictly
export const VALID_RATIO_THRESHOLD = 0.6667;

export function ratioGreen(ratio: number): boolean {
  return ratio > VALID_RATIO_THRESHOLD;
}

export function ratioColor(ratio: number): string {
  return ratioGreen(ratio) ? "green" : "red";
}
