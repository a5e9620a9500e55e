// DOM rendering of the view model. Layout follows the dashboard mock:
// timeline top-left, KPI boxes top-right, feature + ratio boxes at the
// bottom, report panel below the timeline.

import type { BoxView, DashboardViewModel } from "./types.js";

const COLOR_STYLES: Record<string, string> = {
  green: "#2e9e4f",
  red: "#c43b3b",
  blue: "#3b6ec4",
};

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderBox(box: BoxView): HTMLElement {
  const node = el("div", `box box-${box.color}`);
  node.style.background = COLOR_STYLES[box.color] ?? COLOR_STYLES.blue;
  node.appendChild(el("div", "box-label", box.label));
  node.appendChild(el("div", "box-value", box.value));
  return node;
}

export function renderSummary(
  root: HTMLElement,
  vm: DashboardViewModel,
  onPoint: (sessionId: string) => void,
): void {
  root.textContent = "";

  const timelinePanel = el("section", "panel timeline-panel");
  timelinePanel.appendChild(el("h2", undefined, "Classification timeline"));
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", "0 0 100 30");
  svg.classList.add("timeline");
  for (const [y, name] of [[7, "expert"], [23, "inexpert"]] as const) {
    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", "1");
    label.setAttribute("y", String(y - 2.5));
    label.classList.add("row-label");
    label.textContent = name;
    svg.appendChild(label);
  }
  for (const point of vm.timeline) {
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(4 + point.x * 92));
    circle.setAttribute("cy", point.label === "expert" ? "7" : "23");
    circle.setAttribute("r", "1.6");
    circle.classList.add("timeline-point", `point-${point.label}`);
    circle.setAttribute("data-session", point.sessionId);
    const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
    title.textContent =
      `${point.sessionId} (${point.workerId}): ${point.label} ${point.confidencePct}%`;
    circle.appendChild(title);
    circle.addEventListener("click", () => onPoint(point.sessionId));
    svg.appendChild(circle);
  }
  timelinePanel.appendChild(svg);

  const kpiPanel = el("section", "panel kpi-panel");
  kpiPanel.appendChild(el("h2", undefined,
    vm.worker ? `KPIs: ${vm.worker} ${vm.date ?? ""}` : "KPIs (pick a worker)"));
  const kpiGrid = el("div", "box-grid");
  for (const box of vm.kpiBoxes) kpiGrid.appendChild(renderBox(box));
  kpiPanel.appendChild(kpiGrid);

  const bottomPanel = el("section", "panel bottom-panel");
  const featureGrid = el("div", "box-grid");
  for (const box of vm.featureBoxes) featureGrid.appendChild(renderBox(box));
  if (vm.ratioBox) featureGrid.appendChild(renderBox(vm.ratioBox));
  bottomPanel.appendChild(featureGrid);

  const reportPanel = el("section", "panel report-panel");
  reportPanel.appendChild(el("h2", undefined, "Session report"));
  const pre = el("pre", "report-text", "Click a timeline point to load its report.");
  pre.id = "report";
  reportPanel.appendChild(pre);

  root.appendChild(timelinePanel);
  root.appendChild(kpiPanel);
  root.appendChild(bottomPanel);
  root.appendChild(reportPanel);
}

export function renderReport(text: string): void {
  const pre = document.getElementById("report");
  if (pre) pre.textContent = text;
}

export function renderError(message: string): void {
  const banner = document.getElementById("error-banner");
  if (!banner) return;
  banner.textContent = message;
  banner.style.display = message ? "block" : "none";
}
