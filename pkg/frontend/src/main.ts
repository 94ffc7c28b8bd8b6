// DOM wiring for the dashboard. Rendering is rebuilt from AppState;
// all numbers come straight from API payloads.

import { api, ApiError } from "./api.js";
import {
  buildChartModel,
  SERIES,
  SERIES_COLORS,
  type ChartModel,
} from "./chart.js";
import {
  badgeRecommendationFor,
  describeRecommendation,
  filterByState,
  optimisticApply,
  pendingCount,
  reconcile,
  rollback,
  STATE_FILTERS,
  type StateFilter,
} from "./state.js";
import type {
  Project,
  Recommendation,
  RecommendationAction,
  RisingContributor,
  TrendPoint,
} from "./types.js";

const COLLAPSED_CARD_COUNT = 3;

interface AppState {
  projects: Project[];
  selected: string | null;
  trends: TrendPoint[];
  rising: RisingContributor[];
  recommendations: Recommendation[];
  filter: StateFilter;
  includeMembers: boolean;
  expanded: boolean;
  busy: Set<string>;
  error: string | null;
}

const state: AppState = {
  projects: [],
  selected: null,
  trends: [],
  rising: [],
  recommendations: [],
  filter: "pending",
  includeMembers: false,
  expanded: false,
  busy: new Set(),
  error: null,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function region(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing region #${id}`);
  return node;
}

// -- data loading ------------------------------------------------------------

async function init(): Promise<void> {
  try {
    state.projects = await api.projects();
  } catch (error) {
    showError(error);
    return;
  }
  const first = state.projects[0];
  if (first) {
    await selectProject(first.slug);
  } else {
    renderAll();
  }
}

async function selectProject(slug: string): Promise<void> {
  state.selected = slug;
  state.expanded = false;
  await refresh();
}

async function refresh(): Promise<void> {
  if (!state.selected) return;
  try {
    const [trends, rising, recommendations] = await Promise.all([
      api.trends(state.selected),
      api.rising(state.selected, state.includeMembers),
      api.recommendations(state.selected),
    ]);
    state.trends = trends;
    state.rising = rising;
    state.recommendations = recommendations;
    state.error = null;
  } catch (error) {
    showError(error);
  }
  renderAll();
}

async function runAction(
  rec: Recommendation,
  action: RecommendationAction,
  until: string | null = null,
): Promise<void> {
  if (state.busy.has(rec.id)) return;
  const { next, previous } = optimisticApply(state.recommendations, rec.id, action, until);
  if (!previous) return;
  state.recommendations = next;
  state.busy.add(rec.id);
  renderAll();
  try {
    const confirmed = await api.act(rec.id, action, until);
    state.recommendations = reconcile(state.recommendations, confirmed);
    state.error = null;
  } catch (error) {
    state.recommendations = rollback(state.recommendations, previous);
    showError(error);
  } finally {
    state.busy.delete(rec.id);
    renderAll();
  }
}

function showError(error: unknown): void {
  if (error instanceof ApiError) {
    state.error = `${error.code}: ${error.message}`;
  } else {
    state.error = String(error);
  }
}

// -- rendering ---------------------------------------------------------------

function renderAll(): void {
  renderNav();
  renderErrorBanner();
  renderTrends();
  renderRising();
  renderRecommendations();
}

function renderNav(): void {
  const nav = region("project-nav");
  nav.replaceChildren();
  if (state.projects.length === 0) {
    nav.append(el("span", "nav-empty", "no projects ingested yet"));
    return;
  }
  for (const project of state.projects) {
    const button = el("button", "nav-project", project.slug);
    if (project.slug === state.selected) button.classList.add("selected");
    button.addEventListener("click", () => void selectProject(project.slug));
    nav.append(button);
  }
}

function renderErrorBanner(): void {
  const banner = region("error-banner");
  banner.hidden = state.error === null;
  banner.textContent = state.error ?? "";
}

function renderTrends(): void {
  const host = region("trends-chart");
  host.replaceChildren();
  const model = buildChartModel(state.trends);
  if (!model) {
    host.append(el("p", "placeholder", "no newcomer activity"));
    return;
  }
  host.append(buildSvg(model));
  const legend = el("div", "legend");
  for (const series of SERIES) {
    const item = el("span", "legend-item", series);
    item.style.setProperty("--series-color", SERIES_COLORS[series]);
    legend.append(item);
  }
  host.append(legend);
}

function buildSvg(model: ChartModel): SVGSVGElement {
  const NS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(NS, "svg");
  svg.setAttribute("viewBox", "0 0 640 260");
  svg.setAttribute("class", "trend-chart");

  for (const tick of model.yTicks) {
    const grid = document.createElementNS(NS, "line");
    grid.setAttribute("x1", "42");
    grid.setAttribute("x2", "624");
    grid.setAttribute("y1", String(tick.y));
    grid.setAttribute("y2", String(tick.y));
    grid.setAttribute("class", "gridline");
    svg.append(grid);
    const label = document.createElementNS(NS, "text");
    label.setAttribute("x", "36");
    label.setAttribute("y", String(tick.y + 4));
    label.setAttribute("class", "tick-label y-tick");
    label.textContent = tick.label;
    svg.append(label);
  }

  for (const tick of model.xTicks) {
    const label = document.createElementNS(NS, "text");
    label.setAttribute("x", String(tick.x));
    label.setAttribute("y", String(model.baselineY + 18));
    label.setAttribute("class", "tick-label x-tick");
    label.textContent = tick.label;
    svg.append(label);
  }

  for (const line of model.lines) {
    const polyline = document.createElementNS(NS, "polyline");
    polyline.setAttribute("points", line.points);
    polyline.setAttribute("fill", "none");
    polyline.setAttribute("stroke", SERIES_COLORS[line.series]);
    polyline.setAttribute("stroke-width", "2");
    svg.append(polyline);
  }

  for (const marker of model.markers) {
    const circle = document.createElementNS(NS, "circle");
    circle.setAttribute("cx", String(marker.x));
    circle.setAttribute("cy", String(marker.y));
    circle.setAttribute("r", "3.5");
    circle.setAttribute("fill", SERIES_COLORS[marker.series]);
    const tooltip = document.createElementNS(NS, "title");
    tooltip.textContent = marker.tooltip;
    circle.append(tooltip);
    svg.append(circle);
  }
  return svg;
}

function renderRising(): void {
  const host = region("rising-cards");
  const controls = region("rising-controls");
  host.replaceChildren();
  controls.replaceChildren();

  const toggleLabel = el("label", "member-toggle");
  const checkbox = el("input");
  checkbox.type = "checkbox";
  checkbox.checked = state.includeMembers;
  checkbox.addEventListener("change", () => {
    state.includeMembers = checkbox.checked;
    void refresh();
  });
  toggleLabel.append(checkbox, document.createTextNode(" include team members"));
  controls.append(toggleLabel);

  if (state.rising.length === 0) {
    host.append(
      el(
        "p",
        "placeholder",
        "no rising contributors yet; newcomers active in 3 of the last 6 months will appear here",
      ),
    );
    return;
  }

  const visible = state.expanded
    ? state.rising
    : state.rising.slice(0, COLLAPSED_CARD_COUNT);
  for (const contributor of visible) {
    host.append(risingCard(contributor));
  }
  if (state.rising.length > COLLAPSED_CARD_COUNT) {
    const toggle = el(
      "button",
      "expand-toggle",
      state.expanded ? "collapse" : `show all ${state.rising.length}`,
    );
    toggle.addEventListener("click", () => {
      state.expanded = !state.expanded;
      renderAll();
    });
    host.append(toggle);
  }
}

function risingCard(contributor: RisingContributor): HTMLElement {
  const card = el("article", "card rising-card");
  card.append(el("h3", "card-title", contributor.login));
  card.append(
    el(
      "p",
      "active-months",
      `${contributor.active_months.length} active months: ${contributor.active_months.join(", ")}`,
    ),
  );
  const totals = contributor.totals;
  const list = el("ul", "totals");
  list.append(el("li", "", `commits: ${totals.commits}`));
  list.append(el("li", "", `issues opened: ${totals.issues}`));
  list.append(el("li", "", `pull requests: ${totals.prs}`));
  card.append(list);

  const badgeRec = badgeRecommendationFor(state.recommendations, contributor);
  const button = el("button", "award", "award badge");
  if (badgeRec) {
    button.addEventListener("click", () => void runAction(badgeRec, "accept"));
    button.disabled = state.busy.has(badgeRec.id);
  } else {
    button.disabled = true;
    button.title = "no pending badge recommendation for this contributor";
  }
  card.append(button);
  return card;
}

function renderRecommendations(): void {
  const host = region("rec-cards");
  const controls = region("rec-controls");
  host.replaceChildren();
  controls.replaceChildren();

  const label = el("label", "filter-label", "state: ");
  const select = el("select");
  for (const filter of STATE_FILTERS) {
    const option = el("option", "", filter);
    option.value = filter;
    if (filter === state.filter) option.selected = true;
    select.append(option);
  }
  select.addEventListener("change", () => {
    state.filter = select.value as StateFilter;
    renderAll();
  });
  label.append(select);
  controls.append(label);
  controls.append(
    el("span", "pending-count", `${pendingCount(state.recommendations)} pending`),
  );

  const visible = filterByState(state.recommendations, state.filter);
  if (visible.length === 0) {
    host.append(el("p", "placeholder", "nothing here"));
    return;
  }
  for (const rec of visible) {
    host.append(recommendationCard(rec));
  }
}

function recommendationCard(rec: Recommendation): HTMLElement {
  const card = el("article", `card rec-card state-${rec.state}`);
  card.append(el("h3", "card-title", describeRecommendation(rec)));
  card.append(el("p", "rec-meta", `${rec.kind} | state: ${rec.state}`));
  if (rec.snooze_until) {
    card.append(el("p", "rec-meta", `snoozed until ${rec.snooze_until}`));
  }
  const rationale = el("details");
  rationale.append(el("summary", "", "why this is suggested"));
  const pre = el("pre", "rationale");
  pre.textContent = JSON.stringify(rec.rationale, null, 2);
  rationale.append(pre);
  card.append(rationale);

  if (rec.state === "pending") {
    const actions = el("div", "actions");
    for (const [label, action] of [
      ["accept", "accept"],
      ["dismiss", "dismiss"],
      ["remind me later", "snooze"],
    ] as const) {
      const button = el("button", `action-${action}`, label);
      button.disabled = state.busy.has(rec.id);
      button.addEventListener("click", () => void runAction(rec, action));
      actions.append(button);
    }
    card.append(actions);
  }
  return card;
}

void init();
