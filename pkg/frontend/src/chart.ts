// Geometry for the joining/activity/retention trend chart.
//
// Everything here is pure string/number computation so it can be unit
// tested without a DOM; main.ts turns the model into SVG elements.

import type { TrendPoint } from "./types.js";

export interface ChartLayout {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_LAYOUT: ChartLayout = {
  width: 640,
  height: 260,
  padLeft: 42,
  padRight: 16,
  padTop: 14,
  padBottom: 34,
};

export const SERIES = ["joined", "active", "retained"] as const;
export type SeriesName = (typeof SERIES)[number];

export const SERIES_COLORS: Record<SeriesName, string> = {
  joined: "#2563eb",
  active: "#059669",
  retained: "#d97706",
};

export interface LinePath {
  series: SeriesName;
  points: string;
}

export interface Marker {
  series: SeriesName;
  x: number;
  y: number;
  value: number;
  tooltip: string;
}

export interface XTick {
  x: number;
  label: string;
}

export interface YTick {
  y: number;
  label: string;
}

export interface ChartModel {
  lines: LinePath[];
  markers: Marker[];
  xTicks: XTick[];
  yTicks: YTick[];
  maxValue: number;
  baselineY: number;
}

export function tooltipText(point: TrendPoint): string {
  return `${point.month}: joined ${point.joined}, active ${point.active}, retained ${point.retained}`;
}

export function buildChartModel(
  trends: TrendPoint[],
  layout: ChartLayout = DEFAULT_LAYOUT,
): ChartModel | null {
  if (trends.length === 0) {
    return null;
  }
  const plotWidth = layout.width - layout.padLeft - layout.padRight;
  const plotHeight = layout.height - layout.padTop - layout.padBottom;
  const baselineY = layout.padTop + plotHeight;

  // All-zero months draw as a flat line at the baseline, never as gaps.
  const observedMax = Math.max(
    ...trends.flatMap((p) => [p.joined, p.active, p.retained]),
  );
  const maxValue = Math.max(observedMax, 1);

  const xAt = (index: number): number => {
    if (trends.length === 1) {
      return layout.padLeft + plotWidth / 2;
    }
    return layout.padLeft + (plotWidth * index) / (trends.length - 1);
  };
  const yAt = (value: number): number =>
    layout.padTop + plotHeight * (1 - value / maxValue);

  const lines: LinePath[] = SERIES.map((series) => ({
    series,
    points: trends
      .map((point, index) => `${round(xAt(index))},${round(yAt(point[series]))}`)
      .join(" "),
  }));

  const markers: Marker[] = [];
  for (const series of SERIES) {
    trends.forEach((point, index) => {
      markers.push({
        series,
        x: round(xAt(index)),
        y: round(yAt(point[series])),
        value: point[series],
        tooltip: tooltipText(point),
      });
    });
  }

  const xTicks: XTick[] = trends.map((point, index) => ({
    x: round(xAt(index)),
    label: point.month,
  }));

  const step = Math.max(1, Math.ceil(maxValue / 4));
  const yTicks: YTick[] = [];
  for (let value = 0; value <= maxValue; value += step) {
    yTicks.push({ y: round(yAt(value)), label: String(value) });
  }

  return { lines, markers, xTicks, yTicks, maxValue, baselineY: round(baselineY) };
}

function round(value: number): number {
  return Math.round(value * 100) / 100;
}
