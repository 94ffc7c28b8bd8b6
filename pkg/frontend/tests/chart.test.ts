import { describe, expect, it } from "vitest";

import {
  buildChartModel,
  DEFAULT_LAYOUT,
  SERIES,
  tooltipText,
} from "../src/chart.js";
import type { TrendPoint } from "../src/types.js";

const SIX_MONTHS: TrendPoint[] = [
  { month: "2021-01", joined: 2, active: 2, retained: 2 },
  { month: "2021-02", joined: 1, active: 2, retained: 1 },
  { month: "2021-03", joined: 0, active: 2, retained: 0 },
  { month: "2021-04", joined: 1, active: 1, retained: 0 },
  { month: "2021-05", joined: 0, active: 1, retained: 0 },
  { month: "2021-06", joined: 0, active: 1, retained: 0 },
];

describe("buildChartModel", () => {
  it("returns null for an empty series so the view can show a placeholder", () => {
    expect(buildChartModel([])).toBeNull();
  });

  it("renders one x tick per month for a six-point series", () => {
    const model = buildChartModel(SIX_MONTHS);
    expect(model).not.toBeNull();
    expect(model!.xTicks).toHaveLength(6);
    expect(model!.xTicks.map((t) => t.label)).toEqual(SIX_MONTHS.map((p) => p.month));
  });

  it("draws all three labeled series", () => {
    const model = buildChartModel(SIX_MONTHS)!;
    expect(model.lines.map((l) => l.series)).toEqual([...SERIES]);
    for (const line of model.lines) {
      expect(line.points.split(" ")).toHaveLength(6);
    }
  });

  it("keeps every point inside the plot area", () => {
    const model = buildChartModel(SIX_MONTHS)!;
    for (const marker of model.markers) {
      expect(marker.x).toBeGreaterThanOrEqual(DEFAULT_LAYOUT.padLeft);
      expect(marker.x).toBeLessThanOrEqual(DEFAULT_LAYOUT.width - DEFAULT_LAYOUT.padRight);
      expect(marker.y).toBeGreaterThanOrEqual(DEFAULT_LAYOUT.padTop);
      expect(marker.y).toBeLessThanOrEqual(model.baselineY);
    }
  });

  it("renders an all-zero series as flat lines on the baseline, not gaps", () => {
    const zeros = SIX_MONTHS.map((p) => ({ ...p, joined: 0, active: 0, retained: 0 }));
    const model = buildChartModel(zeros)!;
    for (const marker of model.markers) {
      expect(marker.y).toBe(model.baselineY);
    }
    for (const line of model.lines) {
      expect(line.points.split(" ")).toHaveLength(6);
    }
  });

  it("zero months sit on the baseline while peaks sit at the top", () => {
    const model = buildChartModel(SIX_MONTHS)!;
    const joined = model.markers.filter((m) => m.series === "joined");
    expect(joined[2]!.y).toBe(model.baselineY); // 2021-03 joined 0
    expect(joined[0]!.y).toBe(DEFAULT_LAYOUT.padTop); // 2021-01 joined 2 == max
  });

  it("centers a single-point series", () => {
    const model = buildChartModel([SIX_MONTHS[0]!])!;
    expect(model.xTicks).toHaveLength(1);
    const plotWidth =
      DEFAULT_LAYOUT.width - DEFAULT_LAYOUT.padLeft - DEFAULT_LAYOUT.padRight;
    expect(model.xTicks[0]!.x).toBe(DEFAULT_LAYOUT.padLeft + plotWidth / 2);
  });
});

describe("tooltipText", () => {
  it("echoes the API values verbatim", () => {
    const point = SIX_MONTHS[1]!;
    expect(tooltipText(point)).toBe("2021-02: joined 1, active 2, retained 1");
  });

  it("is attached to every marker", () => {
    const model = buildChartModel(SIX_MONTHS)!;
    for (const marker of model.markers) {
      const source = SIX_MONTHS.find((p) => marker.tooltip.startsWith(p.month))!;
      expect(marker.tooltip).toBe(tooltipText(source));
    }
  });
});
