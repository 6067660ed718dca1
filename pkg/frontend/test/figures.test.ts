import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";
import { parseCsvArtifact, parseReportArtifact, SchemaError } from "../src/artifacts";
import { inFundamentalDomain } from "../src/geometry";
import {
  renderDomainFigure,
  renderSphereFigure,
  renderTorusHeatmap,
  renderTrendFigure,
  shapePoints,
  spherePoints,
  torusBins,
  trendSeries,
} from "../src/figures";

const fixture = (name: string): string =>
  readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");

const csv = (name: string) => parseCsvArtifact(fixture(name));

const countMatches = (text: string, pattern: RegExp): number =>
  (text.match(pattern) ?? []).length;

describe("fundamental-domain figure", () => {
  it("maps the hexagonal shape to (1/2, sqrt(3)/2)", () => {
    const points = shapePoints(csv("hexagonal.grids.csv"));
    expect(points).toHaveLength(1);
    expect(points[0].x).toBeCloseTo(0.5, 12);
    expect(points[0].y).toBeCloseTo(Math.sqrt(3) / 2, 12);
  });

  it("conserves row count and stays inside the closed domain", () => {
    const artifact = csv("large.grids.csv");
    const points = shapePoints(artifact);
    expect(points).toHaveLength(artifact.rows.length);
    for (const p of points) {
      expect(inFundamentalDomain(p)).toBe(true);
    }
    const svg = renderDomainFigure(artifact);
    expect(countMatches(svg, /<circle /g)).toBe(artifact.rows.length);
  });

  it("renders empty axes for a header-only artifact", () => {
    const svg = renderDomainFigure(csv("empty.grids.csv"));
    expect(svg.startsWith("<svg")).toBe(true);
    expect(countMatches(svg, /<circle /g)).toBe(0);
    expect(svg).toContain("<path");
  });

  it("rejects non-ternary input", () => {
    expect(() => shapePoints(csv("quaternary.grids.csv"))).toThrow(SchemaError);
    expect(() => shapePoints(csv("directions.enumerate.csv"))).toThrow(SchemaError);
  });

  it("is deterministic", () => {
    const artifact = csv("medium.grids.csv");
    expect(renderDomainFigure(artifact)).toBe(renderDomainFigure(artifact));
  });
});

describe("sphere projection figure", () => {
  it("projects every row into a disk of radius sqrt(2)", () => {
    const artifact = csv("directions.enumerate.csv");
    const points = spherePoints(artifact);
    expect(points).toHaveLength(artifact.rows.length);
    for (const p of points) {
      expect(Math.hypot(p.u, p.v)).toBeLessThanOrEqual(Math.sqrt(2) + 1e-9);
    }
  });

  it("draws one marker per direction plus two hemisphere disks", () => {
    const artifact = csv("directions.enumerate.csv");
    const svg = renderSphereFigure(artifact);
    expect(countMatches(svg, /<circle /g)).toBe(artifact.rows.length + 2);
  });

  it("rejects grids input", () => {
    expect(() => spherePoints(csv("medium.grids.csv"))).toThrow(SchemaError);
  });
});

describe("torus heatmap", () => {
  it("concentrates a single-point fixture in one hot bin", () => {
    const { grid, total } = torusBins(csv("point.grids.csv"), 8);
    expect(total).toBeCloseTo(937, 9);
    const flat = grid.flat();
    expect(Math.max(...flat)).toBeCloseTo(937, 9);
    expect(flat.filter((v) => v > 0)).toHaveLength(1);
  });

  it("keeps a stratified-uniform fixture flat within 4 sigma", () => {
    const bins = 8;
    const { grid, total } = torusBins(csv("uniform.grids.csv"), bins);
    expect(total).toBeCloseTo(4096, 6);
    const mean = total / (bins * bins);
    const sigma = Math.sqrt(total * (1 / (bins * bins)) * (1 - 1 / (bins * bins)));
    for (const value of grid.flat()) {
      expect(Math.abs(value - mean)).toBeLessThanOrEqual(4 * sigma);
    }
  });

  it("unfolds orbit entries with equal shares for d=4 input", () => {
    const artifact = csv("quaternary.grids.csv");
    const weightSum = artifact.rows.reduce((acc, row) => acc + Number(row.weight), 0);
    const { total } = torusBins(artifact, 8);
    expect(total).toBeCloseTo(weightSum, 9);
  });

  it("renders bins^2 cells and is deterministic", () => {
    const artifact = csv("uniform.grids.csv");
    const svg = renderTorusHeatmap(artifact, { width: 640, bins: 12 });
    expect(countMatches(svg, /<rect /g)).toBeGreaterThanOrEqual(144);
    expect(svg).toBe(renderTorusHeatmap(artifact, { width: 640, bins: 12 }));
  });
});

describe("trend figure", () => {
  it("extracts one series per statistic with one point per level", () => {
    const artifact = parseReportArtifact(fixture("trend.report.json"));
    const series = trendSeries(artifact);
    const names = series.map((s) => s.name);
    expect(names).toContain("cap discrepancy");
    expect(names).toContain("torus KS (t1)");
    for (const s of series) {
      expect(s.points).toHaveLength(3);
    }
    const cap = series[0].points.map((p) => p.value);
    expect(cap[0]).toBeGreaterThan(cap[cap.length - 1]);
  });

  it("draws a downward line with one marker per level", () => {
    const artifact = parseReportArtifact(fixture("trend.report.json"));
    const series = trendSeries(artifact);
    const svg = renderTrendFigure(artifact);
    expect(countMatches(svg, /<circle /g)).toBe(
      series.reduce((acc, s) => acc + s.points.length, 0),
    );
    // the first series' markers: decreasing data means increasing SVG y
    const capColor = series[0].color;
    const marker = new RegExp(`<circle cx="([0-9.]+)" cy="([0-9.]+)" r="3" fill="${capColor}"`, "g");
    const ys = [...svg.matchAll(marker)].map((m) => Number(m[2]));
    expect(ys).toHaveLength(3);
    expect(ys[ys.length - 1]).toBeGreaterThan(ys[0]);
  });
});
