/**
 * The four figure renderers.  Each consumes a parsed artifact and returns
 * a complete standalone SVG document as a string; rendering is a pure
 * function of the artifact plus style options, so repeated calls are
 * byte-identical.
 */

import {
  CsvArtifact,
  JsonArtifact,
  SchemaError,
  parseOrbit,
  parseRational,
} from "./artifacts.js";
import {
  ModularPoint,
  equalAreaProject,
  hyperbolicBoxMeasure,
  inFundamentalDomain,
  modularPoint,
} from "./geometry.js";
import { el, fmt, svgDoc, text } from "./svg.js";

export interface Style {
  width: number;
  bins: number;
}

export const DEFAULT_STYLE: Style = { width: 640, bins: 8 };

const PALETTE = ["#3a6ea5", "#b3402e", "#3f8f4e", "#8455a0"];

function requireColumns(artifact: CsvArtifact, columns: string[]): void {
  for (const column of columns) {
    if (!artifact.header.includes(column)) {
      throw new SchemaError(`artifact lacks required column ${JSON.stringify(column)}`);
    }
  }
}

function describeLevels(artifact: CsvArtifact): string {
  const levels = artifact.config.D.join(",");
  return `d=${artifact.config.d}, D=${levels}`;
}

// ---------------------------------------------------------------------------
// shape scatter in the modular fundamental domain

export interface ShapePoint extends ModularPoint {
  weight: number;
}

/** Extract (x, y, weight) per row; rejects non-ternary or non-shape inputs. */
export function shapePoints(artifact: CsvArtifact): ShapePoint[] {
  if (artifact.config.cmd !== "grids" && artifact.config.cmd !== "shapes") {
    throw new SchemaError(`expected a grids/shapes artifact, got ${artifact.config.cmd}`);
  }
  if (artifact.config.d !== 3) {
    throw new SchemaError(`fundamental-domain figure needs d=3 rows, got d=${artifact.config.d}`);
  }
  requireColumns(artifact, ["g11", "g12", "g21", "g22", "weight"]);
  return artifact.rows.map((row) => {
    const point = modularPoint(
      Number(row.g11),
      Number(row.g12),
      Number(row.g21),
      Number(row.g22),
    );
    if (!inFundamentalDomain(point)) {
      throw new SchemaError(
        `shape row outside the fundamental domain: x=${point.x}, y=${point.y}`,
      );
    }
    return { ...point, weight: Number(row.weight) };
  });
}

export function renderDomainFigure(artifact: CsvArtifact, style = DEFAULT_STYLE): string {
  const points = shapePoints(artifact);
  const width = style.width;
  const height = Math.round(width * 0.85);
  const margin = { left: 46, right: 16, top: 34, bottom: 36 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const yTop = Math.max(2.0, ...points.map((p) => p.y * 1.08));
  const xLo = -0.62;
  const xHi = 0.62;
  const yLo = 0.78;
  const sx = (x: number) => margin.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => margin.top + ((yTop - y) / (yTop - yLo)) * plotH;

  // Domain outline: walls at x = +-1/2 down to the unit circle, arc across.
  const arc: string[] = [];
  const steps = 64;
  for (let i = 0; i <= steps; i += 1) {
    const x = -0.5 + i / steps;
    const y = Math.sqrt(Math.max(0, 1 - x * x));
    arc.push(`${fmt(sx(x))},${fmt(sy(y))}`);
  }
  const outline =
    `M ${fmt(sx(-0.5))},${fmt(sy(yTop))} L ${arc[0]} L ` +
    arc.slice(1).join(" L ") +
    ` L ${fmt(sx(0.5))},${fmt(sy(yTop))}`;

  // Density shading: horizontal bands with opacity proportional to the
  // hyperbolic mass of the band, clipped to the domain.
  const bands: string[] = [];
  const nBands = 30;
  const masses: number[] = [];
  for (let i = 0; i < nBands; i += 1) {
    const y0 = yLo + ((yTop - yLo) * i) / nBands;
    const y1 = yLo + ((yTop - yLo) * (i + 1)) / nBands;
    masses.push(hyperbolicBoxMeasure(-0.5, 0.5, Math.max(y0, yLo), y1));
  }
  const maxMass = Math.max(...masses, 1e-12);
  for (let i = 0; i < nBands; i += 1) {
    const y0 = yLo + ((yTop - yLo) * i) / nBands;
    const y1 = yLo + ((yTop - yLo) * (i + 1)) / nBands;
    bands.push(
      el("rect", {
        x: sx(-0.5),
        y: sy(y1),
        width: sx(0.5) - sx(-0.5),
        height: sy(y0) - sy(y1),
        fill: "#7a9cc4",
        "fill-opacity": 0.08 + 0.5 * (masses[i] / maxMass),
        "clip-path": "url(#domainClip)",
      }),
    );
  }

  const maxWeight = Math.max(1, ...points.map((p) => p.weight));
  const dots = points.map((p) =>
    el("circle", {
      cx: sx(p.x),
      cy: sy(p.y),
      r: 2.2 + 2.0 * Math.sqrt(p.weight / maxWeight),
      fill: "#1f4e79",
      "fill-opacity": 0.85,
    }),
  );

  const axes: string[] = [];
  for (const xt of [-0.5, 0, 0.5]) {
    axes.push(
      el("line", {
        x1: sx(xt), y1: sy(yLo), x2: sx(xt), y2: sy(yLo) + 4,
        stroke: "#333", "stroke-width": 1,
      }),
      text(sx(xt), sy(yLo) + 16, String(xt), { "text-anchor": "middle" }),
    );
  }
  for (let yt = 1; yt <= yTop + 1e-9; yt += 0.5) {
    axes.push(
      el("line", {
        x1: sx(xLo) - 4, y1: sy(yt), x2: sx(xLo), y2: sy(yt),
        stroke: "#333", "stroke-width": 1,
      }),
      text(sx(xLo) - 7, sy(yt) + 4, fmt(yt), { "text-anchor": "end" }),
    );
  }

  const children = [
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    el("defs", {}, [
      el("clipPath", { id: "domainClip" }, [el("path", { d: `${outline} Z` })]),
    ]),
    ...bands,
    el("path", { d: outline, fill: "none", stroke: "#555", "stroke-width": 1.2 }),
    ...dots,
    ...axes,
    text(width / 2, 18, `lattice shapes in the modular domain (${describeLevels(artifact)})`, {
      "text-anchor": "middle",
      "font-size": 13,
    }),
    text(width / 2, height - 8, "x", { "text-anchor": "middle" }),
    text(14, margin.top + plotH / 2, "y", {}),
  ];
  return svgDoc(width, height, children);
}

// ---------------------------------------------------------------------------
// direction point cloud, equal-area projection

export interface SpherePoint {
  u: number;
  v: number;
  upper: boolean;
}

export function spherePoints(artifact: CsvArtifact): SpherePoint[] {
  if (artifact.config.cmd !== "enumerate") {
    throw new SchemaError(`expected an enumerate artifact, got ${artifact.config.cmd}`);
  }
  if (artifact.config.d !== 3) {
    throw new SchemaError(`sphere projection needs d=3, got d=${artifact.config.d}`);
  }
  requireColumns(artifact, ["x1", "x2", "x3", "D"]);
  return artifact.rows.map((row) => {
    const scale = 1 / Math.sqrt(Number(row.D));
    return equalAreaProject(
      Number(row.x1) * scale,
      Number(row.x2) * scale,
      Number(row.x3) * scale,
    );
  });
}

export function renderSphereFigure(artifact: CsvArtifact, style = DEFAULT_STYLE): string {
  const points = spherePoints(artifact);
  const width = style.width;
  const height = Math.round(width * 0.58);
  const diskR = width * 0.21;
  const centers: Array<[number, string]> = [
    [width * 0.27, "x3 >= 0"],
    [width * 0.73, "x3 < 0"],
  ];
  const cy = height * 0.52;
  const children: string[] = [el("rect", { x: 0, y: 0, width, height, fill: "white" })];

  for (const [cx, label] of centers) {
    children.push(
      el("circle", { cx, cy, r: diskR, fill: "#f5f7fa", stroke: "#555", "stroke-width": 1 }),
      text(cx, cy + diskR + 18, label, { "text-anchor": "middle" }),
    );
  }
  const unit = diskR / Math.sqrt(2);
  for (const p of points) {
    const cx = p.upper ? centers[0][0] : centers[1][0];
    children.push(
      el("circle", {
        cx: cx + p.u * unit,
        cy: cy - p.v * unit,
        r: 1.8,
        fill: "#1f4e79",
        "fill-opacity": 0.7,
      }),
    );
  }
  children.push(
    text(width / 2, 18, `sphere directions, equal-area projection (${describeLevels(artifact)})`, {
      "text-anchor": "middle",
      "font-size": 13,
    }),
  );
  return svgDoc(width, height, children);
}

// ---------------------------------------------------------------------------
// marked-point heatmap on the unit square

export interface TorusBins {
  grid: number[][];
  total: number;
}

/**
 * Weighted bin counts of the first two marked-point coordinates.  Each
 * row's orbit entries share the row weight equally, matching how the
 * producer's statistics unfold orbits.
 */
export function torusBins(artifact: CsvArtifact, bins: number): TorusBins {
  if (artifact.config.cmd !== "grids") {
    throw new SchemaError(`expected a grids artifact, got ${artifact.config.cmd}`);
  }
  requireColumns(artifact, ["t1", "t2", "t_orbit", "weight"]);
  const grid: number[][] = Array.from({ length: bins }, () => Array(bins).fill(0));
  let total = 0;
  for (const row of artifact.rows) {
    const weight = Number(row.weight);
    let entries = parseOrbit(row.t_orbit);
    if (entries.length === 0) {
      entries = [[parseRational(row.t1), parseRational(row.t2)]];
    }
    const share = weight / entries.length;
    for (const entry of entries) {
      if (entry.length < 2) {
        throw new SchemaError("orbit entry with fewer than two coordinates");
      }
      const a = ((entry[0] % 1) + 1) % 1;
      const b = ((entry[1] % 1) + 1) % 1;
      const i = Math.min(bins - 1, Math.floor(a * bins));
      const j = Math.min(bins - 1, Math.floor(b * bins));
      grid[i][j] += share;
      total += share;
    }
  }
  return { grid, total };
}

export function renderTorusHeatmap(artifact: CsvArtifact, style = DEFAULT_STYLE): string {
  const { grid, total } = torusBins(artifact, style.bins);
  const bins = style.bins;
  const width = style.width;
  const margin = { left: 50, right: 20, top: 34, bottom: 40 };
  const side = width - margin.left - margin.right;
  const height = side + margin.top + margin.bottom;
  const cell = side / bins;
  const maxVal = Math.max(...grid.map((column) => Math.max(...column)), 1e-12);

  const cells: string[] = [];
  for (let i = 0; i < bins; i += 1) {
    for (let j = 0; j < bins; j += 1) {
      cells.push(
        el("rect", {
          x: margin.left + i * cell,
          y: margin.top + side - (j + 1) * cell,
          width: cell,
          height: cell,
          fill: "#b3402e",
          "fill-opacity": grid[i][j] / maxVal,
          stroke: "#ddd",
          "stroke-width": 0.5,
        }),
      );
    }
  }
  const axes = [
    text(margin.left, margin.top + side + 16, "0", {}),
    text(margin.left + side, margin.top + side + 16, "1", { "text-anchor": "end" }),
    text(margin.left - 8, margin.top + side, "0", { "text-anchor": "end" }),
    text(margin.left - 8, margin.top + 10, "1", { "text-anchor": "end" }),
    text(margin.left + side / 2, margin.top + side + 30, "t1", { "text-anchor": "middle" }),
    text(16, margin.top + side / 2, "t2", {}),
  ];
  return svgDoc(width, height, [
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    ...cells,
    el("rect", {
      x: margin.left, y: margin.top, width: side, height: side,
      fill: "none", stroke: "#555", "stroke-width": 1,
    }),
    ...axes,
    text(width / 2, 18,
      `marked points on the torus (${describeLevels(artifact)}, total weight ${fmt(total)})`,
      { "text-anchor": "middle", "font-size": 13 }),
  ]);
}

// ---------------------------------------------------------------------------
// discrepancy trend across levels

export interface TrendSeries {
  name: string;
  color: string;
  points: Array<{ D: number; value: number }>;
}

export function trendSeries(artifact: JsonArtifact): TrendSeries[] {
  const reports = artifact.payload.reports;
  if (reports.length === 0) {
    return [];
  }
  const series: TrendSeries[] = [];
  let colorIdx = 0;
  const nextColor = () => PALETTE[colorIdx++ % PALETTE.length];

  series.push({
    name: "cap discrepancy",
    color: nextColor(),
    points: reports.map((r) => ({ D: r.D, value: r.cap_discrepancy })),
  });
  const ksAxes = Math.min(...reports.map((r) => r.torus_ks.length));
  for (let axis = 0; axis < ksAxes; axis += 1) {
    series.push({
      name: `torus KS (t${axis + 1})`,
      color: nextColor(),
      points: reports.map((r) => ({ D: r.D, value: r.torus_ks[axis] })),
    });
  }
  if (reports.every((r) => r.shape_chi2 !== null)) {
    series.push({
      name: "shape chi2 (normalized)",
      color: nextColor(),
      points: reports.map((r) => ({ D: r.D, value: r.shape_chi2 as number })),
    });
  }
  return series;
}

export function renderTrendFigure(artifact: JsonArtifact, style = DEFAULT_STYLE): string {
  const series = trendSeries(artifact);
  const width = style.width;
  const height = Math.round(width * 0.62);
  const margin = { left: 56, right: 20, top: 34, bottom: 42 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;

  const levels = series.length > 0 ? series[0].points.map((p) => p.D) : [];
  const logs = levels.map((D) => Math.log10(D));
  const xLo = Math.min(...logs, 0);
  const xHi = Math.max(...logs, 1);
  const span = xHi - xLo || 1;
  const yMax = Math.max(1e-12, ...series.flatMap((s) => s.points.map((p) => p.value))) * 1.08;
  const sx = (D: number) => margin.left + ((Math.log10(D) - xLo) / span) * plotW;
  const sy = (v: number) => margin.top + (1 - v / yMax) * plotH;

  const children: string[] = [
    el("rect", { x: 0, y: 0, width, height, fill: "white" }),
    el("rect", {
      x: margin.left, y: margin.top, width: plotW, height: plotH,
      fill: "none", stroke: "#555", "stroke-width": 1,
    }),
  ];
  for (const D of levels) {
    children.push(
      el("line", {
        x1: sx(D), y1: margin.top + plotH, x2: sx(D), y2: margin.top + plotH + 4,
        stroke: "#333", "stroke-width": 1,
      }),
      text(sx(D), margin.top + plotH + 17, String(D), { "text-anchor": "middle" }),
    );
  }
  for (let i = 0; i <= 4; i += 1) {
    const v = (yMax * i) / 4;
    children.push(
      el("line", {
        x1: margin.left - 4, y1: sy(v), x2: margin.left, y2: sy(v),
        stroke: "#333", "stroke-width": 1,
      }),
      text(margin.left - 7, sy(v) + 4, v.toPrecision(2), { "text-anchor": "end" }),
    );
  }
  series.forEach((s, idx) => {
    const coords = s.points.map((p) => `${fmt(sx(p.D))},${fmt(sy(p.value))}`);
    children.push(
      el("polyline", {
        points: coords.join(" "),
        fill: "none",
        stroke: s.color,
        "stroke-width": 1.6,
      }),
    );
    for (const p of s.points) {
      children.push(
        el("circle", { cx: sx(p.D), cy: sy(p.value), r: 3, fill: s.color }),
      );
    }
    children.push(
      el("rect", {
        x: margin.left + plotW - 170, y: margin.top + 8 + idx * 16, width: 10, height: 10,
        fill: s.color,
      }),
      text(margin.left + plotW - 155, margin.top + 17 + idx * 16, s.name, {}),
    );
  });
  const verdict = String(artifact.payload.trend.verdict);
  children.push(
    text(width / 2, 18, "equidistribution statistics by level", {
      "text-anchor": "middle",
      "font-size": 13,
    }),
    text(margin.left, height - 8, `trend verdict: ${verdict}`, {}),
    text(width / 2, height - 8, "D (log scale)", { "text-anchor": "middle" }),
  );
  return svgDoc(width, height, children);
}
