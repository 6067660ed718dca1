export {
  SchemaError,
  parseCsvArtifact,
  parseOrbit,
  parseRational,
  parseReportArtifact,
} from "./artifacts.js";
export type { CsvArtifact, JsonArtifact, ReportPayload, RunConfig } from "./artifacts.js";
export {
  equalAreaProject,
  hyperbolicBoxMeasure,
  inFundamentalDomain,
  modularPoint,
} from "./geometry.js";
export type { ModularPoint, ProjectedPoint } from "./geometry.js";
export {
  DEFAULT_STYLE,
  renderDomainFigure,
  renderSphereFigure,
  renderTorusHeatmap,
  renderTrendFigure,
  shapePoints,
  spherePoints,
  torusBins,
  trendSeries,
} from "./figures.js";
export type { ShapePoint, SpherePoint, Style, TorusBins, TrendSeries } from "./figures.js";
export { KINDS, main, renderFile } from "./cli.js";
export type { Kind } from "./cli.js";
