#!/usr/bin/env node
/**
 * Render an SVG figure from an orthogrids CSV/JSON artifact.
 *
 *   orthogrids-plot --kind domain --in grids.csv  --out shapes.svg
 *   orthogrids-plot --kind sphere --in enum.csv   --out directions.svg
 *   orthogrids-plot --kind torus  --in grids.csv  --out marked.svg --bins 12
 *   orthogrids-plot --kind trend  --in report.json --out trend.svg
 *
 * Exit codes: 0 ok, 2 bad flags / unreadable input / schema mismatch.
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaError, parseCsvArtifact, parseReportArtifact } from "./artifacts.js";
import {
  DEFAULT_STYLE,
  renderDomainFigure,
  renderSphereFigure,
  renderTorusHeatmap,
  renderTrendFigure,
} from "./figures.js";

export const KINDS = ["domain", "sphere", "torus", "trend"] as const;
export type Kind = (typeof KINDS)[number];

export function renderFile(kind: Kind, inputPath: string, bins: number, width: number): string {
  const text = readFileSync(inputPath, "utf8");
  const style = { ...DEFAULT_STYLE, bins, width };
  switch (kind) {
    case "domain":
      return renderDomainFigure(parseCsvArtifact(text), style);
    case "sphere":
      return renderSphereFigure(parseCsvArtifact(text), style);
    case "torus":
      return renderTorusHeatmap(parseCsvArtifact(text), style);
    case "trend":
      return renderTrendFigure(parseReportArtifact(text), style);
  }
}

export function main(argv: string[]): number {
  try {
    const args = yargs(argv)
      .option("kind", { choices: KINDS, demandOption: true })
      .option("in", { type: "string", demandOption: true, describe: "input artifact path" })
      .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
      .option("bins", { type: "number", default: DEFAULT_STYLE.bins })
      .option("width", { type: "number", default: DEFAULT_STYLE.width })
      .strict()
      .exitProcess(false)
      .fail((msg) => {
        throw new SchemaError(msg);
      })
      .parseSync();

    const svg = renderFile(args.kind as Kind, args.in, args.bins, args.width);
    writeFileSync(args.out, svg + "\n", "utf8");
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: cannot read input: ${err.message}`);
      return 2;
    }
    throw err;
  }
  return 0;
}

const invokedDirectly = (() => {
  if (!process.argv[1]) return false;
  try {
    return realpathSync(process.argv[1]) === fileURLToPath(import.meta.url);
  } catch {
    return false;
  }
})();
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
