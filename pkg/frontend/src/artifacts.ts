/**
 * Readers for the CSV/JSON artifacts produced by the orthogrids CLI.
 *
 * CSV artifacts carry two comment lines before the header:
 *
 *   # run_config: {...}
 *   # content_hash: sha256:<hex over every byte after this line>
 *   col1,col2,...
 *   ...
 *
 * The reader verifies the hash before parsing rows, so a truncated or
 * hand-edited file is rejected up front.  JSON artifacts ({run_config,
 * content_hash, payload}) are schema-validated; their hash is computed
 * by the producer over a Python-canonical serialization that this
 * package does not reproduce, so it is surfaced but not re-checked.
 */

import { createHash } from "node:crypto";
import Papa from "papaparse";
import { z } from "zod";

export class SchemaError extends Error {}

export const runConfigSchema = z
  .object({
    cmd: z.string(),
    d: z.number().int(),
    D: z.array(z.number().int()),
    mode: z.string(),
    seed: z.number().int(),
  })
  .passthrough();

export type RunConfig = z.infer<typeof runConfigSchema>;

export interface CsvArtifact {
  config: RunConfig;
  header: string[];
  rows: Record<string, string>[];
}

const CONFIG_PREFIX = "# run_config: ";
const HASH_PREFIX = "# content_hash: sha256:";

/** Parse "num/den" (or a bare integer string) to a float. */
export function parseRational(text: string): number {
  const slash = text.indexOf("/");
  if (slash < 0) return Number(text);
  const num = Number(text.slice(0, slash));
  const den = Number(text.slice(slash + 1));
  if (!Number.isFinite(num) || !Number.isFinite(den) || den === 0) {
    throw new SchemaError(`bad rational field: ${JSON.stringify(text)}`);
  }
  return num / den;
}

/** Unpack a "a/b:c/d|e/f:g/h" orbit field into tuples of floats. */
export function parseOrbit(text: string): number[][] {
  if (text === "") return [];
  return text.split("|").map((entry) => entry.split(":").map(parseRational));
}

export function parseCsvArtifact(text: string): CsvArtifact {
  const firstBreak = text.indexOf("\n");
  const secondBreak = text.indexOf("\n", firstBreak + 1);
  if (firstBreak < 0 || secondBreak < 0) {
    throw new SchemaError("artifact too short: missing comment header lines");
  }
  const configLine = text.slice(0, firstBreak);
  const hashLine = text.slice(firstBreak + 1, secondBreak);
  if (!configLine.startsWith(CONFIG_PREFIX) || !hashLine.startsWith(HASH_PREFIX)) {
    throw new SchemaError("artifact missing run_config/content_hash comment lines");
  }

  const body = text.slice(secondBreak + 1);
  const digest = createHash("sha256").update(body, "utf8").digest("hex");
  const declared = hashLine.slice(HASH_PREFIX.length).trim();
  if (digest !== declared) {
    throw new SchemaError(`content hash mismatch: declared ${declared}, computed ${digest}`);
  }

  let config: RunConfig;
  try {
    config = runConfigSchema.parse(JSON.parse(configLine.slice(CONFIG_PREFIX.length)));
  } catch (err) {
    throw new SchemaError(`bad run_config line: ${err}`);
  }

  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new SchemaError(`CSV parse error on row ${first.row}: ${first.message}`);
  }
  const header = (parsed.meta.fields ?? []).slice();
  return { config, header, rows: parsed.data };
}

export const statReportSchema = z
  .object({
    d: z.number().int(),
    D: z.number().int(),
    n_points: z.number().int(),
    cap_discrepancy: z.number(),
    torus_ks: z.array(z.number()),
    shape_chi2: z.number().nullable(),
    joint_chi2: z.number().nullable(),
    mode: z.string(),
  })
  .passthrough();

export const reportPayloadSchema = z
  .object({
    reports: z.array(statReportSchema),
    trend: z
      .object({
        verdict: z.string(),
      })
      .passthrough(),
  })
  .passthrough();

export type ReportPayload = z.infer<typeof reportPayloadSchema>;

export interface JsonArtifact {
  config: RunConfig;
  contentHash: string;
  payload: ReportPayload;
}

export function parseReportArtifact(text: string): JsonArtifact {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`not JSON: ${err}`);
  }
  const envelope = z
    .object({
      run_config: runConfigSchema,
      content_hash: z.string(),
      payload: reportPayloadSchema,
    })
    .safeParse(raw);
  if (!envelope.success) {
    throw new SchemaError(`report artifact schema mismatch: ${envelope.error.message}`);
  }
  return {
    config: envelope.data.run_config,
    contentHash: envelope.data.content_hash,
    payload: envelope.data.payload,
  };
}
