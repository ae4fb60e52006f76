/**
 * Parsers for the benchmark harness output files.
 *
 * records.csv: header
 *   sweep_value,estimator,seed,doa_errors_deg,power_errors,iterations,wall_time_s,error
 * with per-source error lists semicolon-joined and an `error` column that is
 * nonempty when the estimator failed on that trial.
 *
 * summary.json: per-(estimator, sweep value) aggregates plus the direction
 * bound per sweep value and the experiment configuration.
 *
 * spectra.csv: header `estimator,theta_deg,power`, one row per grid point.
 */

export class SchemaError extends Error {}

export interface TrialRecord {
  sweepValue: number;
  estimator: string;
  seed: string;
  doaErrorsDeg: number[];
  powerErrors: number[];
  iterations: number;
  wallTimeS: number;
  error: string;
}

export interface SummaryEntry {
  estimator: string;
  sweep_value: number;
  n_trials: number;
  n_failed: number;
  rmse_doa_deg: number | null;
  rmse_power: number | null;
  p25_doa_deg: number | null;
  p50_doa_deg: number | null;
  p75_doa_deg: number | null;
  p25_power: number | null;
  p50_power: number | null;
  p75_power: number | null;
  mean_iterations: number;
  mean_wall_time_s: number;
}

export interface CrbEntry {
  sweep_value: number;
  crb_doa_deg: number[] | null;
  crb_rmse_deg: number | null;
}

export interface Summary {
  sweep_variable: string;
  truth_directions_deg: number[];
  truth_powers_db: number[];
  entries: SummaryEntry[];
  crb: CrbEntry[];
  config: Record<string, unknown>;
}

export interface SpectrumPoint {
  estimator: string;
  thetaDeg: number;
  power: number;
}

const RECORD_HEADER =
  "sweep_value,estimator,seed,doa_errors_deg,power_errors,iterations,wall_time_s,error";

function parseNumber(text: string, file: string, row: number, field: string): number {
  const value = Number(text);
  if (text.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(`${file}:${row}: field '${field}' is not a number: '${text}'`);
  }
  return value;
}

function parseNumberList(
  text: string,
  file: string,
  row: number,
  field: string,
): number[] {
  if (text === "") return [];
  return text.split(";").map((v) => parseNumber(v, file, row, field));
}

export function parseRecordsCsv(text: string, file = "records.csv"): TrialRecord[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${file}: empty file`);
  }
  if (lines[0] !== RECORD_HEADER) {
    throw new SchemaError(
      `${file}:1: unexpected header '${lines[0]}', expected '${RECORD_HEADER}'`,
    );
  }
  const records: TrialRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const row = i + 1;
    if (lines[i].includes('"')) {
      throw new SchemaError(`${file}:${row}: quoted fields are not part of the schema`);
    }
    const fields = lines[i].split(",");
    if (fields.length !== 8) {
      throw new SchemaError(
        `${file}:${row}: expected 8 columns, found ${fields.length}`,
      );
    }
    records.push({
      sweepValue: parseNumber(fields[0], file, row, "sweep_value"),
      estimator: fields[1],
      seed: fields[2],
      doaErrorsDeg: parseNumberList(fields[3], file, row, "doa_errors_deg"),
      powerErrors: parseNumberList(fields[4], file, row, "power_errors"),
      iterations: parseNumber(fields[5], file, row, "iterations"),
      wallTimeS: parseNumber(fields[6], file, row, "wall_time_s"),
      error: fields[7],
    });
  }
  return records;
}

function requireKeys(obj: Record<string, unknown>, keys: string[], context: string) {
  for (const key of keys) {
    if (!(key in obj)) {
      throw new SchemaError(`${context}: missing field '${key}'`);
    }
  }
}

export function parseSummaryJson(text: string, file = "summary.json"): Summary {
  let payload: Record<string, unknown>;
  try {
    payload = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`${file}: not valid JSON (${(err as Error).message})`);
  }
  requireKeys(
    payload,
    ["sweep_variable", "truth_directions_deg", "truth_powers_db", "entries", "crb", "config"],
    file,
  );
  const entries = payload.entries as SummaryEntry[];
  if (!Array.isArray(entries)) {
    throw new SchemaError(`${file}: 'entries' must be an array`);
  }
  entries.forEach((entry, i) => {
    requireKeys(
      entry as unknown as Record<string, unknown>,
      ["estimator", "sweep_value", "rmse_doa_deg", "p25_doa_deg", "p75_doa_deg",
       "mean_wall_time_s", "n_trials", "n_failed"],
      `${file}: entries[${i}]`,
    );
  });
  const crb = payload.crb as CrbEntry[];
  if (!Array.isArray(crb)) {
    throw new SchemaError(`${file}: 'crb' must be an array`);
  }
  return payload as unknown as Summary;
}

export function parseSpectraCsv(text: string, file = "spectra.csv"): SpectrumPoint[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${file}: empty file`);
  }
  if (lines[0] !== "estimator,theta_deg,power") {
    throw new SchemaError(
      `${file}:1: unexpected header '${lines[0]}', expected 'estimator,theta_deg,power'`,
    );
  }
  const points: SpectrumPoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const row = i + 1;
    const fields = lines[i].split(",");
    if (fields.length !== 3) {
      throw new SchemaError(`${file}:${row}: expected 3 columns, found ${fields.length}`);
    }
    points.push({
      estimator: fields[0],
      thetaDeg: parseNumber(fields[1], file, row, "theta_deg"),
      power: parseNumber(fields[2], file, row, "power"),
    });
  }
  if (points.length === 0) {
    throw new SchemaError(`${file}: no data rows`);
  }
  return points;
}

/** Entries of one estimator ordered by sweep value. */
export function estimatorCurve(summary: Summary, estimator: string): SummaryEntry[] {
  return summary.entries
    .filter((e) => e.estimator === estimator)
    .sort((a, b) => a.sweep_value - b.sweep_value);
}

export function estimatorNames(summary: Summary): string[] {
  const names: string[] = [];
  for (const entry of summary.entries) {
    if (!names.includes(entry.estimator)) names.push(entry.estimator);
  }
  return names;
}

export function dbToLinear(db: number): number {
  return Math.pow(10, db / 10);
}
