/**
 * Figure rendering entry point.
 *
 * Usage: node dist/cli.js <figure-id> [--records FILE]... [--summary FILE]...
 *        [--spectra FILE] [--out FILE.svg]
 *
 * Per-figure inputs: psi_curves needs none; spectrum_example needs
 * --spectra and --summary; runtime_box needs --records (repeatable, with
 * matching --summary for group labels); the rmse_vs_* figures need
 * --summary (a --records file, when given, is validated against the
 * schema). Exit status 1 with a message on stderr for unknown figures,
 * missing inputs or schema violations.
 */

import { readFileSync, writeFileSync } from "fs";
import { FIGURE_IDS, FigureId, FigureInputs, buildFigure } from "./figures";
import { renderSvg } from "./render";
import { SchemaError, parseRecordsCsv, parseSpectraCsv, parseSummaryJson } from "./schema";

interface Args {
  figure: FigureId;
  records: string[];
  summaries: string[];
  spectra: string | null;
  out: string | null;
}

function parseArgs(argv: string[]): Args {
  const [figure, ...rest] = argv;
  if (!figure || !(FIGURE_IDS as readonly string[]).includes(figure)) {
    throw new SchemaError(
      `unknown figure '${figure ?? ""}'; expected one of: ${FIGURE_IDS.join(", ")}`,
    );
  }
  const args: Args = {
    figure: figure as FigureId,
    records: [],
    summaries: [],
    spectra: null,
    out: null,
  };
  for (let i = 0; i < rest.length; i += 2) {
    const flag = rest[i];
    const value = rest[i + 1];
    if (value === undefined) {
      throw new SchemaError(`flag ${flag} needs a value`);
    }
    switch (flag) {
      case "--records":
        args.records.push(value);
        break;
      case "--summary":
        args.summaries.push(value);
        break;
      case "--spectra":
        args.spectra = value;
        break;
      case "--out":
        args.out = value;
        break;
      default:
        throw new SchemaError(`unknown flag ${flag}`);
    }
  }
  if (!args.out) {
    throw new SchemaError("--out is required");
  }
  return args;
}

function read(path: string): string {
  return readFileSync(path, "utf-8");
}

function loadInputs(args: Args): FigureInputs {
  const inputs: FigureInputs = {};
  if (args.records.length > 0) {
    inputs.records = args.records.map((p) => parseRecordsCsv(read(p), p));
  }
  if (args.summaries.length > 0) {
    inputs.summaries = args.summaries.map((p) => parseSummaryJson(read(p), p));
  }
  if (args.spectra) {
    inputs.spectra = parseSpectraCsv(read(args.spectra), args.spectra);
  }
  switch (args.figure) {
    case "psi_curves":
      break;
    case "spectrum_example":
      if (!inputs.spectra || !inputs.summaries) {
        throw new SchemaError("spectrum_example needs --spectra and --summary");
      }
      break;
    case "runtime_box":
      if (!inputs.records) {
        throw new SchemaError("runtime_box needs at least one --records file");
      }
      break;
    default:
      if (!inputs.summaries) {
        throw new SchemaError(`${args.figure} needs a --summary file`);
      }
  }
  return inputs;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const inputs = loadInputs(args);
    const option = buildFigure(args.figure, inputs);
    const svg = renderSvg(option);
    writeFileSync(args.out!, svg, "utf-8");
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || (err as NodeJS.ErrnoException)?.code) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
