import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { main } from "../src/cli";
import { FIGURE_IDS, buildFigure, penaltyCurveData } from "../src/figures";
import { normalizeRendererIds, renderSvg } from "../src/render";
import { parseRecordsCsv, parseSpectraCsv, parseSummaryJson } from "../src/schema";

const FIXTURES = join(__dirname, "..", "fixtures");

function fixturePath(...parts: string[]): string {
  return join(FIXTURES, ...parts);
}

function load(name: string) {
  return {
    records: [parseRecordsCsv(readFileSync(fixturePath(name, "records.csv"), "utf-8"))],
    summaries: [parseSummaryJson(readFileSync(fixturePath(name, "summary.json"), "utf-8"))],
  };
}

const INPUTS: Record<string, () => Parameters<typeof buildFigure>[1]> = {
  psi_curves: () => ({}),
  spectrum_example: () => ({
    spectra: parseSpectraCsv(readFileSync(fixturePath("spectrum", "spectra.csv"), "utf-8")),
    summaries: [
      parseSummaryJson(readFileSync(fixturePath("spectrum", "summary.json"), "utf-8")),
    ],
  }),
  rmse_vs_snr: () => load("snr"),
  rmse_vs_snapshots: () => load("snapshots"),
  rmse_vs_dtheta: () => load("dtheta"),
  rmse_vs_rho: () => load("rho"),
  rmse_vs_snr_uca: () => load("uca"),
  runtime_box: () => load("runtime"),
};

describe("figure rendering", () => {
  for (const id of FIGURE_IDS) {
    it(`renders ${id} from the reference data`, () => {
      const option = buildFigure(id, INPUTS[id]());
      const svg = renderSvg(option);
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.length).toBeGreaterThan(2000);
      expect(svg).toContain("</svg>");
    });
  }

  it("renders deterministically up to renderer metadata", () => {
    const a = renderSvg(buildFigure("rmse_vs_snr", INPUTS.rmse_vs_snr()));
    const b = renderSvg(buildFigure("rmse_vs_snr", INPUTS.rmse_vs_snr()));
    expect(normalizeRendererIds(a)).toBe(normalizeRendererIds(b));
  });

  it("refuses to draw from empty inputs", () => {
    expect(() =>
      buildFigure("runtime_box", { records: [[]], summaries: [] }),
    ).toThrowError(/nonempty/);
    const summary = parseSummaryJson(
      readFileSync(fixturePath("snr", "summary.json"), "utf-8"),
    );
    expect(() =>
      buildFigure("rmse_vs_snr", { summaries: [{ ...summary, entries: [] }] }),
    ).toThrowError(/nothing to draw/);
  });
});

describe("penalty curve shape", () => {
  it("matches the expected ordering and zeros", () => {
    const curves = penaltyCurveData();
    // all four vanish at eigenvalue 1 (sample index 49: lambda = 1.0)
    for (const kind of ["amv", "spice", "airm", "jbld"] as const) {
      const atOne = curves[kind].find(([lambda]) => Math.abs(lambda - 1) < 1e-9)!;
      expect(atOne[1]).toBeCloseTo(0, 10);
    }
    // above one: amv is the steepest, the (scaled) jbld is the flattest
    for (const lambda of [2, 3, 4.5, 6]) {
      const at = (kind: "amv" | "spice" | "airm" | "jbld") =>
        curves[kind].find(([l]) => Math.abs(l - lambda) < 1e-9)![1];
      expect(at("amv")).toBeGreaterThan(at("spice"));
      expect(at("spice")).toBeGreaterThan(at("airm"));
      expect(at("airm")).toBeGreaterThan(at("jbld"));
    }
    // growth from 1 to 6 orders the same way (steepness)
    const growth = (kind: "amv" | "spice" | "airm" | "jbld") =>
      curves[kind][299][1] - curves[kind][49][1];
    expect(growth("amv")).toBeGreaterThan(growth("spice"));
    expect(growth("spice")).toBeGreaterThan(growth("airm"));
    expect(growth("airm")).toBeGreaterThan(growth("jbld"));
  });
});

describe("command line", () => {
  it("writes an SVG per figure script", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const status = main([
      "rmse_vs_rho",
      "--records", fixturePath("rho", "records.csv"),
      "--summary", fixturePath("rho", "summary.json"),
      "--out", join(out, "rho.svg"),
    ]);
    expect(status).toBe(0);
    const svg = readFileSync(join(out, "rho.svg"), "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("renders the penalty figure without data files", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const status = main(["psi_curves", "--out", join(out, "psi.svg")]);
    expect(status).toBe(0);
  });

  it("fails cleanly on missing inputs", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    expect(main(["rmse_vs_snr", "--out", join(out, "x.svg")])).toBe(1);
    expect(main(["no_such_figure", "--out", join(out, "x.svg")])).toBe(1);
    expect(
      main([
        "rmse_vs_snr",
        "--summary", fixturePath("missing", "summary.json"),
        "--out", join(out, "x.svg"),
      ]),
    ).toBe(1);
  });

  it("fails cleanly on schema-violating input", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const bad = join(out, "bad.csv");
    writeFileSync(bad, "not,a,records,file\n1,2,3,4\n");
    expect(
      main([
        "runtime_box",
        "--records", bad,
        "--out", join(out, "x.svg"),
      ]),
    ).toBe(1);
  });
});
