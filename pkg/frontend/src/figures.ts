/**
 * Figure builders: each returns an echarts option assembled purely from the
 * parsed input files (plus the closed-form penalty curves); the only
 * statistics computed here are quantiles for the runtime boxes.
 */

import type { EChartsOption, SeriesOption } from "echarts";
import { PENALTY_KINDS, penalty } from "./penalties";
import {
  SchemaError,
  SpectrumPoint,
  Summary,
  SummaryEntry,
  TrialRecord,
  dbToLinear,
  estimatorCurve,
  estimatorNames,
} from "./schema";

export const FIGURE_IDS = [
  "psi_curves",
  "spectrum_example",
  "rmse_vs_snr",
  "rmse_vs_snapshots",
  "rmse_vs_dtheta",
  "rmse_vs_rho",
  "rmse_vs_snr_uca",
  "runtime_box",
] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

export interface FigureInputs {
  records?: TrialRecord[][];
  summaries?: Summary[];
  spectra?: SpectrumPoint[];
}

const LABELS: Record<string, string> = {
  sercom_jbld: "SERCOM(JBLD)",
  sercom_airm: "SERCOM(AIRM)",
  sercom_le: "SERCOM(LE)",
  spice: "SPICE",
  samv: "SAMV",
  esprit: "ESPRIT",
};

const COLORS: Record<string, string> = {
  sercom_jbld: "#c23531",
  sercom_airm: "#2f4554",
  sercom_le: "#61a0a8",
  spice: "#d48265",
  samv: "#749f83",
  esprit: "#ca8622",
};

function label(estimator: string): string {
  return LABELS[estimator] ?? estimator;
}

function color(estimator: string): string {
  return COLORS[estimator] ?? "#555";
}

export function buildFigure(id: FigureId, inputs: FigureInputs): EChartsOption {
  switch (id) {
    case "psi_curves":
      return psiCurves();
    case "spectrum_example":
      return spectrumExample(inputs);
    case "rmse_vs_snr":
      return rmseSweep(inputs, "SNR (dB)", { normalizeBySensors: false });
    case "rmse_vs_snapshots":
      return rmseSweep(inputs, "snapshots per sensor (N/M)", {
        normalizeBySensors: true,
        dropSpiceAtMinimum: true,
      });
    case "rmse_vs_dtheta":
      return rmseSweep(inputs, "off-grid offset (deg)", { doaOnly: true });
    case "rmse_vs_rho":
      return rmseSweep(inputs, "correlation coefficient", {});
    case "rmse_vs_snr_uca":
      return rmseSweep(inputs, "SNR (dB)", {});
    case "runtime_box":
      return runtimeBox(inputs);
  }
}

// ---------------------------------------------------------------------------
// penalty curves
// ---------------------------------------------------------------------------

/** Sampled penalty curves; the JBLD one carries the conventional x8 scale
 * that aligns its quadratic term with the others. */
export function penaltyCurveData(): Record<string, Array<[number, number]>> {
  const curves: Record<string, Array<[number, number]>> = {};
  for (const kind of PENALTY_KINDS) {
    const scale = kind === "jbld" ? 8 : 1;
    const points: Array<[number, number]> = [];
    for (let i = 1; i <= 300; i++) {
      const lambda = (i * 6) / 300;
      points.push([lambda, scale * penalty(kind, lambda)]);
    }
    curves[kind] = points;
  }
  return curves;
}

function psiCurves(): EChartsOption {
  const curves = penaltyCurveData();
  const names: Record<string, string> = {
    amv: "AMV",
    spice: "SPICE",
    airm: "AIRM",
    jbld: "JBLD (x8)",
  };
  const series: SeriesOption[] = PENALTY_KINDS.map((kind) => ({
    type: "line",
    name: names[kind],
    data: curves[kind],
    showSymbol: false,
    lineStyle: { width: 2 },
  }));
  return {
    title: { text: "Per-eigenvalue penalties of the matching criteria" },
    legend: { top: 28 },
    grid: { top: 70, left: 60, right: 30, bottom: 50 },
    xAxis: { type: "value", name: "eigenvalue", min: 0, max: 6 },
    yAxis: { type: "value", name: "penalty", max: 8 },
    series,
  };
}

// ---------------------------------------------------------------------------
// spectrum overlay
// ---------------------------------------------------------------------------

function spectrumExample(inputs: FigureInputs): EChartsOption {
  const spectra = inputs.spectra ?? [];
  const summary = inputs.summaries?.[0];
  if (spectra.length === 0) {
    throw new SchemaError("spectrum_example needs a nonempty spectra file");
  }
  if (!summary) {
    throw new SchemaError("spectrum_example needs the summary file for the truth marks");
  }
  const byEstimator = new Map<string, Array<[number, number]>>();
  let maxPower = 0;
  for (const point of spectra) {
    if (!byEstimator.has(point.estimator)) byEstimator.set(point.estimator, []);
    maxPower = Math.max(maxPower, point.power);
  }
  if (maxPower <= 0) {
    throw new SchemaError("spectrum_example: all spectrum values are zero");
  }
  const floor = maxPower * 1e-8;
  for (const point of spectra) {
    byEstimator.get(point.estimator)!.push([point.thetaDeg, Math.max(point.power, floor)]);
  }
  const series: SeriesOption[] = [];
  for (const [name, data] of byEstimator) {
    data.sort((a, b) => a[0] - b[0]);
    series.push({
      type: "line",
      name: label(name),
      data,
      showSymbol: false,
      lineStyle: { width: 1.5, color: color(name) },
      itemStyle: { color: color(name) },
    });
  }
  const truth: Array<[number, number]> = summary.truth_directions_deg.map((deg, i) => [
    deg,
    Math.max(dbToLinear(summary.truth_powers_db[i]), floor),
  ]);
  series.push(crossMarkers("truth", truth));
  return {
    title: { text: "Estimated spatial power spectrum" },
    legend: { top: 28 },
    grid: { top: 70, left: 70, right: 30, bottom: 50 },
    xAxis: { type: "value", name: "direction (deg)", min: 0, max: 180 },
    yAxis: { type: "log", name: "power" },
    series,
  };
}

/** Scatter of X-shaped marks drawn as two crossing segments. */
function crossMarkers(name: string, points: Array<[number, number]>): SeriesOption {
  return {
    type: "custom",
    name,
    data: points,
    renderItem: (_params: unknown, api: any) => {
      const [cx, cy] = api.coord([api.value(0), api.value(1)]);
      const arm = 6;
      const style = { stroke: "#000", lineWidth: 2, fill: "none" };
      return {
        type: "group",
        children: [
          { type: "line", shape: { x1: cx - arm, y1: cy - arm, x2: cx + arm, y2: cy + arm }, style },
          { type: "line", shape: { x1: cx - arm, y1: cy + arm, x2: cx + arm, y2: cy - arm }, style },
        ],
      };
    },
  } as SeriesOption;
}

// ---------------------------------------------------------------------------
// sweep curves with interquartile bands
// ---------------------------------------------------------------------------

interface SweepOptions {
  normalizeBySensors?: boolean;
  dropSpiceAtMinimum?: boolean;
  doaOnly?: boolean;
}

function sensorCount(summary: Summary): number {
  const geometry = String(summary.config.geometry ?? "");
  const parts = geometry.split(":");
  const m = Number(parts[1]);
  if (!Number.isFinite(m) || m < 1) {
    throw new SchemaError(`summary config has no usable geometry: '${geometry}'`);
  }
  return m;
}

function bandPolygon(
  name: string,
  fill: string,
  points: Array<[number, number, number]>,
  xAxisIndex: number,
  yAxisIndex: number,
  logFloor: number | null,
): SeriesOption {
  const clamp = (v: number) => (logFloor !== null ? Math.max(v, logFloor) : v);
  return {
    type: "custom",
    name,
    silent: true,
    xAxisIndex,
    yAxisIndex,
    data: [0],
    z: 1,
    renderItem: (_params: unknown, api: any) => {
      const outline: Array<[number, number]> = [];
      for (const [x, lo] of points.map((p) => [p[0], p[1]] as [number, number])) {
        outline.push(api.coord([x, clamp(lo)]));
      }
      for (let i = points.length - 1; i >= 0; i--) {
        outline.push(api.coord([points[i][0], clamp(points[i][2])]));
      }
      return {
        type: "polygon",
        shape: { points: outline },
        style: { fill, opacity: 0.16 },
      };
    },
  } as SeriesOption;
}

function rmseSweep(
  inputs: FigureInputs,
  xLabel: string,
  opts: SweepOptions,
): EChartsOption {
  const summary = inputs.summaries?.[0];
  if (!summary) {
    throw new SchemaError("rmse figures need a summary file");
  }
  if (summary.entries.length === 0) {
    throw new SchemaError("summary holds no metric entries; nothing to draw");
  }
  const m = opts.normalizeBySensors ? sensorCount(summary) : 1;
  const names = estimatorNames(summary);
  const doaSeries: SeriesOption[] = [];
  const powerSeries: SeriesOption[] = [];
  let minPositiveDoa = Infinity;
  const curves = new Map<string, SummaryEntry[]>();
  for (const name of names) {
    let entries = estimatorCurve(summary, name).filter(
      (e) => e.rmse_doa_deg !== null,
    );
    if (opts.dropSpiceAtMinimum && name === "spice") {
      // the N = M point is conventionally omitted for SPICE: its error
      // there is so large it hides every other curve
      const minValue = Math.min(...summary.entries.map((e) => e.sweep_value));
      entries = entries.filter((e) => e.sweep_value > minValue);
    }
    if (entries.length === 0) continue;
    curves.set(name, entries);
    for (const e of entries) {
      for (const v of [e.rmse_doa_deg, e.p25_doa_deg]) {
        if (v !== null && v > 0) minPositiveDoa = Math.min(minPositiveDoa, v);
      }
    }
  }
  if (curves.size === 0) {
    throw new SchemaError("no estimator has direction metrics; nothing to draw");
  }
  const logFloor = Number.isFinite(minPositiveDoa) ? minPositiveDoa / 3 : 1e-6;
  for (const [name, entries] of curves) {
    const xs = entries.map((e) => e.sweep_value / m);
    doaSeries.push(
      bandPolygon(
        label(name),
        color(name),
        entries.map(
          (e, i) =>
            [xs[i], e.p25_doa_deg ?? e.rmse_doa_deg!, e.p75_doa_deg ?? e.rmse_doa_deg!] as [
              number,
              number,
              number,
            ],
        ),
        0,
        0,
        logFloor,
      ),
    );
    doaSeries.push({
      type: "line",
      name: label(name),
      xAxisIndex: 0,
      yAxisIndex: 0,
      data: entries.map((e, i) => [xs[i], Math.max(e.rmse_doa_deg!, logFloor)]),
      lineStyle: { width: 2, color: color(name) },
      itemStyle: { color: color(name) },
      z: 3,
    });
    if (!opts.doaOnly) {
      const withPower = entries.filter((e) => e.rmse_power !== null);
      if (withPower.length > 0) {
        powerSeries.push(
          bandPolygon(
            label(name),
            color(name),
            withPower.map(
              (e) =>
                [e.sweep_value / m, e.p25_power ?? e.rmse_power!, e.p75_power ?? e.rmse_power!] as [
                  number,
                  number,
                  number,
                ],
            ),
            opts.doaOnly ? 0 : 1,
            opts.doaOnly ? 0 : 1,
            null,
          ),
        );
        powerSeries.push({
          type: "line",
          name: label(name),
          xAxisIndex: 1,
          yAxisIndex: 1,
          data: withPower.map((e) => [e.sweep_value / m, e.rmse_power!]),
          lineStyle: { width: 2, color: color(name) },
          itemStyle: { color: color(name) },
          z: 3,
        });
      }
    }
  }
  const crbPoints = summary.crb
    .filter((c) => c.crb_rmse_deg !== null)
    .sort((a, b) => a.sweep_value - b.sweep_value)
    .map((c) => [c.sweep_value / m, Math.max(c.crb_rmse_deg!, logFloor)]);
  if (crbPoints.length > 0) {
    doaSeries.push({
      type: "line",
      name: "CRB",
      xAxisIndex: 0,
      yAxisIndex: 0,
      data: crbPoints,
      lineStyle: { width: 2, type: "dashed", color: "#111" },
      itemStyle: { color: "#111" },
      showSymbol: false,
      z: 2,
    });
  }
  if (opts.doaOnly) {
    return {
      title: { text: `DOA estimation error vs ${xLabel}` },
      legend: { top: 28 },
      grid: { top: 80, left: 70, right: 30, bottom: 55 },
      xAxis: { type: "value", name: xLabel, nameLocation: "middle", nameGap: 28 },
      yAxis: { type: "log", name: "DOA RMSE (deg)" },
      series: doaSeries,
    };
  }
  return {
    title: { text: `Estimation error vs ${xLabel}` },
    legend: { top: 28 },
    grid: [
      { top: 80, left: 70, right: 30, height: "33%" },
      { top: "60%", left: 70, right: 30, height: "30%" },
    ],
    xAxis: [
      { type: "value", gridIndex: 0, name: xLabel, nameLocation: "middle", nameGap: 26 },
      { type: "value", gridIndex: 1, name: xLabel, nameLocation: "middle", nameGap: 26 },
    ],
    yAxis: [
      { type: "log", gridIndex: 0, name: "DOA RMSE (deg)" },
      { type: "value", gridIndex: 1, name: "power RMSE" },
    ],
    series: [...doaSeries, ...powerSeries],
  };
}

// ---------------------------------------------------------------------------
// runtime boxes
// ---------------------------------------------------------------------------

function quantile(sorted: number[], q: number): number {
  const pos = (sorted.length - 1) * q;
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

function runtimeBox(inputs: FigureInputs): EChartsOption {
  const groups = inputs.records ?? [];
  if (groups.length === 0 || groups.every((g) => g.length === 0)) {
    throw new SchemaError("runtime_box needs at least one nonempty records file");
  }
  const summaries = inputs.summaries ?? [];
  const categories: string[] = [];
  const boxes: number[][] = [];
  groups.forEach((records, gi) => {
    const groupLabel =
      groups.length > 1
        ? String(summaries[gi]?.config?.name ?? `input ${gi + 1}`)
        : "";
    const byEstimator = new Map<string, number[]>();
    for (const r of records) {
      if (r.error !== "") continue;
      if (!byEstimator.has(r.estimator)) byEstimator.set(r.estimator, []);
      byEstimator.get(r.estimator)!.push(r.wallTimeS);
    }
    if (byEstimator.size === 0) {
      throw new SchemaError("runtime_box: a records file holds no successful trials");
    }
    for (const [name, times] of byEstimator) {
      times.sort((a, b) => a - b);
      categories.push(groupLabel ? `${label(name)}\n${groupLabel}` : label(name));
      boxes.push([
        times[0],
        quantile(times, 0.25),
        quantile(times, 0.5),
        quantile(times, 0.75),
        times[times.length - 1],
      ]);
    }
  });
  return {
    title: { text: "Per-run wall time" },
    grid: { top: 60, left: 80, right: 30, bottom: 80 },
    xAxis: { type: "category", data: categories, axisLabel: { interval: 0 } },
    yAxis: { type: "log", name: "runtime (s)" },
    series: [{ type: "boxplot", data: boxes, itemStyle: { color: "#eee", borderColor: "#333" } }],
  };
}
