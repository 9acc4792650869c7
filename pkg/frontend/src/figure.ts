/** Figure model: spec file, layout and scales shared by the SVG and PNG backends. */

import { readFileSync } from "node:fs";

import type { Series } from "./aggregate.js";
import { etaVsSlots, snrVsSnr } from "./aggregate.js";
import { readResultRows } from "./csv.js";

export type FigureKind = "eta-vs-Nd" | "snr-vs-snr";

export interface FigureSpec {
  kind: FigureKind;
  /** input CSV paths, concatenated */
  inputs: string[];
  /** output path; .svg is written there, .png next to it */
  output: string;
  /** optional scheme filter */
  schemes?: string[];
  title?: string;
}

export function loadFigureSpec(path: string): FigureSpec {
  const raw = JSON.parse(readFileSync(path, "utf-8")) as Partial<FigureSpec>;
  if (raw.kind !== "eta-vs-Nd" && raw.kind !== "snr-vs-snr") {
    throw new Error(`spec kind must be eta-vs-Nd or snr-vs-snr, got ${String(raw.kind)}`);
  }
  if (!Array.isArray(raw.inputs) || raw.inputs.length === 0) {
    throw new Error("spec needs at least one input CSV");
  }
  if (typeof raw.output !== "string" || raw.output.length === 0) {
    throw new Error("spec needs an output path");
  }
  return raw as FigureSpec;
}

export interface Figure {
  kind: FigureKind;
  title: string;
  xLabel: string;
  yLabel: string;
  footer: string;
  series: Series[];
  xTicks: number[];
  yTicks: number[];
  xRange: [number, number];
  yRange: [number, number];
}

export const PLOT = {
  width: 640,
  height: 440,
  left: 70,
  right: 24,
  top: 36,
  bottom: 64,
};

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 2.5 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / chosen) * chosen; t <= hi + 1e-12; t += chosen) {
    ticks.push(Number(t.toFixed(12)));
  }
  return ticks;
}

export function buildFigure(spec: FigureSpec): Figure {
  const rows = spec.inputs.flatMap((path) => readResultRows(path));
  const series = spec.kind === "eta-vs-Nd" ? etaVsSlots(rows, spec.schemes) : snrVsSnr(rows, spec.schemes);
  if (series.length === 0) {
    throw new Error("no series to plot after filtering");
  }
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.flatMap((p) => [p.y, p.lo ?? p.y, p.hi ?? p.y]));
  let [xLo, xHi] = [Math.min(...xs), Math.max(...xs)];
  let [yLo, yHi] = [Math.min(...ys), Math.max(...ys)];
  if (xLo === xHi) [xLo, xHi] = [xLo - 1, xHi + 1];
  if (yLo === yHi) [yLo, yHi] = [yLo - 1, yHi + 1];
  const yPad = 0.06 * (yHi - yLo);
  const xPad = 0.04 * (xHi - xLo);

  const etaKind = spec.kind === "eta-vs-Nd";
  return {
    kind: spec.kind,
    title: spec.title ?? (etaKind ? "Power ratio vs pilot length" : "Post-combining SNR vs input SNR"),
    xLabel: etaKind ? "pilot slots N_d" : "SNR before beamforming (dB)",
    yLabel: etaKind ? "mean power ratio vs ideal" : "mean SNR after beamforming (dB)",
    footer: etaKind
      ? "markers: means over realizations"
      : "markers: means over realizations; bars: nearest-rank 25%/75% quantiles",
    series,
    xTicks: niceTicks(xLo - xPad, xHi + xPad),
    yTicks: niceTicks(yLo - yPad, yHi + yPad),
    xRange: [xLo - xPad, xHi + xPad],
    yRange: [yLo - yPad, yHi + yPad],
  };
}

export function xToPixel(figure: Figure, x: number): number {
  const [lo, hi] = figure.xRange;
  return PLOT.left + ((x - lo) / (hi - lo)) * (PLOT.width - PLOT.left - PLOT.right);
}

export function yToPixel(figure: Figure, y: number): number {
  const [lo, hi] = figure.yRange;
  return PLOT.height - PLOT.bottom - ((y - lo) / (hi - lo)) * (PLOT.height - PLOT.top - PLOT.bottom);
}

export const SERIES_COLORS: Record<string, [number, number, number]> = {
  IDEAL: [64, 64, 64],
  EST: [214, 39, 40],
  STR: [31, 119, 180],
  WOPT: [64, 64, 64],
  WUNQ: [44, 160, 44],
  WQ: [31, 119, 180],
  WSTR: [214, 39, 40],
};

export function seriesColor(label: string, index: number): [number, number, number] {
  const fallback: [number, number, number][] = [
    [214, 39, 40],
    [31, 119, 180],
    [44, 160, 44],
    [148, 103, 189],
    [140, 86, 75],
  ];
  return SERIES_COLORS[label] ?? fallback[index % fallback.length]!;
}
