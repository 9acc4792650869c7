/** Aggregation of raw result rows into plottable series. */

import type { ResultRow } from "./csv.js";

export interface SeriesPoint {
  x: number;
  y: number;
  /** lower/upper error-bar ends (nearest-rank 25%/75% quantiles), if drawn */
  lo?: number;
  hi?: number;
}

/** One named curve: points sorted by x. */
export interface Series {
  label: string;
  points: SeriesPoint[];
}

export function mean(values: number[]): number {
  if (values.length === 0) {
    throw new Error("mean of an empty group");
  }
  let total = 0;
  for (const v of values) total += v;
  return total / values.length;
}

/**
 * Nearest-rank quantile: the smallest element with cumulative share >= p,
 * i.e. sorted[ceil(p*n) - 1] for p in (0, 1].
 */
export function nearestRankQuantile(values: number[], p: number): number {
  if (values.length === 0) {
    throw new Error("quantile of an empty group");
  }
  if (!(p > 0 && p <= 1)) {
    throw new Error(`quantile level must be in (0, 1], got ${p}`);
  }
  const sorted = [...values].sort((a, b) => a - b);
  return sorted[Math.ceil(p * sorted.length) - 1]!;
}

function groupBy<K>(rows: ResultRow[], key: (row: ResultRow) => K): Map<K, ResultRow[]> {
  const groups = new Map<K, ResultRow[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket) bucket.push(row);
    else groups.set(k, [row]);
  }
  return groups;
}

function schemeSeries(
  rows: ResultRow[],
  schemes: string[] | undefined,
  x: (row: ResultRow) => number,
  value: (row: ResultRow) => number | null,
  withQuantiles: boolean,
): Series[] {
  const wanted = rows.filter((r) => !schemes || schemes.includes(r.scheme));
  const series: Series[] = [];
  for (const [scheme, schemeRows] of groupBy(wanted, (r) => r.scheme)) {
    const points: SeriesPoint[] = [];
    for (const [xValue, cell] of groupBy(schemeRows, x)) {
      const values = cell.map(value).filter((v): v is number => v !== null);
      if (values.length === 0) {
        throw new Error(`scheme ${scheme}: no values at x=${xValue}`);
      }
      const point: SeriesPoint = { x: xValue, y: mean(values) };
      if (withQuantiles && values.length > 1) {
        point.lo = nearestRankQuantile(values, 0.25);
        point.hi = nearestRankQuantile(values, 0.75);
      }
      points.push(point);
    }
    points.sort((a, b) => a.x - b.x);
    series.push({ label: scheme, points });
  }
  series.sort((a, b) => a.label.localeCompare(b.label));
  return series;
}

/** Mean power ratio vs pilot length, one curve per scheme. */
export function etaVsSlots(rows: ResultRow[], schemes?: string[]): Series[] {
  return schemeSeries(rows, schemes, (r) => r.nD, (r) => r.eta, false);
}

/** Mean post-combining SNR vs pre-combining SNR with 25%/75% error bars. */
export function snrVsSnr(rows: ResultRow[], schemes?: string[]): Series[] {
  return schemeSeries(rows, schemes, (r) => r.preSnrDb, (r) => r.postSnrDb, true);
}
