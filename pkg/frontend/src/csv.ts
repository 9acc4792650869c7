/** Reader for the experiment-runner result CSVs. */

import { readFileSync } from "node:fs";

export interface ResultRow {
  scenario: string;
  masterSeed: number;
  realization: number;
  scheme: string;
  nD: number;
  preSnrDb: number;
  /** per-path absolute angle errors, radians; empty when not applicable */
  elevErrRad: number[];
  azimErrRad: number[];
  /** narrowband power ratio against the ideal beamformer; null for wideband rows */
  eta: number | null;
  /** wideband post-combining SNR in dB; null for narrowband rows */
  postSnrDb: number | null;
  wallTimeS: number;
}

const EXPECTED_HEADER = [
  "scenario",
  "master_seed",
  "realization",
  "scheme",
  "n_d",
  "pre_snr_db",
  "elev_err_rad",
  "azim_err_rad",
  "eta",
  "post_snr_db",
  "wall_time_s",
];

function parseOptionalFloat(field: string): number | null {
  return field === "" ? null : Number(field);
}

function parseFloatList(field: string): number[] {
  return field === "" ? [] : field.split(";").map(Number);
}

/** Parse result rows from CSV text; '#' lines are comments. */
export function parseResultRows(text: string): ResultRow[] {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (lines.length === 0) {
    throw new Error("result CSV is empty");
  }
  const header = lines[0]!.split(",");
  for (const column of EXPECTED_HEADER) {
    if (!header.includes(column)) {
      throw new Error(`result CSV is missing column '${column}'`);
    }
  }
  const index = new Map(header.map((name, i) => [name, i]));
  const at = (fields: string[], column: string): string =>
    fields[index.get(column)!] ?? "";

  return lines.slice(1).map((line, rowNumber) => {
    const fields = line.split(",");
    if (fields.length !== header.length) {
      throw new Error(`row ${rowNumber + 1}: expected ${header.length} fields, got ${fields.length}`);
    }
    return {
      scenario: at(fields, "scenario"),
      masterSeed: Number(at(fields, "master_seed")),
      realization: Number(at(fields, "realization")),
      scheme: at(fields, "scheme"),
      nD: Number(at(fields, "n_d")),
      preSnrDb: Number(at(fields, "pre_snr_db")),
      elevErrRad: parseFloatList(at(fields, "elev_err_rad")),
      azimErrRad: parseFloatList(at(fields, "azim_err_rad")),
      eta: parseOptionalFloat(at(fields, "eta")),
      postSnrDb: parseOptionalFloat(at(fields, "post_snr_db")),
      wallTimeS: Number(at(fields, "wall_time_s")),
    };
  });
}

export function readResultRows(path: string): ResultRow[] {
  return parseResultRows(readFileSync(path, "utf-8"));
}
