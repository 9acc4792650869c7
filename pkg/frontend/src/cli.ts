#!/usr/bin/env node
/** Figure rendering CLI: `plot --spec <file>` writes SVG and PNG outputs. */

import { writeFileSync } from "node:fs";

import { buildFigure, loadFigureSpec } from "./figure.js";
import { renderPng } from "./png.js";
import { renderSvg } from "./svg.js";

export function run(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "plot") {
    console.error("usage: onebitbeam-plot plot --spec <figure.json>");
    return 2;
  }
  const specIndex = rest.indexOf("--spec");
  const specPath = specIndex >= 0 ? rest[specIndex + 1] : undefined;
  if (!specPath) {
    console.error("plot: missing --spec <figure.json>");
    return 2;
  }
  try {
    const spec = loadFigureSpec(specPath);
    const figure = buildFigure(spec);
    const base = spec.output.replace(/\.(svg|png)$/i, "");
    writeFileSync(`${base}.svg`, renderSvg(figure));
    writeFileSync(`${base}.png`, renderPng(figure));
    console.log(`wrote ${base}.svg and ${base}.png (${figure.series.length} series)`);
    return 0;
  } catch (err) {
    console.error(`plot: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
