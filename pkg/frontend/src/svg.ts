/** Vector rendering of a figure model. */

import { PLOT, seriesColor, xToPixel, yToPixel, type Figure } from "./figure.js";

const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

function fmt(value: number): string {
  return Number(value.toFixed(3)).toString();
}

function rgb([r, g, b]: [number, number, number]): string {
  return `rgb(${r},${g},${b})`;
}

function marker(shape: (typeof MARKERS)[number], x: number, y: number, color: string): string {
  const s = 4;
  switch (shape) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${s}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(x - s)}" y="${fmt(y - s)}" width="${2 * s}" height="${2 * s}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M ${fmt(x)} ${fmt(y - s - 1)} L ${fmt(x + s + 1)} ${fmt(y)} L ${fmt(x)} ${fmt(y + s + 1)} L ${fmt(x - s - 1)} ${fmt(y)} Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M ${fmt(x)} ${fmt(y - s - 1)} L ${fmt(x + s + 1)} ${fmt(y + s)} L ${fmt(x - s - 1)} ${fmt(y + s)} Z" fill="${color}"/>`;
  }
}

/** Deterministic standalone SVG document for the figure. */
export function renderSvg(figure: Figure): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${PLOT.width}" height="${PLOT.height}" viewBox="0 0 ${PLOT.width} ${PLOT.height}" font-family="Helvetica, Arial, sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${PLOT.width}" height="${PLOT.height}" fill="white"/>`);
  const x0 = PLOT.left;
  const x1 = PLOT.width - PLOT.right;
  const y0 = PLOT.top;
  const y1 = PLOT.height - PLOT.bottom;

  for (const tick of figure.xTicks) {
    const px = xToPixel(figure, tick);
    parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y1}" stroke="#e0e0e0"/>`);
    parts.push(
      `<text x="${fmt(px)}" y="${y1 + 18}" text-anchor="middle" fill="#333">${fmt(tick)}</text>`,
    );
  }
  for (const tick of figure.yTicks) {
    const py = yToPixel(figure, tick);
    parts.push(`<line x1="${x0}" y1="${fmt(py)}" x2="${x1}" y2="${fmt(py)}" stroke="#e0e0e0"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end" fill="#333">${fmt(tick)}</text>`,
    );
  }
  parts.push(`<rect x="${x0}" y="${y0}" width="${x1 - x0}" height="${y1 - y0}" fill="none" stroke="#333"/>`);

  figure.series.forEach((series, index) => {
    const color = rgb(seriesColor(series.label, index));
    const shape = MARKERS[index % MARKERS.length]!;
    const path = series.points
      .map((p, i) => `${i === 0 ? "M" : "L"} ${fmt(xToPixel(figure, p.x))} ${fmt(yToPixel(figure, p.y))}`)
      .join(" ");
    if (series.points.length > 1) {
      parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.8"/>`);
    }
    for (const p of series.points) {
      const px = xToPixel(figure, p.x);
      if (p.lo !== undefined && p.hi !== undefined) {
        const top = yToPixel(figure, p.hi);
        const bottom = yToPixel(figure, p.lo);
        parts.push(`<line x1="${fmt(px)}" y1="${fmt(top)}" x2="${fmt(px)}" y2="${fmt(bottom)}" stroke="${color}"/>`);
        parts.push(`<line x1="${fmt(px - 4)}" y1="${fmt(top)}" x2="${fmt(px + 4)}" y2="${fmt(top)}" stroke="${color}"/>`);
        parts.push(`<line x1="${fmt(px - 4)}" y1="${fmt(bottom)}" x2="${fmt(px + 4)}" y2="${fmt(bottom)}" stroke="${color}"/>`);
      }
      parts.push(marker(shape, px, yToPixel(figure, p.y), color));
    }
  });

  const legendX = x0 + 12;
  figure.series.forEach((series, index) => {
    const color = rgb(seriesColor(series.label, index));
    const ly = y0 + 16 + 18 * index;
    parts.push(`<line x1="${legendX}" y1="${ly}" x2="${legendX + 22}" y2="${ly}" stroke="${color}" stroke-width="1.8"/>`);
    parts.push(marker(MARKERS[index % MARKERS.length]!, legendX + 11, ly, color));
    parts.push(`<text x="${legendX + 28}" y="${ly + 4}" fill="#111">${series.label}</text>`);
  });

  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${y0 - 12}" text-anchor="middle" font-size="14" fill="#111">${figure.title}</text>`,
  );
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${y1 + 36}" text-anchor="middle" fill="#111">${figure.xLabel}</text>`,
  );
  parts.push(
    `<text x="16" y="${(y0 + y1) / 2}" text-anchor="middle" fill="#111" transform="rotate(-90 16 ${(y0 + y1) / 2})">${figure.yLabel}</text>`,
  );
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${PLOT.height - 8}" text-anchor="middle" font-size="10" fill="#666">${figure.footer}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
