/** Raster rendering: a small self-contained RGB rasterizer and PNG encoder.
 *
 * The raster output carries the plot area, grid, series lines, markers and
 * error bars; axis text lives in the SVG companion.
 */

import { deflateSync } from "node:zlib";

import { PLOT, seriesColor, xToPixel, yToPixel, type Figure } from "./figure.js";

type Color = [number, number, number];

export class Raster {
  readonly data: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
    background: Color = [255, 255, 255],
  ) {
    this.data = new Uint8Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      this.data.set(background, 3 * i);
    }
  }

  set(x: number, y: number, color: Color): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    this.data.set(color, 3 * (yi * this.width + xi));
  }

  line(x0: number, y0: number, x1: number, y1: number, color: Color): void {
    // Bresenham on rounded endpoints
    let xa = Math.round(x0);
    let ya = Math.round(y0);
    const xb = Math.round(x1);
    const yb = Math.round(y1);
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, color);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  fillRect(x: number, y: number, w: number, h: number, color: Color): void {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
        this.set(xx, yy, color);
      }
    }
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(bytes: Uint8Array): number {
  let crc = 0xffffffff;
  for (const b of bytes) {
    crc = CRC_TABLE[(crc ^ b) & 0xff]! ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const header = Buffer.alloc(8);
  header.writeUInt32BE(payload.length, 0);
  header.write(type, 4, "ascii");
  const body = Buffer.concat([header.subarray(4), payload]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([header.subarray(0, 4), body, crc]);
}

/** Encode an RGB raster as an 8-bit truecolor PNG. */
export function encodePng(raster: Raster): Buffer {
  const { width, height, data } = raster;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr.writeUInt8(8, 8); // bit depth
  ihdr.writeUInt8(2, 9); // truecolor
  const scanlines = Buffer.alloc(height * (1 + width * 3));
  for (let y = 0; y < height; y++) {
    const offset = y * (1 + width * 3);
    scanlines[offset] = 0; // filter: none
    scanlines.set(data.subarray(y * width * 3, (y + 1) * width * 3), offset + 1);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(scanlines, { level: 9 })),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

function drawMarker(raster: Raster, index: number, x: number, y: number, color: Color): void {
  switch (index % 4) {
    case 0: // filled square
      raster.fillRect(x - 3, y - 3, 7, 7, color);
      break;
    case 1: // plus
      raster.line(x - 4, y, x + 4, y, color);
      raster.line(x, y - 4, x, y + 4, color);
      break;
    case 2: // x
      raster.line(x - 3, y - 3, x + 3, y + 3, color);
      raster.line(x - 3, y + 3, x + 3, y - 3, color);
      break;
    default: // hollow square
      raster.line(x - 3, y - 3, x + 3, y - 3, color);
      raster.line(x + 3, y - 3, x + 3, y + 3, color);
      raster.line(x + 3, y + 3, x - 3, y + 3, color);
      raster.line(x - 3, y + 3, x - 3, y - 3, color);
  }
}

/** Rasterize the figure and encode it as PNG bytes. */
export function renderPng(figure: Figure): Buffer {
  const raster = new Raster(PLOT.width, PLOT.height);
  const grid: Color = [224, 224, 224];
  const frame: Color = [51, 51, 51];
  const x0 = PLOT.left;
  const x1 = PLOT.width - PLOT.right;
  const y0 = PLOT.top;
  const y1 = PLOT.height - PLOT.bottom;

  for (const tick of figure.xTicks) {
    const px = xToPixel(figure, tick);
    raster.line(px, y0, px, y1, grid);
  }
  for (const tick of figure.yTicks) {
    const py = yToPixel(figure, tick);
    raster.line(x0, py, x1, py, grid);
  }
  raster.line(x0, y0, x1, y0, frame);
  raster.line(x1, y0, x1, y1, frame);
  raster.line(x1, y1, x0, y1, frame);
  raster.line(x0, y1, x0, y0, frame);

  figure.series.forEach((series, index) => {
    const color = seriesColor(series.label, index);
    for (let i = 1; i < series.points.length; i++) {
      const a = series.points[i - 1]!;
      const b = series.points[i]!;
      raster.line(
        xToPixel(figure, a.x),
        yToPixel(figure, a.y),
        xToPixel(figure, b.x),
        yToPixel(figure, b.y),
        color,
      );
    }
    for (const p of series.points) {
      const px = xToPixel(figure, p.x);
      if (p.lo !== undefined && p.hi !== undefined) {
        const top = yToPixel(figure, p.hi);
        const bottom = yToPixel(figure, p.lo);
        raster.line(px, top, px, bottom, color);
        raster.line(px - 4, top, px + 4, top, color);
        raster.line(px - 4, bottom, px + 4, bottom, color);
      }
      drawMarker(raster, index, px, yToPixel(figure, p.y), color);
    }
  });

  return encodePng(raster);
}
