export { parseResultRows, readResultRows, type ResultRow } from "./csv.js";
export {
  etaVsSlots,
  mean,
  nearestRankQuantile,
  snrVsSnr,
  type Series,
  type SeriesPoint,
} from "./aggregate.js";
export { buildFigure, loadFigureSpec, type Figure, type FigureSpec } from "./figure.js";
export { renderSvg } from "./svg.js";
export { encodePng, renderPng, Raster } from "./png.js";
