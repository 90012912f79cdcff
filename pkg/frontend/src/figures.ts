/**
 * The three figure kinds rendered from spectra-lab artifacts:
 * binned entropy profiles, broadened-spectrum overlays (log density), and
 * the plain-vs-tighter-vs-actual comparison (an overlay with series from
 * several runs). Everything is drawn from CSV values as-is; no
 * recomputation happens here.
 */

import { SvgDoc } from "./svg.js";
import { Scale, linearScale, logScale, tickLabel } from "./scale.js";

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface OverlayOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 16, top: 28, bottom: 44 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

function frame(doc: SvgDoc, xs: Scale, ys: Scale, opts: { title: string; xLabel: string; yLabel: string }): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const axisStyle = 'stroke="black" stroke-width="1"';
  doc.line(x0, y0, x1, y0, axisStyle);
  doc.line(x0, y0, x0, y1, axisStyle);
  for (const t of xs.ticks()) {
    const px = xs(t);
    doc.line(px, y0, px, y0 + 4, axisStyle);
    doc.text(px, y0 + 16, tickLabel(t), 'text-anchor="middle"');
  }
  for (const t of ys.ticks()) {
    const py = ys(t);
    doc.line(x0 - 4, py, x0, py, axisStyle);
    doc.text(x0 - 6, py + 3, tickLabel(t), 'text-anchor="end"');
    doc.line(x0, py, x1, py, 'stroke="#dddddd" stroke-width="0.5"');
  }
  doc.text((x0 + x1) / 2, HEIGHT - 10, opts.xLabel, 'text-anchor="middle"');
  doc.raw(
    `<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" transform="rotate(-90 14 ${(y0 + y1) / 2})">${opts.yLabel}</text>`,
  );
  doc.text((x0 + x1) / 2, 16, opts.title, 'text-anchor="middle" font-weight="bold"');
}

function legend(doc: SvgDoc, labels: string[]): void {
  const x = MARGIN.left + 10;
  let y = MARGIN.top + 12;
  for (const [i, label] of labels.entries()) {
    const color = PALETTE[i % PALETTE.length];
    doc.line(x, y - 3, x + 18, y - 3, `stroke="${color}" stroke-width="2"`);
    doc.text(x + 24, y, label);
    y += 14;
  }
}

export function renderOverlay(series: Series[], opts: OverlayOptions): string {
  if (series.length === 0) {
    throw new Error("no series to draw");
  }
  const doc = new SvgDoc(WIDTH, HEIGHT);
  const xAll = series.flatMap((s) => s.x);
  const xDomain: [number, number] = [Math.min(...xAll), Math.max(...xAll)];
  const xs = linearScale(xDomain, [MARGIN.left, WIDTH - MARGIN.right]);

  let ys: Scale;
  let floor = 0;
  if (opts.logY) {
    const positive = series.flatMap((s) => s.y).filter((v) => v > 0);
    const top = Math.max(...positive);
    floor = Math.max(Math.min(...positive), top * 1e-14);
    ys = logScale([floor, top], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  } else {
    const yAll = series.flatMap((s) => s.y);
    const top = Math.max(...yAll);
    const bottom = Math.min(0, Math.min(...yAll));
    ys = linearScale([bottom, top * 1.05], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  }
  frame(doc, xs, ys, opts);
  for (const [i, s] of series.entries()) {
    const color = PALETTE[i % PALETTE.length];
    const pts: Array<[number, number]> = [];
    for (let j = 0; j < s.x.length; j++) {
      const y = opts.logY ? Math.max(s.y[j], floor) : s.y[j];
      if (opts.logY && s.y[j] <= 0) continue;
      pts.push([xs(s.x[j]), ys(y)]);
    }
    doc.path(pts, `stroke="${color}" stroke-width="1.5"`);
  }
  legend(doc, series.map((s) => s.label));
  return doc.render();
}

export interface EntropyBinsInput {
  series: Series[]; // binned means, e.g. S_min and S_1
  ceilingBits: number | null;
}

export function renderEntropyBins(input: EntropyBinsInput, title: string): string {
  if (input.series.length === 0) {
    throw new Error("no series to draw");
  }
  const doc = new SvgDoc(WIDTH, HEIGHT);
  const xAll = input.series.flatMap((s) => s.x);
  const yAll = input.series.flatMap((s) => s.y);
  const yTop = Math.max(...yAll, input.ceilingBits ?? 0) * 1.08;
  const xs = linearScale([Math.min(...xAll), Math.max(...xAll)], [MARGIN.left, WIDTH - MARGIN.right]);
  const ys = linearScale([0, yTop], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  frame(doc, xs, ys, { title, xLabel: "E - E_1", yLabel: "bits" });
  for (const [i, s] of input.series.entries()) {
    const color = PALETTE[i % PALETTE.length];
    const pts: Array<[number, number]> = [];
    for (let j = 0; j < s.x.length; j++) {
      pts.push([xs(s.x[j]), ys(s.y[j])]);
    }
    doc.path(pts, `stroke="${color}" stroke-width="1"`);
    for (const [px, py] of pts) {
      doc.circle(px, py, 2.2, `fill="${color}" stroke="none"`);
    }
  }
  if (input.ceilingBits !== null) {
    const py = ys(input.ceilingBits);
    doc.line(MARGIN.left, py, WIDTH - MARGIN.right, py, 'stroke="black" stroke-width="1" stroke-dasharray="6 4"');
    doc.text(WIDTH - MARGIN.right - 4, py - 5, `ceiling ${tickLabel(input.ceilingBits)}`, 'text-anchor="end"');
  }
  legend(doc, input.series.map((s) => s.label));
  return doc.render();
}
