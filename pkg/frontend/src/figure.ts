/**
 * Series extraction and figure rendering for sysid CSV outputs.
 *
 * A figure is: rows grouped by a series column, one numeric column on x, one
 * on y, optional overlay columns rendered as extra series (e.g. the error
 * bound next to the measured error).  Output is a deterministic SVG string:
 * identical inputs give identical bytes, and every data series contributes
 * exactly one <path> element.
 */

import { writeFileSync } from "node:fs";
import { FigureError, Table, loadCsv, mergeTables, requireColumn } from "./csv.js";
import { Scale, linearScale, logScale, tickLabel } from "./scale.js";
import { HEIGHT, MARGIN, PALETTE, WIDTH, document as svgDocument, line, polylinePath, px, text } from "./svg.js";

export interface FigureSpec {
  inputs: string[];
  seriesColumn: string;
  xColumn: string;
  yColumn: string;
  logY: boolean;
  output: string;
  /** additional y columns overlaid as their own series, suffixed per group */
  overlayColumns?: string[];
}

export interface Series {
  name: string;
  points: Array<[number, number]>;
}

function numeric(row: Record<string, string>, column: string): number | null {
  const raw = row[column];
  if (raw === undefined || raw === "") return null;
  const value = Number(raw);
  return Number.isFinite(value) ? value : null;
}

export function extractSeries(table: Table, spec: FigureSpec): Series[] {
  requireColumn(table, spec.seriesColumn);
  requireColumn(table, spec.xColumn);
  requireColumn(table, spec.yColumn);
  for (const column of spec.overlayColumns ?? []) {
    requireColumn(table, column);
  }
  const groups = new Map<string, Record<string, string>[]>();
  for (const row of table.rows) {
    const key = row[spec.seriesColumn] ?? "";
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(row);
  }
  if (groups.size === 0) {
    throw new FigureError(`no data rows for series column '${spec.seriesColumn}'`);
  }
  const series: Series[] = [];
  const keys = [...groups.keys()].sort();
  for (const key of keys) {
    const rows = groups.get(key)!;
    const columns = [spec.yColumn, ...(spec.overlayColumns ?? [])];
    for (const column of columns) {
      const points: Array<[number, number]> = [];
      for (const row of rows) {
        const x = numeric(row, spec.xColumn);
        const y = numeric(row, column);
        if (x === null || y === null) continue;
        if (spec.logY && !(y > 0)) continue;
        points.push([x, y]);
      }
      points.sort((a, b) => a[0] - b[0]);
      const name = column === spec.yColumn ? key : `${key} ${column}`;
      if (points.length === 0) {
        throw new FigureError(`series '${name}' has no plottable rows`);
      }
      series.push({ name, points });
    }
  }
  return series;
}

function extent(values: number[]): [number, number] {
  return [Math.min(...values), Math.max(...values)];
}

export function renderSvg(series: Series[], spec: FigureSpec): string {
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);

  const left = MARGIN.left;
  const right = WIDTH - MARGIN.right;
  const top = MARGIN.top;
  const bottom = HEIGHT - MARGIN.bottom;

  const xScale = linearScale(xLo, xHi, left, right, 8);
  const yScale: Scale = spec.logY
    ? logScale(yLo, yHi, bottom, top)
    : linearScale(yLo, yHi, bottom, top, 6);

  const body: string[] = [];
  body.push(
    `<rect x="${px(left)}" y="${px(top)}" width="${px(right - left)}" height="${px(bottom - top)}" fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  for (const tick of xScale.ticks) {
    const x = xScale.apply(tick);
    if (x < left - 0.01 || x > right + 0.01) continue;
    body.push(line(x, bottom, x, bottom + 4, "#333333"));
    body.push(text(x, bottom + 18, tickLabel(tick), "middle"));
  }
  for (const tick of yScale.ticks) {
    const y = yScale.apply(tick);
    if (y > bottom + 0.01 || y < top - 0.01) continue;
    body.push(line(left - 4, y, left, y, "#333333"));
    body.push(line(left, y, right, y, "#eeeeee"));
    body.push(text(left - 8, y + 4, tickLabel(tick), "end"));
  }
  body.push(text((left + right) / 2, HEIGHT - 16, spec.xColumn, "middle"));
  body.push(
    text(20, (top + bottom) / 2, spec.logY ? `${spec.yColumn} (log)` : spec.yColumn, "middle",
      ` transform="rotate(-90 20 ${px((top + bottom) / 2)})"`),
  );

  series.forEach((s, index) => {
    const color = PALETTE[index % PALETTE.length];
    body.push(polylinePath(s.points.map(([x, y]) => [xScale.apply(x), yScale.apply(y)]), color));
  });

  series.forEach((s, index) => {
    const color = PALETTE[index % PALETTE.length];
    const y = top + 16 + 18 * index;
    body.push(`<rect x="${px(right - 150)}" y="${px(y - 9)}" width="22" height="4" fill="${color}"/>`);
    body.push(text(right - 122, y, s.name, "start"));
  });

  return svgDocument(body);
}

export function render(spec: FigureSpec): string {
  if (spec.inputs.length === 0) {
    throw new FigureError("at least one --input CSV is required");
  }
  const table = mergeTables(spec.inputs.map(loadCsv));
  const svg = renderSvg(extractSeries(table, spec), spec);
  writeFileSync(spec.output, svg, { encoding: "utf-8" });
  return svg;
}
