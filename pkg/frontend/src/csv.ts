/**
 * CSV loading for the sysid output dialect: comma-separated, mandatory
 * header, LF line endings, no quoting (the emitter never writes commas
 * inside fields).
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class FigureError extends Error {}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string, source: string): Table {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new FigureError(`${source}: CSV parse error: ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (columns.length === 0) {
    throw new FigureError(`${source}: missing header row`);
  }
  return { columns, rows: parsed.data };
}

export function loadCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new FigureError(`cannot read input CSV '${path}': ${(err as Error).message}`);
  }
  return parseCsv(text, path);
}

/** Merge tables that share a header (rows concatenated in input order). */
export function mergeTables(tables: Table[]): Table {
  const [first, ...rest] = tables;
  for (const table of rest) {
    if (table.columns.join(",") !== first.columns.join(",")) {
      throw new FigureError("input CSVs have mismatched headers");
    }
  }
  return { columns: first.columns, rows: tables.flatMap((t) => t.rows) };
}

export function requireColumn(table: Table, column: string): void {
  if (!table.columns.includes(column)) {
    throw new FigureError(`missing column '${column}' (header has: ${table.columns.join(", ")})`);
  }
}
