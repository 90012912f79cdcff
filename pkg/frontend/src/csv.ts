/**
 * Reader for spectra-lab CSV artifacts: an optional `# figure: <tag>`
 * comment line, a header row, then numeric rows.
 */

import { readFileSync } from "node:fs";

export interface TaggedTable {
  figure: string | null;
  columns: string[];
  rows: number[][];
}

export function parseTaggedCsv(text: string): TaggedTable {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  let figure: string | null = null;
  let start = 0;
  if (lines[0]?.startsWith("#")) {
    const match = lines[0].match(/^#\s*figure:\s*(\S+)/);
    figure = match ? match[1] : null;
    start = 1;
  }
  if (start >= lines.length) {
    throw new Error("CSV has no header row");
  }
  const columns = lines[start].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(start + 1)) {
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row has ${parts.length} fields, expected ${columns.length}`);
    }
    const row = parts.map((p) => Number(p));
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`non-numeric value in row: ${line}`);
    }
    rows.push(row);
  }
  return { figure, columns, rows };
}

export function readTaggedCsv(path: string): TaggedTable {
  return parseTaggedCsv(readFileSync(path, "utf8"));
}

export function column(table: TaggedTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`column ${name} not found in [${table.columns.join(", ")}]`);
  }
  return table.rows.map((r) => r[idx]);
}
