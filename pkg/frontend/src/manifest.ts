/**
 * Locate figure-feeding CSVs through run manifests and group them into
 * figure specs. A run's manifest lists its artifact files; each
 * figure-facing CSV carries its target figure tag in a comment line.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";

import { TaggedTable, column, readTaggedCsv } from "./csv.js";
import { Series } from "./figures.js";

export interface RunManifest {
  dir: string;
  files: string[];
  scalars: Record<string, number | string>;
}

export function readManifest(path: string): RunManifest {
  const doc = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(doc.files)) {
    throw new Error(`manifest ${path} has no files list`);
  }
  return {
    dir: dirname(path),
    files: doc.files as string[],
    scalars: (doc.scalars ?? {}) as Record<string, number | string>,
  };
}

export interface FigureSpec {
  name: string;
  kind: "entropy-bins" | "overlay";
  series: Series[];
  ceilingBits: number | null;
  logY: boolean;
}

function seriesLabel(stem: string): string {
  // e.g. "actual_D4_broadened" -> "actual D=4"
  const m = stem.match(/^(predicted|cr_plus|actual)_(D?\w+?)(_broadened)?$/);
  if (!m) return stem;
  const kind = { predicted: "plain", cr_plus: "tighter", actual: "actual" }[m[1]] ?? m[1];
  const label = m[2].startsWith("D") ? `D=${m[2].slice(1)}` : m[2];
  return `${kind} ${label}`;
}

/** Group every figure-tagged CSV across the manifests into figure specs. */
export function collectFigures(manifests: RunManifest[]): FigureSpec[] {
  const overlays = new Map<string, Series[]>();
  const entropySeries: Series[] = [];
  let ceiling: number | null = null;

  for (const manifest of manifests) {
    const maybeCeiling = manifest.scalars["ceiling_bits"];
    if (typeof maybeCeiling === "number") {
      ceiling = maybeCeiling;
    }
    for (const file of [...manifest.files].sort()) {
      if (!file.endsWith(".csv")) continue;
      const stem = file.replace(/\.csv$/, "");
      let table: TaggedTable;
      try {
        table = readTaggedCsv(join(manifest.dir, file));
      } catch {
        continue; // non-tabular artifact
      }
      if (table.figure === null) continue;
      if (stem.startsWith("entropy_bins_")) {
        const name = stem.replace("entropy_bins_", "");
        entropySeries.push({
          label: name,
          x: column(table, "E_minus_E1"),
          y: column(table, `mean_${name}`),
        });
      } else if (stem.endsWith("_broadened")) {
        const group = overlays.get(table.figure) ?? [];
        group.push({
          label: seriesLabel(stem),
          x: column(table, "E"),
          y: column(table, "density"),
        });
        overlays.set(table.figure, group);
      }
    }
  }

  const specs: FigureSpec[] = [];
  if (entropySeries.length > 0) {
    specs.push({
      name: "fig1",
      kind: "entropy-bins",
      series: entropySeries,
      ceilingBits: ceiling,
      logY: false,
    });
  }
  for (const [tag, series] of [...overlays.entries()].sort()) {
    series.sort((a, b) => (a.label < b.label ? -1 : a.label > b.label ? 1 : 0));
    specs.push({ name: tag, kind: "overlay", series, ceilingBits: null, logY: true });
  }
  return specs;
}
