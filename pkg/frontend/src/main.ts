#!/usr/bin/env node
/**
 * render_figs --manifest <manifest.json> [--manifest ...] --out <dir>
 *
 * Reads run manifests, pulls every figure-tagged CSV, and writes one
 * deterministic SVG per figure. CSV values are plotted as-is.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { renderEntropyBins, renderOverlay } from "./figures.js";
import { collectFigures, readManifest } from "./manifest.js";

interface Args {
  manifests: string[];
  out: string;
}

function parseArgs(argv: string[]): Args {
  const manifests: string[] = [];
  let out: string | null = null;
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--manifest":
        manifests.push(argv[++i]);
        break;
      case "--out":
        out = argv[++i];
        break;
      default:
        throw new Error(`unknown argument ${argv[i]}`);
    }
  }
  if (manifests.length === 0 || !out) {
    throw new Error("usage: render_figs --manifest manifest.json [--manifest ...] --out figs/");
  }
  return { manifests, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const manifests = args.manifests.map(readManifest);
    const specs = collectFigures(manifests);
    if (specs.length === 0) {
      console.error("no figure-tagged CSVs found in the given manifests");
      return 1;
    }
    mkdirSync(args.out, { recursive: true });
    const written: string[] = [];
    for (const spec of specs) {
      const svg =
        spec.kind === "entropy-bins"
          ? renderEntropyBins(
              { series: spec.series, ceilingBits: spec.ceilingBits },
              "entanglement across the spectrum",
            )
          : renderOverlay(spec.series, {
              title: `broadened spectra (${spec.name})`,
              xLabel: "E",
              yLabel: "density",
              logY: spec.logY,
            });
      const file = `${spec.name}.svg`;
      writeFileSync(join(args.out, file), svg);
      written.push(file);
    }
    console.log(JSON.stringify({ out: args.out, figures: written }));
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
