import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { collectFigures, readManifest } from "../src/manifest.js";

const FIXTURES = join(__dirname, "fixtures");
const CLI = join(__dirname, "..", "dist", "main.js");

function render(outDir: string): string {
  return execFileSync(
    process.execPath,
    [
      CLI,
      "--manifest", join(FIXTURES, "actual", "manifest.json"),
      "--manifest", join(FIXTURES, "entropy", "manifest.json"),
      "--out", outDir,
    ],
    { encoding: "utf8" },
  );
}

describe("manifest grouping", () => {
  it("collects the overlay and the entropy figure from real artifacts", () => {
    const specs = collectFigures([
      readManifest(join(FIXTURES, "actual", "manifest.json")),
      readManifest(join(FIXTURES, "entropy", "manifest.json")),
    ]);
    const byName = new Map(specs.map((s) => [s.name, s]));
    expect(byName.has("fig1")).toBe(true);
    expect(byName.has("fig3")).toBe(true);
    expect(byName.get("fig3")!.series.map((s) => s.label)).toEqual([
      "actual D=16",
      "actual D=4",
      "actual D=8",
    ]);
    expect(byName.get("fig1")!.ceilingBits).toBe(4);
  });
});

describe("render_figs CLI (built)", () => {
  it("renders the three-curve overlay and the binned entropy figure", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const stdout = render(out);
    const summary = JSON.parse(stdout);
    expect(summary.figures).toContain("fig1.svg");
    expect(summary.figures).toContain("fig3.svg");
    const fig3 = readFileSync(join(out, "fig3.svg"), "utf8");
    expect((fig3.match(/<path /g) ?? []).length).toBe(3);
    const fig1 = readFileSync(join(out, "fig1.svg"), "utf8");
    expect(fig1).toContain("stroke-dasharray"); // the bits ceiling
  });

  it("is byte-identical across reruns", () => {
    const a = mkdtempSync(join(tmpdir(), "figs-a-"));
    const b = mkdtempSync(join(tmpdir(), "figs-b-"));
    render(a);
    render(b);
    for (const file of readdirSync(a).sort()) {
      expect(readFileSync(join(a, file))).toEqual(readFileSync(join(b, file)));
    }
    expect(readdirSync(a).length).toBeGreaterThan(0);
  });

  it("fails cleanly on a missing manifest", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    expect(() =>
      execFileSync(process.execPath, [CLI, "--manifest", "/nonexistent.json", "--out", out], {
        encoding: "utf8",
        stdio: "pipe",
      }),
    ).toThrow();
  });
});
