import { describe, expect, it } from "vitest";

import { renderEntropyBins, renderOverlay } from "../src/figures.js";

const gaussian = (center: number) => {
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i <= 100; i++) {
    const e = -1 + 0.04 * i;
    x.push(e);
    y.push(Math.exp(-0.5 * ((e - center) / 0.1) ** 2) / (0.1 * Math.sqrt(2 * Math.PI)));
  }
  return { x, y };
};

describe("renderOverlay", () => {
  it("draws one path per series with a legend", () => {
    const svg = renderOverlay(
      [
        { label: "a", ...gaussian(0) },
        { label: "b", ...gaussian(0.5) },
        { label: "c", ...gaussian(1.0) },
      ],
      { title: "t", xLabel: "E", yLabel: "density", logY: true },
    );
    expect(svg).toContain("<svg");
    expect((svg.match(/<path /g) ?? []).length).toBe(3);
    for (const label of ["a", "b", "c"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
  });

  it("is deterministic", () => {
    const series = [{ label: "only", ...gaussian(0.3) }];
    const opts = { title: "t", xLabel: "E", yLabel: "density", logY: true };
    expect(renderOverlay(series, opts)).toBe(renderOverlay(series, opts));
  });

  it("drops nonpositive values on a log axis instead of failing", () => {
    const svg = renderOverlay(
      [{ label: "s", x: [0, 1, 2], y: [0, 1e-4, 1e-2] }],
      { title: "t", xLabel: "E", yLabel: "density", logY: true },
    );
    expect(svg).toContain("<path");
  });

  it("rejects an empty spec", () => {
    expect(() =>
      renderOverlay([], { title: "t", xLabel: "x", yLabel: "y", logY: false }),
    ).toThrow(/no series/);
  });
});

describe("renderEntropyBins", () => {
  it("draws series markers and the ceiling line", () => {
    const svg = renderEntropyBins(
      {
        series: [
          { label: "S_min", x: [0, 0.1, 0.2], y: [1.0, 2.1, 2.4] },
          { label: "S_1", x: [0, 0.1, 0.2], y: [1.4, 2.6, 3.0] },
        ],
        ceilingBits: 4,
      },
      "entropies",
    );
    expect(svg).toContain("stroke-dasharray");
    expect(svg).toContain("ceiling 4");
    expect((svg.match(/<circle /g) ?? []).length).toBe(6);
  });
});
