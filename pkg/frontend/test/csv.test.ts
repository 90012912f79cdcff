import { describe, expect, it } from "vitest";

import { column, parseTaggedCsv } from "../src/csv.js";

describe("parseTaggedCsv", () => {
  it("reads the figure tag, header, and numeric rows", () => {
    const table = parseTaggedCsv("# figure: fig3\nE,density\n0.5,1e-3\n1.5,2e-3\n");
    expect(table.figure).toBe("fig3");
    expect(table.columns).toEqual(["E", "density"]);
    expect(column(table, "density")).toEqual([1e-3, 2e-3]);
  });

  it("handles untagged files", () => {
    const table = parseTaggedCsv("mu,m\n0.5,0.25\n");
    expect(table.figure).toBeNull();
    expect(table.rows).toEqual([[0.5, 0.25]]);
  });

  it("rejects ragged and non-numeric rows", () => {
    expect(() => parseTaggedCsv("a,b\n1\n")).toThrow(/fields/);
    expect(() => parseTaggedCsv("a,b\n1,x\n")).toThrow(/non-numeric/);
    expect(() => column(parseTaggedCsv("a,b\n1,2\n"), "c")).toThrow(/not found/);
  });
});
