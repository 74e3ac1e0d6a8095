import { describe, expect, it } from "vitest";

import { annotationRegions } from "../src/regions.js";

describe("annotation regions", () => {
  it("maps four boundaries to three contiguous phases", () => {
    const regions = annotationRegions({ b1: 10, b2: 40, b3: 100, b4: 115 });
    expect(regions).toEqual([
      { phase: "draw", start: 10, end: 40 },
      { phase: "aim", start: 40, end: 100 },
      { phase: "release", start: 100, end: 115 },
    ]);
  });

  it("regions tile the annotated interval", () => {
    const regions = annotationRegions({ b1: 3, b2: 7, b3: 21, b4: 22 });
    expect(regions[0]!.end).toBe(regions[1]!.start);
    expect(regions[1]!.end).toBe(regions[2]!.start);
    expect(regions[0]!.start).toBe(3);
    expect(regions[2]!.end).toBe(22);
  });

  it("rejects unordered boundaries", () => {
    expect(() => annotationRegions({ b1: 40, b2: 10, b3: 100, b4: 115 })).toThrow(/b1 < b2/);
    expect(() => annotationRegions({ b1: 10, b2: 10, b3: 20, b4: 30 })).toThrow();
  });
});
