/** Mapping from four boundary indices to the three shaded phase regions,
 * mirroring the server-side segment expansion exactly. */

export type Phase = "draw" | "aim" | "release";

export interface PhaseRegion {
  phase: Phase;
  start: number;
  end: number;
}

export const PHASE_COLORS: Record<Phase, string> = {
  draw: "rgba(86, 156, 214, 0.25)",
  aim: "rgba(120, 200, 120, 0.25)",
  release: "rgba(230, 126, 110, 0.30)",
};

export function annotationRegions(a: { b1: number; b2: number; b3: number; b4: number }): PhaseRegion[] {
  if (!(a.b1 < a.b2 && a.b2 < a.b3 && a.b3 < a.b4)) {
    throw new Error(`boundaries must satisfy b1 < b2 < b3 < b4, got ${a.b1}, ${a.b2}, ${a.b3}, ${a.b4}`);
  }
  return [
    { phase: "draw", start: a.b1, end: a.b2 },
    { phase: "aim", start: a.b2, end: a.b3 },
    { phase: "release", start: a.b3, end: a.b4 },
  ];
}
