/** Pixel <-> sample-index mapping for the waveform view. The x axis is in
 * sample indices; clicks snap to the nearest sample. */

export interface ViewTransform {
  /** First sample index in view (inclusive). */
  start: number;
  /** One past the last sample index in view. */
  end: number;
  /** Plot width in pixels. */
  width: number;
}

export function indexToX(t: ViewTransform, index: number): number {
  const n = t.end - t.start;
  return ((index - t.start + 0.5) / n) * t.width;
}

/** Nearest sample index for a pixel position, clamped into the view. */
export function xToIndex(t: ViewTransform, x: number): number {
  const n = t.end - t.start;
  const raw = t.start + (x / t.width) * n - 0.5;
  const snapped = Math.round(raw);
  return Math.min(t.end - 1, Math.max(t.start, snapped));
}

export interface ValueScale {
  min: number;
  max: number;
  height: number;
}

export function valueToY(s: ValueScale, v: number): number {
  const span = s.max - s.min || 1;
  return s.height - ((v - s.min) / span) * s.height;
}

/** Min/max over the visible columns with a small symmetric margin. */
export function fitScale(columns: number[][], height: number): ValueScale {
  let min = Infinity;
  let max = -Infinity;
  for (const col of columns) {
    for (const v of col) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (!isFinite(min) || !isFinite(max)) {
    min = -1;
    max = 1;
  }
  const pad = 0.08 * (max - min || 1);
  return { min: min - pad, max: max + pad, height };
}
