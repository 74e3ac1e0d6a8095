/** Payload shapes of the annotation API (the only backend surface we touch). */

export interface SessionInfo {
  session_id: string;
  subject_id: string;
  round_id: string;
  n_samples: number;
  n_draw_markers: number;
}

export interface MarkerInfo {
  t_ms: number;
  kind: "ExpStart" | "ExpEnd" | "Draw" | "Release";
  idx: number;
}

export type ChannelName = "ax" | "ay" | "az" | "total" | "smooth_diff";

export interface SlicePayload {
  session_id: string;
  start: number;
  end: number;
  center: number;
  t_ms: number[];
  channels: Record<ChannelName, number[]>;
  markers: MarkerInfo[];
}

export interface Annotation {
  session_id: string;
  b1: number;
  b2: number;
  b3: number;
  b4: number;
}

export const CHANNEL_NAMES: ChannelName[] = ["ax", "ay", "az", "total", "smooth_diff"];

/** Runtime check for slice payloads; a malformed response must surface as a
 * visible error state, not a blank chart. */
export function validateSlice(payload: unknown): SlicePayload {
  const p = payload as SlicePayload;
  if (
    !p ||
    typeof p.start !== "number" ||
    typeof p.end !== "number" ||
    !Array.isArray(p.t_ms) ||
    !p.channels ||
    !Array.isArray(p.markers)
  ) {
    throw new Error("malformed slice payload");
  }
  const n = p.end - p.start;
  if (p.t_ms.length !== n) {
    throw new Error(`slice length mismatch: ${p.t_ms.length} timestamps for ${n} samples`);
  }
  for (const name of CHANNEL_NAMES) {
    const col = p.channels[name];
    if (!Array.isArray(col) || col.length !== n) {
      throw new Error(`slice channel ${name} missing or wrong length`);
    }
  }
  return p;
}
