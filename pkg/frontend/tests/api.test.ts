/** Client behavior against an in-memory stand-in that implements the
 * documented API contract (same validation and shapes as the real backend,
 * which is integration-tested on the Python side). */

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, SLICE_AFTER, SLICE_BEFORE, sliceUrl } from "../src/api.js";
import { addClick, emptyClicks, proposal } from "../src/clicks.js";
import { annotationRegions } from "../src/regions.js";
import { Annotation, CHANNEL_NAMES, validateSlice } from "../src/types.js";

const N_SAMPLES = 2000;
const DRAW_CENTERS = [400, 900, 1400];

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Minimal contract double for the annotation API. */
function mockServer() {
  const stored: Annotation[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const u = new URL(url, "http://test");
    const sliceMatch = u.pathname.match(/^\/api\/sessions\/([^/]+)\/slice$/);
    if (sliceMatch) {
      const draw = Number(u.searchParams.get("draw") ?? 0);
      const before = Number(u.searchParams.get("before") ?? SLICE_BEFORE);
      const after = Number(u.searchParams.get("after") ?? SLICE_AFTER);
      const center = DRAW_CENTERS[draw];
      if (center === undefined) return jsonResponse(404, { detail: "draw index out of range" });
      const start = Math.max(0, center - before);
      const end = Math.min(N_SAMPLES, center + after);
      const n = end - start;
      const column = (scale: number) =>
        Array.from({ length: n }, (_, i) => Math.sin((start + i) / 30) * scale);
      return jsonResponse(200, {
        session_id: sliceMatch[1],
        start,
        end,
        center,
        t_ms: Array.from({ length: n }, (_, i) => (start + i) * 50),
        channels: Object.fromEntries(CHANNEL_NAMES.map((name, k) => [name, column(k + 1)])),
        markers: [{ t_ms: center * 50, kind: "Draw", idx: center }],
      });
    }
    const annMatch = u.pathname.match(/^\/api\/sessions\/([^/]+)\/annotations$/);
    if (annMatch) {
      if (init?.method === "POST") {
        const body = JSON.parse(String(init.body)) as Omit<Annotation, "session_id">;
        if (!(body.b1 < body.b2 && body.b2 < body.b3 && body.b3 < body.b4)) {
          return jsonResponse(422, {
            detail: `annotation boundaries must satisfy b1 < b2 < b3 < b4, got (${body.b1}, ${body.b2}, ${body.b3}, ${body.b4})`,
          });
        }
        const stored_ann = { session_id: annMatch[1]!, ...body };
        stored.push(stored_ann);
        return jsonResponse(200, stored_ann);
      }
      return jsonResponse(200, stored.filter((a) => a.session_id === annMatch[1]));
    }
    return jsonResponse(404, { detail: "unknown endpoint" });
  };
  return { fetchFn, stored };
}

describe("default view window", () => {
  it("requests exactly 150 samples before and 300 after the draw marker", () => {
    expect(sliceUrl("s1", 2)).toBe("/api/sessions/s1/slice?draw=2&before=150&after=300");
  });

  it("renders a 450-sample slice centered on the marker", async () => {
    const { fetchFn } = mockServer();
    const api = new ApiClient("", fetchFn);
    const slice = await api.getSlice("s1", 0);
    expect(slice.end - slice.start).toBe(SLICE_BEFORE + SLICE_AFTER);
    expect(slice.center - slice.start).toBe(SLICE_BEFORE);
    expect(slice.end - slice.center).toBe(SLICE_AFTER);
    for (const name of CHANNEL_NAMES) {
      expect(slice.channels[name]).toHaveLength(450);
    }
  });
});

describe("annotation round trip", () => {
  it("four clicks -> post -> re-fetch -> identical regions", async () => {
    const { fetchFn } = mockServer();
    const api = new ApiClient("", fetchFn);
    const slice = await api.getSlice("s1", 0);

    let clicks = emptyClicks();
    for (const index of [280, 310, 370, 385]) {
      clicks = addClick(clicks, index, slice.start, slice.end);
    }
    const pending = proposal(clicks);
    expect(pending).not.toBeNull();
    const previewRegions = annotationRegions(pending!);

    await api.postAnnotation("s1", pending!);
    const fetched = await api.getAnnotations("s1");
    expect(fetched).toHaveLength(1);
    expect(annotationRegions(fetched[0]!)).toEqual(previewRegions);
  });

  it("server rejects out-of-order boundaries with 422 naming the invariant", async () => {
    const { fetchFn } = mockServer();
    const api = new ApiClient("", fetchFn);
    try {
      await api.postAnnotation("s1", { b1: 40, b2: 10, b3: 100, b4: 115 });
      expect.unreachable("expected a 422");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(422);
      expect((err as ApiError).detail).toMatch(/b1 < b2 < b3 < b4/);
    }
  });
});

describe("payload validation", () => {
  it("flags malformed slices instead of rendering them", () => {
    expect(() => validateSlice({ start: 0 })).toThrow(/malformed/);
    expect(() =>
      validateSlice({
        session_id: "s",
        start: 0,
        end: 3,
        center: 1,
        t_ms: [0, 50],
        channels: {},
        markers: [],
      }),
    ).toThrow(/length mismatch/);
  });
});
