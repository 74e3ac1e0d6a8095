/** Typed client for the annotation API. The default slice geometry (150
 * samples back, 300 forward from a Draw marker) lives here, in one place. */

import { Annotation, MarkerInfo, SessionInfo, SlicePayload, validateSlice } from "./types.js";

export const SLICE_BEFORE = 150;
export const SLICE_AFTER = 300;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export function sliceUrl(sessionId: string, draw: number): string {
  return (
    `/api/sessions/${encodeURIComponent(sessionId)}/slice` +
    `?draw=${draw}&before=${SLICE_BEFORE}&after=${SLICE_AFTER}`
  );
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(url: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + url, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listSessions(): Promise<SessionInfo[]> {
    return this.request<SessionInfo[]>("/api/sessions");
  }

  async getSlice(sessionId: string, draw: number): Promise<SlicePayload> {
    const payload = await this.request<unknown>(sliceUrl(sessionId, draw));
    return validateSlice(payload);
  }

  getMarkers(sessionId: string): Promise<MarkerInfo[]> {
    return this.request<MarkerInfo[]>(`/api/sessions/${encodeURIComponent(sessionId)}/markers`);
  }

  postAnnotation(sessionId: string, a: Omit<Annotation, "session_id">): Promise<Annotation> {
    return this.request<Annotation>(`/api/sessions/${encodeURIComponent(sessionId)}/annotations`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(a),
    });
  }

  getAnnotations(sessionId: string): Promise<Annotation[]> {
    return this.request<Annotation[]>(`/api/sessions/${encodeURIComponent(sessionId)}/annotations`);
  }
}
