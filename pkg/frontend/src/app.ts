/** DOM wiring: session picker, waveform canvas, click collection, commit,
 * and Draw-marker navigation. All protocol logic lives in the pure modules;
 * this file only moves state between them and the page. */

import { ApiClient, ApiError } from "./api.js";
import { render, tooltipText, viewTransform } from "./chart.js";
import { addClick, ClickState, emptyClicks, nextClickLabel, proposal, undoClick } from "./clicks.js";
import { initNav, jumpTo, markVerified, NavState, next, prev, progress, canNext, canPrev } from "./navigation.js";
import { annotationRegions, PhaseRegion } from "./regions.js";
import { xToIndex } from "./scale.js";
import { Annotation, ChannelName, CHANNEL_NAMES, SessionInfo, SlicePayload } from "./types.js";

interface AppState {
  sessions: SessionInfo[];
  sessionId: string | null;
  nav: NavState;
  slice: SlicePayload | null;
  clicks: ClickState;
  committed: Annotation[];
  visible: Record<ChannelName, boolean>;
  hoverIndex: number | null;
  error: string | null;
}

const state: AppState = {
  sessions: [],
  sessionId: null,
  nav: initNav(0),
  slice: null,
  clicks: emptyClicks(),
  committed: [],
  visible: { ax: true, ay: true, az: true, total: true, smooth_diff: true },
  hoverIndex: null,
  error: null,
};

const api = new ApiClient();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function canvas(): HTMLCanvasElement {
  return el<HTMLCanvasElement>("waveform");
}

function regionsToDraw(): PhaseRegion[] {
  const regions: PhaseRegion[] = [];
  for (const a of state.committed) {
    if (state.slice && a.b4 > state.slice.start && a.b1 < state.slice.end) {
      regions.push(...annotationRegions(a));
    }
  }
  const pending = proposal(state.clicks);
  if (pending) regions.push(...annotationRegions(pending));
  return regions;
}

function redraw(): void {
  const c = canvas();
  const ctx = c.getContext("2d");
  if (!ctx) return;
  if (!state.slice) {
    ctx.clearRect(0, 0, c.width, c.height);
    return;
  }
  render(ctx, state.slice, c.width, c.height, {
    visible: state.visible,
    regions: regionsToDraw(),
    clicks: state.clicks,
    hoverIndex: state.hoverIndex,
  });
}

function setHint(text: string | null): void {
  el("hint").textContent = text ?? "";
}

function setError(text: string | null): void {
  state.error = text;
  const banner = el("error");
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

function updateControls(): void {
  const prog = progress(state.nav);
  el("progress").textContent = state.nav.total
    ? `draw ${state.nav.current + 1} / ${state.nav.total} | verified ${prog.done}/${prog.total}`
    : "no draw markers";
  (el<HTMLButtonElement>("prev")).disabled = !canPrev(state.nav);
  (el<HTMLButtonElement>("next")).disabled = !canNext(state.nav);
  (el<HTMLButtonElement>("commit")).disabled = proposal(state.clicks) === null;
  (el<HTMLButtonElement>("undo")).disabled = state.clicks.pending.length === 0;
  const label = nextClickLabel(state.clicks);
  el("next-click").textContent = label
    ? `next click: ${label}`
    : "proposal ready: commit or undo";
}

async function loadSessions(): Promise<void> {
  state.sessions = await api.listSessions();
  const picker = el<HTMLSelectElement>("session");
  picker.innerHTML = "";
  for (const s of state.sessions) {
    const option = document.createElement("option");
    option.value = s.session_id;
    option.textContent = `${s.session_id} (${s.n_draw_markers} draws)`;
    picker.appendChild(option);
  }
  if (state.sessions.length) {
    await selectSession(state.sessions[0]!.session_id);
  }
}

async function selectSession(sessionId: string): Promise<void> {
  const info = state.sessions.find((s) => s.session_id === sessionId);
  state.sessionId = sessionId;
  state.nav = initNav(info ? info.n_draw_markers : 0);
  state.committed = await api.getAnnotations(sessionId);
  await loadSlice();
}

async function loadSlice(): Promise<void> {
  state.clicks = emptyClicks();
  setHint(null);
  if (!state.sessionId || state.nav.total === 0) {
    state.slice = null;
    redraw();
    updateControls();
    return;
  }
  try {
    state.slice = await api.getSlice(state.sessionId, state.nav.current);
    setError(null);
  } catch (err) {
    state.slice = null;
    setError(err instanceof Error ? err.message : String(err));
  }
  redraw();
  updateControls();
}

async function commit(): Promise<void> {
  const pending = proposal(state.clicks);
  if (!pending || !state.sessionId) return;
  try {
    const stored = await api.postAnnotation(state.sessionId, pending);
    state.committed.push(stored);
    state.nav = markVerified(state.nav, state.nav.current);
    state.clicks = emptyClicks();
    setHint("annotation committed");
    setError(null);
  } catch (err) {
    if (err instanceof ApiError) {
      setHint(`server rejected annotation: ${err.detail}`);
    } else {
      setError(err instanceof Error ? err.message : String(err));
    }
  }
  redraw();
  updateControls();
}

export function start(): void {
  const c = canvas();

  c.addEventListener("mousemove", (ev) => {
    if (!state.slice) return;
    const rect = c.getBoundingClientRect();
    const t = viewTransform(state.slice, c.width);
    state.hoverIndex = xToIndex(t, ((ev.clientX - rect.left) / rect.width) * c.width);
    el("tooltip").textContent = tooltipText(state.slice, state.hoverIndex);
    redraw();
  });
  c.addEventListener("mouseleave", () => {
    state.hoverIndex = null;
    el("tooltip").textContent = "";
    redraw();
  });
  c.addEventListener("click", (ev) => {
    if (!state.slice) return;
    const rect = c.getBoundingClientRect();
    const t = viewTransform(state.slice, c.width);
    const index = xToIndex(t, ((ev.clientX - rect.left) / rect.width) * c.width);
    state.clicks = addClick(state.clicks, index, state.slice.start, state.slice.end);
    setHint(state.clicks.hint);
    redraw();
    updateControls();
  });

  el("undo").addEventListener("click", () => {
    state.clicks = undoClick(state.clicks);
    setHint(state.clicks.hint);
    redraw();
    updateControls();
  });
  el("commit").addEventListener("click", () => void commit());
  el("prev").addEventListener("click", () => {
    state.nav = prev(state.nav);
    void loadSlice();
  });
  el("next").addEventListener("click", () => {
    state.nav = next(state.nav);
    void loadSlice();
  });
  el("jump").addEventListener("change", () => {
    const value = Number(el<HTMLInputElement>("jump").value);
    if (Number.isInteger(value) && value >= 1) {
      state.nav = jumpTo(state.nav, value - 1);
      void loadSlice();
    }
  });
  el("session").addEventListener("change", () => {
    void selectSession(el<HTMLSelectElement>("session").value);
  });

  for (const name of CHANNEL_NAMES) {
    const box = el<HTMLInputElement>(`toggle-${name}`);
    box.checked = state.visible[name];
    box.addEventListener("change", () => {
      state.visible[name] = box.checked;
      redraw();
    });
  }

  loadSessions().catch((err) => setError(err instanceof Error ? err.message : String(err)));
}
