/** Four-click collection state machine.
 *
 * Clicks map to the phase boundaries in order: draw start, draw end / aim
 * start, aim end / release start, release end. Pending clicks are strictly
 * increasing sample indices inside the current slice; violations are rejected
 * with a hint and leave the collected count unchanged. Four clicks form a
 * proposal that is never auto-committed.
 */

export interface ClickState {
  /** Strictly increasing sample indices, at most four. */
  pending: number[];
  /** Inline feedback for the last interaction, or null. */
  hint: string | null;
}

export const CLICK_LABELS = [
  "draw start",
  "draw end / aim start",
  "aim end / release start",
  "release end",
] as const;

export function emptyClicks(): ClickState {
  return { pending: [], hint: null };
}

export function addClick(state: ClickState, index: number, sliceStart: number, sliceEnd: number): ClickState {
  if (state.pending.length >= 4) {
    return { pending: state.pending, hint: "four boundaries already collected; commit or undo" };
  }
  if (index < sliceStart || index >= sliceEnd) {
    return { pending: state.pending, hint: "click outside the visible slice ignored" };
  }
  const last = state.pending[state.pending.length - 1];
  if (last !== undefined && index <= last) {
    return {
      pending: state.pending,
      hint: `boundary ${state.pending.length + 1} must lie right of boundary ${state.pending.length}`,
    };
  }
  return { pending: [...state.pending, index], hint: null };
}

export function undoClick(state: ClickState): ClickState {
  if (state.pending.length === 0) {
    return { pending: [], hint: "nothing to undo" };
  }
  return { pending: state.pending.slice(0, -1), hint: null };
}

export function nextClickLabel(state: ClickState): string | null {
  return state.pending.length < 4 ? CLICK_LABELS[state.pending.length]! : null;
}

export interface Proposal {
  b1: number;
  b2: number;
  b3: number;
  b4: number;
}

/** The complete four-click proposal, or null while clicks are missing. */
export function proposal(state: ClickState): Proposal | null {
  if (state.pending.length !== 4) return null;
  const [b1, b2, b3, b4] = state.pending as [number, number, number, number];
  return { b1, b2, b3, b4 };
}
