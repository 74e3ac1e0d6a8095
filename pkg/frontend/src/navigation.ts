/** Draw-marker navigation: one stop per Draw marker, walked in order until
 * every stop has been verified (annotated or explicitly skipped). */

export interface NavState {
  total: number;
  current: number;
  verified: boolean[];
}

export function initNav(totalDraws: number): NavState {
  return { total: totalDraws, current: 0, verified: new Array(totalDraws).fill(false) };
}

export function canPrev(nav: NavState): boolean {
  return nav.current > 0;
}

export function canNext(nav: NavState): boolean {
  return nav.current < nav.total - 1;
}

export function next(nav: NavState): NavState {
  if (!canNext(nav)) return nav;
  return { ...nav, current: nav.current + 1 };
}

export function prev(nav: NavState): NavState {
  if (!canPrev(nav)) return nav;
  return { ...nav, current: nav.current - 1 };
}

export function jumpTo(nav: NavState, index: number): NavState {
  if (index < 0 || index >= nav.total) return nav;
  return { ...nav, current: index };
}

export function markVerified(nav: NavState, index: number): NavState {
  if (index < 0 || index >= nav.total) return nav;
  const verified = [...nav.verified];
  verified[index] = true;
  return { ...nav, verified };
}

export function progress(nav: NavState): { done: number; total: number } {
  return { done: nav.verified.filter(Boolean).length, total: nav.total };
}
