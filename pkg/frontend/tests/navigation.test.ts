import { describe, expect, it } from "vitest";

import {
  canNext,
  canPrev,
  initNav,
  jumpTo,
  markVerified,
  next,
  prev,
  progress,
} from "../src/navigation.js";

describe("draw-marker navigation", () => {
  it("offers one stop per draw marker", () => {
    let nav = initNav(9);
    const visited = [nav.current];
    while (canNext(nav)) {
      nav = next(nav);
      visited.push(nav.current);
    }
    expect(visited).toEqual([0, 1, 2, 3, 4, 5, 6, 7, 8]);
  });

  it("disables next at the end and prev at the start", () => {
    let nav = initNav(3);
    expect(canPrev(nav)).toBe(false);
    nav = jumpTo(nav, 2);
    expect(canNext(nav)).toBe(false);
    expect(next(nav).current).toBe(2);
    expect(prev(initNav(3)).current).toBe(0);
  });

  it("jumps to a marker by index and ignores out-of-range jumps", () => {
    let nav = initNav(5);
    nav = jumpTo(nav, 3);
    expect(nav.current).toBe(3);
    expect(jumpTo(nav, 17).current).toBe(3);
    expect(jumpTo(nav, -1).current).toBe(3);
  });

  it("tracks verified progress", () => {
    let nav = initNav(4);
    nav = markVerified(nav, 0);
    nav = markVerified(nav, 2);
    nav = markVerified(nav, 2);
    expect(progress(nav)).toEqual({ done: 2, total: 4 });
  });
});
