/** Canvas waveform renderer. The smoothed-difference channel is the primary
 * trace (drawn last, full strength); raw channels render muted and can be
 * toggled. Markers overlay as dashed verticals, phase regions as shaded
 * spans, pending clicks as numbered boundary lines. */

import { ClickState } from "./clicks.js";
import { PhaseRegion, PHASE_COLORS } from "./regions.js";
import { fitScale, indexToX, valueToY, ViewTransform } from "./scale.js";
import { ChannelName, SlicePayload } from "./types.js";

export interface ChannelStyle {
  color: string;
  width: number;
}

export const CHANNEL_STYLES: Record<ChannelName, ChannelStyle> = {
  ax: { color: "#9c6f6f", width: 1 },
  ay: { color: "#6f9c74", width: 1 },
  az: { color: "#6f7d9c", width: 1 },
  total: { color: "#b08ed9", width: 1 },
  smooth_diff: { color: "#ffd166", width: 2.5 },
};

export interface RenderOptions {
  visible: Record<ChannelName, boolean>;
  regions: PhaseRegion[];
  clicks: ClickState;
  hoverIndex: number | null;
}

export function viewTransform(slice: SlicePayload, width: number): ViewTransform {
  return { start: slice.start, end: slice.end, width };
}

export function render(
  ctx: CanvasRenderingContext2D,
  slice: SlicePayload,
  width: number,
  height: number,
  options: RenderOptions,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#191d24";
  ctx.fillRect(0, 0, width, height);
  const t = viewTransform(slice, width);

  for (const region of options.regions) {
    const x0 = indexToX(t, region.start);
    const x1 = indexToX(t, region.end);
    ctx.fillStyle = PHASE_COLORS[region.phase];
    ctx.fillRect(x0, 0, x1 - x0, height);
  }

  const visibleColumns = (Object.keys(CHANNEL_STYLES) as ChannelName[])
    .filter((name) => options.visible[name])
    .map((name) => slice.channels[name]);
  const scale = fitScale(visibleColumns, height);

  for (const name of Object.keys(CHANNEL_STYLES) as ChannelName[]) {
    if (!options.visible[name] || name === "smooth_diff") continue;
    drawTrace(ctx, slice, t, scale, name, height);
  }
  if (options.visible.smooth_diff) {
    drawTrace(ctx, slice, t, scale, "smooth_diff", height);
  }

  for (const marker of slice.markers) {
    const x = indexToX(t, marker.idx);
    ctx.strokeStyle = marker.kind === "Draw" ? "#6fd3e0" : "#8f97a3";
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#aeb7c2";
    ctx.font = "11px sans-serif";
    ctx.fillText(marker.kind, Math.min(x + 3, width - 58), 14);
  }

  options.clicks.pending.forEach((index, k) => {
    const x = indexToX(t, index);
    ctx.strokeStyle = "#f2f4f8";
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
    ctx.fillStyle = "#f2f4f8";
    ctx.font = "12px sans-serif";
    ctx.fillText(`b${k + 1}`, x + 3, height - 8);
  });

  if (options.hoverIndex !== null) {
    const x = indexToX(t, options.hoverIndex);
    ctx.strokeStyle = "rgba(242,244,248,0.35)";
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
  }
}

function drawTrace(
  ctx: CanvasRenderingContext2D,
  slice: SlicePayload,
  t: ViewTransform,
  scale: { min: number; max: number; height: number },
  name: ChannelName,
  height: number,
): void {
  const style = CHANNEL_STYLES[name];
  const column = slice.channels[name];
  ctx.strokeStyle = style.color;
  ctx.lineWidth = style.width;
  ctx.beginPath();
  column.forEach((v, i) => {
    const x = indexToX(t, slice.start + i);
    const y = valueToY({ ...scale, height }, v);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

/** Tooltip line for a hovered sample: index plus milliseconds. */
export function tooltipText(slice: SlicePayload, index: number): string {
  const offset = index - slice.start;
  const ms = slice.t_ms[offset];
  const sd = slice.channels.smooth_diff[offset];
  const sdText = sd === undefined ? "" : `  smooth_diff ${sd.toFixed(4)}`;
  return `sample ${index}  (${ms} ms)${sdText}`;
}
