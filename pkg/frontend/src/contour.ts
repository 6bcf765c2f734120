/**
 * Canvas rendering of the service-provided level-set grid: a heatmap of
 * barrier values with marching-squares curves at the two level values.
 * All values come from the response grid; this module only draws.
 */

import type { LevelSetPlot } from "./api.js";

function colorFor(t: number): string {
  // perceptually-reasonable blue -> yellow ramp
  const r = Math.round(40 + 215 * t);
  const g = Math.round(60 + 170 * t);
  const blue = Math.round(180 - 140 * t);
  return `rgb(${r},${g},${blue})`;
}

/** Line segments of the iso-curve value=level, in grid coordinates. */
export function isoSegments(values: number[][], level: number):
    [number, number, number, number][] {
  const segments: [number, number, number, number][] = [];
  const rows = values.length;
  const cols = rows ? values[0].length : 0;

  const cross = (a: number, b: number) => (a - level) * (b - level) < 0;
  const frac = (a: number, b: number) => (level - a) / (b - a);

  for (let i = 0; i + 1 < rows; i++) {
    for (let j = 0; j + 1 < cols; j++) {
      const corners = [
        values[i][j], values[i][j + 1], values[i + 1][j + 1], values[i + 1][j],
      ];
      const points: [number, number][] = [];
      // edges: top, right, bottom, left (x = column, y = row)
      if (cross(corners[0], corners[1])) points.push([j + frac(corners[0], corners[1]), i]);
      if (cross(corners[1], corners[2])) points.push([j + 1, i + frac(corners[1], corners[2])]);
      if (cross(corners[3], corners[2])) points.push([j + frac(corners[3], corners[2]), i + 1]);
      if (cross(corners[0], corners[3])) points.push([j, i + frac(corners[0], corners[3])]);
      for (let k = 0; k + 1 < points.length; k += 2) {
        segments.push([points[k][0], points[k][1], points[k + 1][0], points[k + 1][1]]);
      }
    }
  }
  return segments;
}

export function drawLevelSets(canvas: HTMLCanvasElement, plot: LevelSetPlot): void {
  const context = canvas.getContext("2d");
  if (!context) return;
  const { xs, ys, values } = plot;
  const rows = values.length;
  const cols = rows ? values[0].length : 0;
  if (!rows || !cols) return;

  let low = Infinity;
  let high = -Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v < low) low = v;
      if (v > high) high = v;
    }
  }
  const span = high - low || 1;

  const cellW = canvas.width / cols;
  const cellH = canvas.height / rows;
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      context.fillStyle = colorFor((values[i][j] - low) / span);
      // row 0 is the lowest y: flip vertically so y grows upward
      context.fillRect(j * cellW, canvas.height - (i + 1) * cellH, cellW + 1, cellH + 1);
    }
  }

  const drawIso = (level: number | null, style: string, dashed: boolean) => {
    if (level === null || level === undefined) return;
    context.strokeStyle = style;
    context.lineWidth = 2;
    context.setLineDash(dashed ? [6, 4] : []);
    context.beginPath();
    for (const [x1, y1, x2, y2] of isoSegments(values, level)) {
      context.moveTo((x1 + 0.5) * cellW, canvas.height - (y1 + 0.5) * cellH);
      context.lineTo((x2 + 0.5) * cellW, canvas.height - (y2 + 0.5) * cellH);
    }
    context.stroke();
    context.setLineDash([]);
  };
  drawIso(plot.gamma, "#1d4ed8", false);   // initial level set, solid blue
  drawIso(plot.lambda, "#dc2626", true);   // unsafe level set, dashed red

  context.fillStyle = "#111";
  context.font = "11px sans-serif";
  context.fillText(`x1: ${xs[0]} .. ${xs[xs.length - 1]}`, 6, canvas.height - 6);
  context.save();
  context.translate(12, 12);
  context.fillText(`x2: ${ys[0]} .. ${ys[ys.length - 1]}`, 0, 0);
  context.restore();
}
