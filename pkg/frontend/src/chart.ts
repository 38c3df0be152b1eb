// Sweep chart geometry: pure coordinate math so the marker and hover
// behavior are testable without a DOM. The SVG itself is assembled in
// render.ts from these numbers.

import type { SweepCurve, SweepPoint } from './types.js';

export interface ChartGeometry {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_GEOMETRY: ChartGeometry = {
  width: 560,
  height: 280,
  padLeft: 48,
  padRight: 16,
  padTop: 12,
  padBottom: 32,
};

export function plotWidth(g: ChartGeometry): number {
  return g.width - g.padLeft - g.padRight;
}

export function plotHeight(g: ChartGeometry): number {
  return g.height - g.padTop - g.padBottom;
}

/** x pixel for a reduction fraction r in [0, 1]. */
export function xForR(r: number, g: ChartGeometry = DEFAULT_GEOMETRY): number {
  return g.padLeft + r * plotWidth(g);
}

/** y pixel for a total-reduction percentage in [0, 100]. */
export function yForPct(pct: number, g: ChartGeometry = DEFAULT_GEOMETRY): number {
  return g.padTop + (1 - pct / 100) * plotHeight(g);
}

export function polylinePoints(
  points: SweepPoint[],
  g: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  return points
    .map((p) => `${xForR(p.r, g).toFixed(2)},${yForPct(p.total_reduction_percent, g).toFixed(2)}`)
    .join(' ');
}

/** x pixel of the crossover marker; null when the sweep never crossed.
 *  The marker sits exactly at the server-reported threshold r*. */
export function thresholdMarkerX(
  curve: SweepCurve,
  g: ChartGeometry = DEFAULT_GEOMETRY,
): number | null {
  if (curve.threshold === null) return null;
  return xForR(curve.threshold, g);
}

/** Index of the sweep point nearest to a pixel x (for hover lookups). */
export function nearestPointIndex(
  points: SweepPoint[],
  x: number,
  g: ChartGeometry = DEFAULT_GEOMETRY,
): number {
  let best = 0;
  let bestDist = Infinity;
  points.forEach((p, i) => {
    const d = Math.abs(xForR(p.r, g) - x);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  });
  return best;
}

export function axisTicks(g: ChartGeometry = DEFAULT_GEOMETRY): {
  x: { r: number; px: number }[];
  y: { pct: number; px: number }[];
} {
  const x = [0, 0.25, 0.5, 0.75, 1].map((r) => ({ r, px: xForR(r, g) }));
  const y = [0, 25, 50, 75, 100].map((pct) => ({ pct, px: yForPct(pct, g) }));
  return { x, y };
}
