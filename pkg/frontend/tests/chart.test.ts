import { describe, expect, it } from 'vitest';

import {
  DEFAULT_GEOMETRY,
  nearestPointIndex,
  plotWidth,
  polylinePoints,
  thresholdMarkerX,
  xForR,
  yForPct,
} from '../src/chart.js';
import type { SweepCurve, SweepPoint } from '../src/types.js';

function point(r: number, pct: number): SweepPoint {
  return { r, total_reduction_percent: pct, shares_percent: {} };
}

describe('chart coordinates', () => {
  it('maps the r axis onto the plot area', () => {
    const g = DEFAULT_GEOMETRY;
    expect(xForR(0, g)).toBe(g.padLeft);
    expect(xForR(1, g)).toBe(g.padLeft + plotWidth(g));
    expect(xForR(0.5, g)).toBeCloseTo(g.padLeft + plotWidth(g) / 2, 10);
  });

  it('maps percentages with 0 at the bottom', () => {
    expect(yForPct(0)).toBeGreaterThan(yForPct(100));
  });

  it('polyline emits one coordinate pair per point', () => {
    const pts = polylinePoints([point(0, 0), point(0.5, 40), point(1, 80)]);
    expect(pts.split(' ')).toHaveLength(3);
  });

  it('marker lands exactly at the server threshold r*', () => {
    const curve: SweepCurve = {
      target: 'hot',
      points: [point(0, 0), point(0.5, 40), point(0.8, 64), point(1, 80)],
      threshold: 0.8,
    };
    // the marker must sit on the same x as the curve's own r = 0.8 point
    expect(thresholdMarkerX(curve)).toBe(xForR(0.8));
  });

  it('no marker without a crossover', () => {
    const curve: SweepCurve = { target: 'hot', points: [point(0, 0)], threshold: null };
    expect(thresholdMarkerX(curve)).toBeNull();
  });

  it('marker at the origin when the threshold is zero', () => {
    const curve: SweepCurve = {
      target: 'cool', points: [point(0, 0), point(1, 10)], threshold: 0,
    };
    expect(thresholdMarkerX(curve)).toBe(xForR(0));
  });

  it('hover resolves to the nearest swept point', () => {
    const points = [point(0, 0), point(0.5, 40), point(1, 80)];
    expect(nearestPointIndex(points, xForR(0.5) + 1)).toBe(1);
    expect(nearestPointIndex(points, xForR(0) - 50)).toBe(0);
    expect(nearestPointIndex(points, xForR(1) + 50)).toBe(2);
  });
});
