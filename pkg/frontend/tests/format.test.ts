import { describe, expect, it } from 'vitest';

import {
  fmtDelta,
  fmtPerCall,
  fmtPercent,
  fmtSamples,
  fmtSeconds,
  sortFlatRows,
} from '../src/format.js';
import type { FlatRow } from '../src/types.js';

function row(name: string, self: number, calls: number): FlatRow {
  return {
    name,
    percent_time: 0,
    cumulative_seconds: 0,
    self_seconds: self,
    calls,
    self_per_call: calls ? self / calls : null,
    total_per_call: calls ? self / calls : null,
  };
}

describe('formatting', () => {
  it('seconds render with two decimals and a unit', () => {
    expect(fmtSeconds(2.64)).toBe('2.64 s');
    expect(fmtSeconds(9.344)).toBe('9.34 s');
  });

  it('percent renders with one decimal', () => {
    expect(fmtPercent(71.734)).toBe('71.7%');
  });

  it('a reduction renders as a minus badge', () => {
    expect(fmtDelta({ delta_percent: 71.73 })).toBe('-71.7%');
    expect(fmtDelta({ delta_percent: -3 })).toBe('+3.0%');
  });

  it('per-call cells stay blank for uncalled functions', () => {
    expect(fmtPerCall(null)).toBe('');
    expect(fmtPerCall(0.06)).toBe('0.06');
  });

  it('whole sample counts drop the decimals', () => {
    expect(fmtSamples(672)).toBe('672');
    expect(fmtSamples(458.666)).toBe('458.67');
  });
});

describe('flat table sorting', () => {
  const rows = [row('bb', 1, 3), row('aa', 1, 3), row('cc', 1, 9), row('dd', 5, 1)];

  it('default order is self desc, calls desc, name asc', () => {
    expect(sortFlatRows(rows, 'time').map((r) => r.name)).toEqual(
      ['dd', 'cc', 'aa', 'bb'],
    );
  });

  it('sort by name is alphabetical', () => {
    expect(sortFlatRows(rows, 'name').map((r) => r.name)).toEqual(
      ['aa', 'bb', 'cc', 'dd'],
    );
  });

  it('sort by calls', () => {
    expect(sortFlatRows(rows, 'calls')[0].name).toBe('cc');
  });

  it('does not mutate the input', () => {
    const copy = [...rows];
    sortFlatRows(rows, 'name');
    expect(rows).toEqual(copy);
  });
});
