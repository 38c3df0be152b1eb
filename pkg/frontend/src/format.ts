// Display formatting and client-side table sorting. Numbers arrive final
// from the server; these helpers only shape them for the screen.

import type { FlatRow } from './types.js';

export function fmtSeconds(x: number): string {
  return `${x.toFixed(2)} s`;
}

export function fmtPercent(x: number): string {
  return `${x.toFixed(1)}%`;
}

export function fmtPerCall(x: number | null): string {
  return x === null ? '' : x.toFixed(2);
}

export function fmtSamples(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

export function fmtDelta(result: { delta_percent: number }): string {
  const sign = result.delta_percent >= 0 ? '-' : '+';
  return `${sign}${Math.abs(result.delta_percent).toFixed(1)}%`;
}

export type FlatSortKey = 'time' | 'calls' | 'name';

/** Default ordering is the server's (self desc, calls desc, name asc);
 *  header clicks re-sort client-side without touching the numbers. */
export function sortFlatRows(rows: FlatRow[], key: FlatSortKey): FlatRow[] {
  const sorted = [...rows];
  switch (key) {
    case 'time':
      sorted.sort(
        (a, b) =>
          b.self_seconds - a.self_seconds || b.calls - a.calls ||
          a.name.localeCompare(b.name),
      );
      break;
    case 'calls':
      sorted.sort((a, b) => b.calls - a.calls || a.name.localeCompare(b.name));
      break;
    case 'name':
      sorted.sort((a, b) => a.name.localeCompare(b.name));
      break;
  }
  return sorted;
}
