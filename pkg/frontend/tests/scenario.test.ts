import { describe, expect, it } from 'vitest';

import {
  addEdit,
  describeEdit,
  emptyDraft,
  exportScenarioJson,
  quantumWarning,
  recordRangeForFunction,
  removeEdit,
  toScenarioDocument,
  withResult,
} from '../src/scenario.js';
import type { IdRecord, WhatIfResult } from '../src/types.js';

// the worked-example record table as GET /api/ids returns it
const RECORDS: IdRecord[] = [
  { id: 1, caller: 'start', callee: 'func4', occurrence: 1, samples: 146, seconds: 1.46 },
  { id: 2, caller: 'func4', callee: 'func5', occurrence: 1, samples: 336, seconds: 3.36 },
  { id: 3, caller: 'func4', callee: 'func5', occurrence: 2, samples: 336, seconds: 3.36 },
  { id: 4, caller: 'start', callee: 'func5', occurrence: 1, samples: 16, seconds: 0.16 },
  { id: 5, caller: '<spontaneous>', callee: 'start', occurrence: 1, samples: 100, seconds: 1.0 },
];

describe('scenario drafting', () => {
  it('serializes an id-range edit to the wire schema', () => {
    const draft = addEdit(emptyDraft(), { mode: 'id-range', min: 2, max: 3, c: 1 });
    expect(toScenarioDocument(draft, RECORDS)).toEqual({
      accex_scenario_version: 1,
      edits: [{ kind: 'bin_range', min: 2, max: 3, c: 1 }],
    });
  });

  it('exported JSON matches the CLI scenario file for the same edit', () => {
    const draft = addEdit(emptyDraft(), { mode: 'id-range', min: 2, max: 3, c: 1 });
    const exported = JSON.parse(exportScenarioJson(draft, RECORDS));
    expect(exported).toEqual({
      accex_scenario_version: 1,
      edits: [{ kind: 'bin_range', min: 2, max: 3, c: 1 }],
    });
  });

  it('converts a slider edit into per-id replacement values', () => {
    const draft = addEdit(emptyDraft(), { mode: 'slider', fn: 'func5', reductionPct: 50 });
    expect(toScenarioDocument(draft, RECORDS)).toEqual({
      accex_scenario_version: 1,
      edits: [{ kind: 'per_id_values', min: 2, max: 4, values: [168, 168, 8] }],
    });
  });

  it('slider at 0% keeps every sample count', () => {
    const draft = addEdit(emptyDraft(), { mode: 'slider', fn: 'func5', reductionPct: 0 });
    const doc = toScenarioDocument(draft, RECORDS);
    expect(doc.edits[0]).toEqual({
      kind: 'per_id_values', min: 2, max: 4, values: [336, 336, 16],
    });
  });

  it('serializes arc edits', () => {
    const draft = addEdit(emptyDraft(), {
      mode: 'arc-seconds', caller: 'func4', callee: 'func5', perCallSeconds: 0.01,
    });
    expect(toScenarioDocument(draft, RECORDS).edits[0]).toEqual({
      kind: 'arc_per_call', caller: 'func4', callee: 'func5', per_call_seconds: 0.01,
    });
  });

  it('finds the contiguous record range of a function', () => {
    expect(recordRangeForFunction(RECORDS, 'func5')).toEqual({ min: 2, max: 4 });
    expect(recordRangeForFunction(RECORDS, 'ghost')).toBeNull();
  });

  it('add/remove keep the draft immutable and dirty', () => {
    const base = emptyDraft();
    const one = addEdit(base, { mode: 'id-range', min: 1, max: 1, c: 0 });
    expect(base.edits).toHaveLength(0);
    expect(one.dirty).toBe(true);
    const none = removeEdit(one, 0);
    expect(none.edits).toHaveLength(0);
  });

  it('a result clears the dirty flag until the next edit', () => {
    const result = { delta_percent: 0 } as WhatIfResult;
    let draft = addEdit(emptyDraft(), { mode: 'id-range', min: 1, max: 1, c: 0 });
    draft = withResult(draft, result);
    expect(draft.dirty).toBe(false);
    draft = addEdit(draft, { mode: 'id-range', min: 2, max: 2, c: 0 });
    expect(draft.dirty).toBe(true);
  });

  it('describes edits for the scenario list', () => {
    expect(describeEdit({ mode: 'id-range', min: 2, max: 3, c: 1 })).toContain('ids 2-3');
    expect(describeEdit({ mode: 'slider', fn: 'hot', reductionPct: 30 })).toContain('-30%');
    expect(describeEdit({
      mode: 'arc-seconds', caller: 'a', callee: 'b', perCallSeconds: 0.5,
    })).toContain('a -> b');
  });
});

describe('quantum warnings', () => {
  it('silent on whole-sample times', () => {
    expect(quantumWarning(0.03, 0.01)).toBeNull();
    expect(quantumWarning(0, 0.01)).toBeNull();
  });

  it('warns and names the rounded sample count otherwise', () => {
    const warning = quantumWarning(0.017, 0.01);
    expect(warning).toContain('2 samples/call');
  });

  it('a positive request never rounds down to zero', () => {
    const warning = quantumWarning(0.001, 0.01);
    expect(warning).toContain('1 samples/call');
  });
});
