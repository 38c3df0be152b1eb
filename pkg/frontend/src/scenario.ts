// Scenario drafting: the UI composes edits locally and serializes them to
// the exact document the server and the CLI accept. No time math happens
// here beyond converting UI gestures into record sample counts.

import type { IdRecord, ScenarioDocument, ScenarioEdit, WhatIfResult } from './types.js';

export type UiEdit =
  | { mode: 'id-range'; min: number; max: number; c: number }
  | { mode: 'slider'; fn: string; reductionPct: number }
  | { mode: 'arc-seconds'; caller: string; callee: string; perCallSeconds: number };

export interface ScenarioDraft {
  edits: UiEdit[];
  dirty: boolean;
  lastResult: WhatIfResult | null;
}

export function emptyDraft(): ScenarioDraft {
  return { edits: [], dirty: false, lastResult: null };
}

export function addEdit(draft: ScenarioDraft, edit: UiEdit): ScenarioDraft {
  return { ...draft, edits: [...draft.edits, edit], dirty: true };
}

export function removeEdit(draft: ScenarioDraft, index: number): ScenarioDraft {
  const edits = draft.edits.filter((_, i) => i !== index);
  return { ...draft, edits, dirty: true };
}

export function withResult(draft: ScenarioDraft, result: WhatIfResult): ScenarioDraft {
  return { ...draft, dirty: false, lastResult: result };
}

export function describeEdit(edit: UiEdit): string {
  switch (edit.mode) {
    case 'id-range':
      return edit.min === edit.max
        ? `id ${edit.min} -> ${edit.c} samples`
        : `ids ${edit.min}-${edit.max} -> ${edit.c} samples each`;
    case 'slider':
      return `${edit.fn}: self time -${edit.reductionPct}%`;
    case 'arc-seconds':
      return `${edit.caller} -> ${edit.callee}: ${edit.perCallSeconds} s/call`;
  }
}

/** Record ids that belong to one function's self time (contiguous by
 *  construction: records sort by callee first). */
export function recordRangeForFunction(
  records: IdRecord[],
  fn: string,
): { min: number; max: number } | null {
  const ids = records.filter((r) => r.callee === fn).map((r) => r.id);
  if (ids.length === 0) return null;
  return { min: Math.min(...ids), max: Math.max(...ids) };
}

/** Serialize the draft into the wire schema. Slider edits become explicit
 *  per-id replacement values computed from the record table. */
export function toScenarioDocument(
  draft: ScenarioDraft,
  records: IdRecord[],
): ScenarioDocument {
  const edits: ScenarioEdit[] = draft.edits.map((edit) => {
    switch (edit.mode) {
      case 'id-range':
        return { kind: 'bin_range', min: edit.min, max: edit.max, c: edit.c };
      case 'arc-seconds':
        return {
          kind: 'arc_per_call',
          caller: edit.caller,
          callee: edit.callee,
          per_call_seconds: edit.perCallSeconds,
        };
      case 'slider': {
        const range = recordRangeForFunction(records, edit.fn);
        if (!range) {
          throw new Error(`no records for function ${edit.fn}`);
        }
        const keep = 1 - edit.reductionPct / 100;
        const values = records
          .filter((r) => r.callee === edit.fn)
          .sort((a, b) => a.id - b.id)
          .map((r) => Math.round(r.samples * keep));
        return { kind: 'per_id_values', min: range.min, max: range.max, values };
      }
    }
  });
  return { accex_scenario_version: 1, edits };
}

export function exportScenarioJson(draft: ScenarioDraft, records: IdRecord[]): string {
  return JSON.stringify(toScenarioDocument(draft, records), null, 2) + '\n';
}

/** Mirror of the server's whole-sample rule: warn when an absolute per-call
 *  time is not a multiple of the sampling quantum (the server rounds). */
export function quantumWarning(seconds: number, quantum: number): string | null {
  const samples = seconds / quantum;
  if (Math.abs(samples - Math.round(samples)) < 1e-9) return null;
  const rounded = Math.max(seconds > 0 ? 1 : 0, Math.round(samples));
  return (
    `${seconds} s is not a whole number of ${quantum} s samples; ` +
    `the server will use ${rounded} samples/call`
  );
}
