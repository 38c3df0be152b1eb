// Payload shapes of the profile analysis HTTP API. The server is the only
// source of numerical truth; the client renders these verbatim.

export interface FlatRow {
  name: string;
  percent_time: number;
  cumulative_seconds: number;
  self_seconds: number;
  calls: number;
  self_per_call: number | null;
  total_per_call: number | null;
}

export interface CgLine {
  name: string;
  index: number | null;
  self_seconds: number;
  children_seconds: number;
  calls: number | null;
  total_calls: number | null;
  cycle_internal: boolean;
}

export interface CgEntry {
  index: number;
  name: string;
  cycle_id: number | null;
  percent_time: number;
  self_seconds: number;
  children_seconds: number;
  called: number;
  per_call_seconds: number | null;
  callers: CgLine[];
  children: CgLine[];
  members: string[];
}

export interface ProfilePayload {
  flat: FlatRow[];
  callgraph: CgEntry[];
  total_seconds: number;
  quantum: number;
  unattributed_seconds: number;
  dropped_arcs: number;
}

export interface IdRecord {
  id: number;
  caller: string;
  callee: string;
  occurrence: number;
  samples: number;
  seconds: number;
}

export interface IdsPayload {
  records: IdRecord[];
}

export interface WhatIfResult {
  base_total_seconds: number;
  edited_total_seconds: number;
  delta_seconds: number;
  delta_percent: number;
  total_bin: number | null;
  shares_before_percent: Record<string, number>;
  shares_after_percent: Record<string, number>;
}

export interface SweepPoint {
  r: number;
  total_reduction_percent: number;
  shares_percent: Record<string, number>;
}

export interface SweepCurve {
  target: string;
  points: SweepPoint[];
  threshold: number | null;
}

// Scenario document schema accepted by POST /api/whatif and the CLI.
export type ScenarioEdit =
  | { kind: 'bin_range'; min: number; max: number; c: number }
  | { kind: 'per_id_values'; min: number; max: number; values: number[] }
  | { kind: 'arc_per_call'; caller: string; callee: string; per_call_seconds: number };

export interface ScenarioDocument {
  accex_scenario_version: 1;
  edits: ScenarioEdit[];
}
