// Application wiring: load the profile, render the views, compose and run
// what-if scenarios, and draw sweeps. At most one scenario request is in
// flight; newer submissions abort older ones.

import { ApiClient, ApiError } from './api.js';
import {
  ScenarioDraft,
  UiEdit,
  addEdit,
  describeEdit,
  emptyDraft,
  exportScenarioJson,
  quantumWarning,
  removeEdit,
  toScenarioDocument,
  withResult,
} from './scenario.js';
import {
  buildCallGraph,
  buildFlatTable,
  buildIdTable,
  buildResultPanel,
  buildSweepChart,
  el,
} from './render.js';
import { FlatSortKey, fmtPercent, fmtSeconds, sortFlatRows } from './format.js';
import type { IdRecord, ProfilePayload, SweepCurve } from './types.js';

const api = new ApiClient('');

interface AppState {
  profile: ProfilePayload;
  records: IdRecord[];
  draft: ScenarioDraft;
  flatSort: FlatSortKey;
  idFilter: { caller: string; callee: string };
  inflight: AbortController | null;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setBanner(message: string | null, retry?: () => void): void {
  const banner = byId('banner');
  banner.replaceChildren();
  if (message === null) {
    banner.hidden = true;
    return;
  }
  banner.hidden = false;
  banner.appendChild(el('span', undefined, message));
  if (retry) {
    const btn = el('button', 'mini', 'retry');
    btn.addEventListener('click', retry);
    banner.appendChild(btn);
  }
}

function renderHeader(state: AppState): void {
  byId('summary').textContent =
    `total ${fmtSeconds(state.profile.total_seconds)} · ` +
    `quantum ${state.profile.quantum} s · ` +
    `${state.profile.flat.length} functions · ${state.records.length} records`;
}

function renderFlat(state: AppState): void {
  const host = byId('flat-view');
  host.replaceChildren();
  if (state.profile.flat.length === 0) {
    host.appendChild(el('p', 'empty', 'profile recorded no time and no calls.'));
    return;
  }
  const rows = sortFlatRows(state.profile.flat, state.flatSort);
  host.appendChild(
    buildFlatTable(rows, (column) => {
      state.flatSort =
        column === 'function' ? 'name' : column === 'calls' ? 'calls' : 'time';
      renderFlat(state);
    }),
  );
}

function renderCallGraph(state: AppState): void {
  const host = byId('cg-view');
  host.replaceChildren();
  if (state.profile.callgraph.length === 0) {
    host.appendChild(el('p', 'empty', 'no call-graph entries.'));
    return;
  }
  host.appendChild(buildCallGraph(state.profile.callgraph));
}

function visibleRecords(state: AppState): IdRecord[] {
  const { caller, callee } = state.idFilter;
  return state.records.filter(
    (r) =>
      (!caller || r.caller.includes(caller)) &&
      (!callee || r.callee.includes(callee)),
  );
}

function renderIds(state: AppState): void {
  const host = byId('id-view');
  host.replaceChildren();
  host.appendChild(
    buildIdTable(visibleRecords(state), (min, max) => {
      (byId('edit-min') as HTMLInputElement).value = String(min);
      (byId('edit-max') as HTMLInputElement).value = String(max);
      (byId('edit-c') as HTMLInputElement).focus();
    }),
  );
}

function renderDraft(state: AppState): void {
  const list = byId('edit-list');
  list.replaceChildren();
  state.draft.edits.forEach((edit, index) => {
    const item = el('li');
    item.appendChild(el('span', undefined, describeEdit(edit)));
    const drop = el('button', 'mini', 'remove');
    drop.addEventListener('click', () => {
      state.draft = removeEdit(state.draft, index);
      renderDraft(state);
    });
    item.appendChild(drop);
    list.appendChild(item);
  });
  (byId('run-scenario') as HTMLButtonElement).disabled = state.draft.edits.length === 0;
  (byId('export-scenario') as HTMLButtonElement).disabled =
    state.draft.edits.length === 0;
  byId('dirty-flag').hidden = !state.draft.dirty || state.draft.lastResult === null;

  const resultHost = byId('result-view');
  resultHost.replaceChildren();
  if (state.draft.lastResult) {
    resultHost.appendChild(buildResultPanel(state.draft.lastResult));
  }
}

async function runScenario(state: AppState): Promise<void> {
  state.inflight?.abort();
  const controller = new AbortController();
  state.inflight = controller;
  setBanner(null);
  try {
    const doc = toScenarioDocument(state.draft, state.records);
    const result = await api.postWhatIf(doc, controller.signal);
    if (controller.signal.aborted) return;
    state.draft = withResult(state.draft, result);
    renderDraft(state);
  } catch (err) {
    if (controller.signal.aborted) return;
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    setBanner(`scenario failed — ${message}`);
  } finally {
    if (state.inflight === controller) state.inflight = null;
  }
}

function downloadScenario(state: AppState): void {
  const text = exportScenarioJson(state.draft, state.records);
  const blob = new Blob([text], { type: 'application/json' });
  const url = URL.createObjectURL(blob);
  const link = el('a');
  link.href = url;
  link.download = 'scenario.json';
  link.click();
  URL.revokeObjectURL(url);
}

function sliderFunctions(state: AppState): string[] {
  return state.profile.flat
    .filter((row) => row.self_seconds > 0)
    .map((row) => row.name);
}

function renderSweepShares(curve: SweepCurve, index: number | null): void {
  const host = byId('sweep-shares');
  host.replaceChildren();
  if (index === null) {
    host.appendChild(el('p', 'empty', 'hover the curve to inspect a point.'));
    return;
  }
  const point = curve.points[index];
  host.appendChild(
    el('h4', undefined,
       `r = ${point.r.toFixed(2)} -> total -${point.total_reduction_percent.toFixed(1)}%`),
  );
  const ul = el('ul', 'share-list');
  const entries = Object.entries(point.shares_percent).sort((a, b) => b[1] - a[1]);
  for (const [name, pct] of entries) {
    ul.appendChild(el('li', undefined, `${name}: ${fmtPercent(pct)}`));
  }
  host.appendChild(ul);
}

async function runSweep(state: AppState): Promise<void> {
  const target = (byId('sweep-target') as HTMLSelectElement).value;
  const chartHost = byId('sweep-chart');
  chartHost.replaceChildren(el('p', 'empty', 'sweeping…'));
  try {
    const curve = await api.postSweep(target);
    chartHost.replaceChildren(buildSweepChart(curve, (i) => renderSweepShares(curve, i)));
    byId('sweep-threshold').textContent =
      curve.threshold === null
        ? 'no crossover within the swept range'
        : `threshold r* = ${curve.threshold}: past this point ${curve.target} no longer dominates`;
    renderSweepShares(curve, null);
  } catch (err) {
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    chartHost.replaceChildren(el('p', 'error', `sweep failed — ${message}`));
  }
}

function wireControls(state: AppState): void {
  document.querySelectorAll<HTMLButtonElement>('nav button').forEach((btn) => {
    btn.addEventListener('click', () => {
      document.querySelectorAll('nav button').forEach((b) => b.classList.remove('active'));
      btn.classList.add('active');
      document.querySelectorAll<HTMLElement>('.tab').forEach((tab) => {
        tab.hidden = tab.id !== btn.dataset.tab;
      });
    });
  });

  for (const field of ['caller', 'callee'] as const) {
    const input = byId(`filter-${field}`) as HTMLInputElement;
    input.addEventListener('input', () => {
      state.idFilter = { ...state.idFilter, [field]: input.value.trim() };
      renderIds(state);
    });
  }

  byId('add-range-edit').addEventListener('click', () => {
    const min = Number((byId('edit-min') as HTMLInputElement).value);
    const max = Number((byId('edit-max') as HTMLInputElement).value);
    const c = Number((byId('edit-c') as HTMLInputElement).value);
    if (!Number.isInteger(min) || !Number.isInteger(max) || !Number.isInteger(c)) {
      setBanner('range edits need integer min/max ids and an integer sample count');
      return;
    }
    setBanner(null);
    state.draft = addEdit(state.draft, { mode: 'id-range', min, max, c });
    renderDraft(state);
  });

  const slider = byId('slider-pct') as HTMLInputElement;
  const sliderLabel = byId('slider-pct-label');
  slider.addEventListener('input', () => {
    sliderLabel.textContent = `-${slider.value}%`;
  });
  byId('add-slider-edit').addEventListener('click', () => {
    const fn = (byId('slider-fn') as HTMLSelectElement).value;
    const pct = Number(slider.value);
    state.draft = addEdit(state.draft, { mode: 'slider', fn, reductionPct: pct });
    renderDraft(state);
  });

  byId('add-arc-edit').addEventListener('click', () => {
    const caller = (byId('arc-caller') as HTMLInputElement).value.trim();
    const callee = (byId('arc-callee') as HTMLInputElement).value.trim();
    const seconds = Number((byId('arc-seconds') as HTMLInputElement).value);
    if (!caller || !callee || !(seconds >= 0)) {
      setBanner('arc edits need caller, callee, and a non-negative s/call');
      return;
    }
    const warning = quantumWarning(seconds, state.profile.quantum);
    byId('arc-warning').textContent = warning ?? '';
    setBanner(null);
    state.draft = addEdit(state.draft, {
      mode: 'arc-seconds', caller, callee, perCallSeconds: seconds,
    });
    renderDraft(state);
  });

  byId('run-scenario').addEventListener('click', () => void runScenario(state));
  byId('export-scenario').addEventListener('click', () => downloadScenario(state));
  byId('run-sweep').addEventListener('click', () => void runSweep(state));
}

async function boot(): Promise<void> {
  setBanner(null);
  let profile: ProfilePayload;
  let records: IdRecord[];
  try {
    [profile, records] = await Promise.all([
      api.getProfile(),
      api.getIds().then((doc) => doc.records),
    ]);
  } catch (err) {
    setBanner(`cannot reach the profile API — ${String(err)}`, () => void boot());
    return;
  }

  const state: AppState = {
    profile,
    records,
    draft: emptyDraft(),
    flatSort: 'time',
    idFilter: { caller: '', callee: '' },
    inflight: null,
  };

  renderHeader(state);
  renderFlat(state);
  renderCallGraph(state);
  renderIds(state);
  renderDraft(state);

  const select = byId('slider-fn') as HTMLSelectElement;
  select.replaceChildren();
  for (const name of sliderFunctions(state)) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  const sweepSelect = byId('sweep-target') as HTMLSelectElement;
  sweepSelect.replaceChildren();
  for (const name of sliderFunctions(state)) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    sweepSelect.appendChild(option);
  }

  wireControls(state);
}

void boot();
