// DOM construction for tables, share bars, and the sweep chart. Everything
// here is presentation; values render exactly as the API returned them.

import {
  DEFAULT_GEOMETRY,
  axisTicks,
  nearestPointIndex,
  polylinePoints,
  thresholdMarkerX,
  xForR,
  yForPct,
} from './chart.js';
import { fmtDelta, fmtPerCall, fmtPercent, fmtSamples, fmtSeconds } from './format.js';
import type {
  CgEntry,
  FlatRow,
  IdRecord,
  SweepCurve,
  WhatIfResult,
} from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function headerRow(labels: string[], onClick?: (label: string) => void): HTMLTableRowElement {
  const tr = el('tr');
  for (const label of labels) {
    const th = el('th', onClick ? 'sortable' : undefined, label);
    if (onClick) th.addEventListener('click', () => onClick(label));
    tr.appendChild(th);
  }
  return tr;
}

function cells(tr: HTMLTableRowElement, values: string[], numericFrom = 1): void {
  values.forEach((v, i) => {
    tr.appendChild(el('td', i >= numericFrom ? 'num' : undefined, v));
  });
}

export function buildFlatTable(
  rows: FlatRow[],
  onSort: (column: string) => void,
): HTMLTableElement {
  const table = el('table', 'data-table');
  table.appendChild(
    headerRow(['function', '% time', 'self (s)', 'calls', 'self/call', 'total/call'], onSort),
  );
  for (const row of rows) {
    const tr = el('tr');
    cells(tr, [
      row.name,
      fmtPercent(row.percent_time),
      row.self_seconds.toFixed(2),
      row.calls > 0 ? String(row.calls) : '',
      fmtPerCall(row.self_per_call),
      fmtPerCall(row.total_per_call),
    ]);
    table.appendChild(tr);
  }
  return table;
}

export function buildCallGraph(entries: CgEntry[]): HTMLElement {
  const root = el('div', 'cg-entries');
  for (const entry of entries) {
    const box = el('details', 'cg-entry');
    const summary = el('summary');
    summary.appendChild(el('span', 'cg-index', `[${entry.index}]`));
    summary.appendChild(el('span', 'cg-name', entry.name));
    summary.appendChild(
      el(
        'span',
        'cg-stats',
        `${fmtPercent(entry.percent_time)} · self ${entry.self_seconds.toFixed(2)}` +
          ` · children ${entry.children_seconds.toFixed(2)}` +
          (entry.called > 0 ? ` · called ${entry.called}` : '') +
          (entry.per_call_seconds !== null
            ? ` · ${entry.per_call_seconds.toFixed(2)} s/call`
            : ''),
      ),
    );
    box.appendChild(summary);

    const detail = el('div', 'cg-detail');
    const addLines = (title: string, lines: CgEntry['callers']) => {
      if (lines.length === 0) return;
      detail.appendChild(el('h4', undefined, title));
      const ul = el('ul');
      for (const line of lines) {
        const label =
          `${line.name}` +
          (line.index !== null ? ` [${line.index}]` : '') +
          (line.cycle_internal
            ? ' (cycle-internal)'
            : ` — self ${line.self_seconds.toFixed(2)}, children ${line.children_seconds.toFixed(2)}` +
              (line.calls !== null
                ? `, calls ${line.calls}${line.total_calls ? '/' + line.total_calls : ''}`
                : ''));
        ul.appendChild(el('li', undefined, label));
      }
      detail.appendChild(ul);
    };
    addLines('callers', entry.callers);
    addLines('children', entry.children);
    if (entry.members.length > 0) {
      detail.appendChild(el('p', 'cg-members', `members: ${entry.members.join(', ')}`));
    }
    box.appendChild(detail);
    root.appendChild(box);
  }
  return root;
}

export function buildIdTable(
  records: IdRecord[],
  onEditRange: (min: number, max: number) => void,
): HTMLTableElement {
  const table = el('table', 'data-table id-table');
  table.appendChild(headerRow(['id', 'caller', 'callee', 'occ', 'samples', 'seconds', '']));
  for (const record of records) {
    const tr = el('tr');
    cells(tr, [
      String(record.id),
      record.caller,
      record.callee,
      String(record.occurrence),
      fmtSamples(record.samples),
      record.seconds.toFixed(2),
    ], 3);
    tr.children[0].className = 'num';
    const action = el('td');
    const btn = el('button', 'mini', 'edit');
    btn.addEventListener('click', () => onEditRange(record.id, record.id));
    action.appendChild(btn);
    tr.appendChild(action);
    table.appendChild(tr);
  }
  return table;
}

export function buildShareBars(
  before: Record<string, number>,
  after: Record<string, number>,
): HTMLElement {
  const wrap = el('div', 'share-bars');
  const names = Array.from(new Set([...Object.keys(before), ...Object.keys(after)]));
  names.sort((a, b) => (before[b] ?? 0) - (before[a] ?? 0) || a.localeCompare(b));
  for (const name of names) {
    const row = el('div', 'share-row');
    row.appendChild(el('span', 'share-name', name));
    for (const [cls, value] of [
      ['share-before', before[name] ?? 0],
      ['share-after', after[name] ?? 0],
    ] as const) {
      const track = el('div', 'share-track');
      const bar = el('div', `share-bar ${cls}`);
      bar.style.width = `${Math.min(100, value).toFixed(1)}%`;
      bar.title = fmtPercent(value);
      track.appendChild(bar);
      const labelled = el('div', 'share-cell');
      labelled.appendChild(track);
      labelled.appendChild(el('span', 'share-pct', fmtPercent(value)));
      row.appendChild(labelled);
    }
    wrap.appendChild(row);
  }
  return wrap;
}

export function buildResultPanel(result: WhatIfResult): HTMLElement {
  const panel = el('div', 'result-panel');
  const headline = el('div', 'result-headline');
  headline.appendChild(el('span', 'result-total', fmtSeconds(result.base_total_seconds)));
  headline.appendChild(el('span', 'result-arrow', '→'));
  const editedEl = el('span', 'result-total result-edited', fmtSeconds(result.edited_total_seconds));
  editedEl.id = 'edited-total';
  headline.appendChild(editedEl);
  headline.appendChild(el('span', 'result-badge', fmtDelta(result)));
  panel.appendChild(headline);

  const facts = el('p', 'result-facts');
  const bits = [`delta ${fmtSeconds(result.delta_seconds)}`];
  if (result.total_bin !== null) bits.push(`replaced samples ${fmtSamples(result.total_bin)}`);
  facts.textContent = bits.join(' · ');
  panel.appendChild(facts);

  panel.appendChild(el('h4', undefined, 'self-time shares, before and after'));
  panel.appendChild(buildShareBars(result.shares_before_percent, result.shares_after_percent));
  return panel;
}

function svgEl(tag: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

export function buildSweepChart(
  curve: SweepCurve,
  onHover: (index: number | null) => void,
): SVGSVGElement {
  const g = DEFAULT_GEOMETRY;
  const svg = svgEl('svg', {
    viewBox: `0 0 ${g.width} ${g.height}`,
    width: g.width,
    height: g.height,
    class: 'sweep-chart',
  }) as SVGSVGElement;

  const ticks = axisTicks(g);
  for (const { pct, px } of ticks.y) {
    svg.appendChild(
      svgEl('line', {
        x1: g.padLeft, y1: px, x2: g.width - g.padRight, y2: px, class: 'grid',
      }),
    );
    const label = svgEl('text', { x: g.padLeft - 6, y: px + 4, class: 'tick', 'text-anchor': 'end' });
    label.textContent = `${pct}%`;
    svg.appendChild(label);
  }
  for (const { r, px } of ticks.x) {
    const label = svgEl('text', {
      x: px, y: g.height - g.padBottom + 18, class: 'tick', 'text-anchor': 'middle',
    });
    label.textContent = r.toFixed(2);
    svg.appendChild(label);
  }

  svg.appendChild(
    svgEl('polyline', { points: polylinePoints(curve.points, g), class: 'sweep-line' }),
  );
  for (const point of curve.points) {
    svg.appendChild(
      svgEl('circle', {
        cx: xForR(point.r, g),
        cy: yForPct(point.total_reduction_percent, g),
        r: 3,
        class: 'sweep-dot',
      }),
    );
  }

  const markerX = thresholdMarkerX(curve, g);
  if (markerX !== null) {
    svg.appendChild(
      svgEl('line', {
        x1: markerX, y1: g.padTop, x2: markerX, y2: g.height - g.padBottom,
        class: 'threshold-marker', 'data-threshold': curve.threshold ?? '',
      }),
    );
    const label = svgEl('text', {
      x: markerX + 4, y: g.padTop + 12, class: 'threshold-label',
    });
    label.textContent = `r* = ${curve.threshold}`;
    svg.appendChild(label);
  }

  svg.addEventListener('mousemove', (event) => {
    const rect = svg.getBoundingClientRect();
    const x = ((event.clientX - rect.left) / rect.width) * g.width;
    onHover(nearestPointIndex(curve.points, x, g));
  });
  svg.addEventListener('mouseleave', () => onHover(null));
  return svg;
}
