"""What-if acceleration modeling over stable attribution records.

Every unit of a function's self time is tied to a record identified by a
dense 1-based id that depends only on function names and call structure,
never on load addresses. Edits replace record sample counts with
user-supplied values and the whole graph is re-propagated, so a change to a
leaf shows up in every ancestor's total.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import engine
from .engine import CallGraph
from .errors import (
    ArcNotFound,
    IdOutOfRange,
    InconsistentArcSamples,
    InvalidEdit,
    NonIntegralSamplesWarning,
    ScenarioError,
    UnknownTarget,
    ValuesLengthMismatch,
    ZeroSelfTime,
)
from .model import RawProfile, SymbolTable

SPONTANEOUS = "<spontaneous>"
SCENARIO_SCHEMA_VERSION = 1

#: Default sweep grid: 5% steps plus the full-reduction endpoint.
DEFAULT_SWEEP_GRID: tuple[Fraction, ...] = tuple(
    Fraction(i, 20) for i in range(20)
) + (Fraction(1),)


@dataclass(frozen=True)
class AttributionRecord:
    """One editable unit of callee self time credited to a caller."""

    id: int
    caller: str
    callee: str
    occurrence: int
    samples: Fraction
    seconds: Fraction


@dataclass(frozen=True)
class AttributedProfile:
    """A propagated base profile plus its stable record list."""

    profile: RawProfile
    table: SymbolTable
    graph: CallGraph
    records: tuple[AttributionRecord, ...]
    group_calls: tuple[int, ...]  # calls represented by each record
    quantum: Fraction
    grouped: bool  # True when per-arc sample groups drove the records

    @property
    def base_total(self) -> Fraction:
        return engine.total_time(self.graph)


@dataclass(frozen=True)
class EditedProfile:
    """An AttributedProfile with some record sample counts replaced."""

    base: AttributedProfile
    records: tuple[AttributionRecord, ...]
    provenance: tuple[dict, ...] = ()


def attribute(profile: RawProfile, table: SymbolTable) -> AttributedProfile:
    """Analyze the profile and enumerate attribution records.

    Records are ordered by (callee name, caller name, occurrence) and
    numbered from 1. With per-arc sample groups each group is one record;
    without them each arc yields one record carrying the callee's self time
    times the arc's share of incoming calls.
    """
    graph = engine.analyze(profile, table)
    quantum = graph.quantum

    grouped_edges = [e for e in graph.edges if e.self_sample_groups is not None]
    grouped = bool(grouped_edges)
    if grouped and len(grouped_edges) != len(graph.edges):
        plain = next(e for e in graph.edges if e.self_sample_groups is None)
        raise InconsistentArcSamples(
            f"arc {plain.caller.name}->{plain.callee.name} lacks sample groups "
            "while other arcs carry them"
        )

    records: list[AttributionRecord] = []
    group_calls: list[int] = []

    def push(caller: str, callee: str, occ: int, samples: Fraction, calls: int):
        records.append(
            AttributionRecord(
                id=len(records) + 1,
                caller=caller,
                callee=callee,
                occurrence=occ,
                samples=samples,
                seconds=samples * quantum,
            )
        )
        group_calls.append(calls)

    for node in graph.nodes:  # already in ascending-name order
        in_edges = sorted(graph.in_edges(node), key=lambda e: e.caller.name)
        if not in_edges:
            if node.self_samples > 0:
                push(SPONTANEOUS, node.name, 1, node.self_samples, 1)
            continue
        if grouped:
            credited = sum(
                (Fraction(g) for e in in_edges for g in e.self_sample_groups),
                Fraction(0),
            )
            if credited != node.self_samples:
                raise InconsistentArcSamples(
                    f"{node.name}: arc sample groups sum to {credited} but the "
                    f"histogram credits {node.self_samples} samples"
                )
            for e in in_edges:
                n = len(e.self_sample_groups)
                base_calls, extra = divmod(e.count, n)
                for occ, g in enumerate(e.self_sample_groups, start=1):
                    calls = base_calls + (1 if occ <= extra else 0)
                    push(e.caller.name, node.name, occ, Fraction(g), calls)
        else:
            for e in in_edges:
                share = node.self_samples * Fraction(e.count, node.calls_in)
                push(e.caller.name, node.name, 1, share, e.count)

    return AttributedProfile(
        profile=profile,
        table=table,
        graph=graph,
        records=tuple(records),
        group_calls=tuple(group_calls),
        quantum=quantum,
        grouped=grouped,
    )


def assign_stable_ids(
    profile: RawProfile, table: SymbolTable
) -> tuple[AttributionRecord, ...]:
    return attribute(profile, table).records


def _base_of(profile: AttributedProfile | EditedProfile) -> AttributedProfile:
    return profile.base if isinstance(profile, EditedProfile) else profile


def _records_of(
    profile: AttributedProfile | EditedProfile,
) -> tuple[AttributionRecord, ...]:
    return profile.records


def _with_samples(rec: AttributionRecord, samples: Fraction, quantum: Fraction):
    return AttributionRecord(
        id=rec.id,
        caller=rec.caller,
        callee=rec.callee,
        occurrence=rec.occurrence,
        samples=samples,
        seconds=samples * quantum,
    )


def apply_bin_edit(
    profile: AttributedProfile | EditedProfile,
    min_id: int,
    max_id: int,
    c: int | None = None,
    values: list[int] | None = None,
) -> tuple[EditedProfile, Fraction]:
    """Replace the sample counts of records min_id..max_id (1-based).

    Walks the record list comparing the zero-based id against min-1..max-1;
    the original counts of every replaced record accumulate into total_bin.
    Exactly one of c (a constant) or values (one per id) must be given.
    """
    base = _base_of(profile)
    records = list(_records_of(profile))
    n = len(records)
    if not 1 <= min_id <= max_id <= n:
        raise IdOutOfRange(f"need 1 <= min <= max <= {n}, got {min_id}..{max_id}")
    if (c is None) == (values is None):
        raise InvalidEdit("give exactly one of a constant or a values array")
    if values is not None:
        if len(values) != max_id - min_id + 1:
            raise ValuesLengthMismatch(
                f"range {min_id}..{max_id} needs {max_id - min_id + 1} values, "
                f"got {len(values)}"
            )
        replacements = [int(v) for v in values]
    else:
        replacements = [int(c)] * (max_id - min_id + 1)
    if any(v < 0 for v in replacements):
        raise InvalidEdit("replacement sample counts must be non-negative")

    total_bin = Fraction(0)
    for i, rec in enumerate(records):
        zero_based = rec.id - 1
        if min_id - 1 <= zero_based <= max_id - 1:
            total_bin += rec.samples
            new = Fraction(replacements[rec.id - min_id])
            records[i] = _with_samples(rec, new, base.quantum)

    note = {
        "kind": "bin_range" if c is not None else "per_id_values",
        "min": min_id,
        "max": max_id,
        "total_bin": str(total_bin),
    }
    if c is not None:
        note["c"] = int(c)
    else:
        note["values"] = replacements
    prior = profile.provenance if isinstance(profile, EditedProfile) else ()
    return EditedProfile(base, tuple(records), prior + (note,)), total_bin


def _round_half_up(x: Fraction) -> int:
    return int(x + Fraction(1, 2)) if x >= 0 else -int(-x + Fraction(1, 2))


def apply_arc_edit(
    profile: AttributedProfile | EditedProfile,
    caller: str,
    callee: str,
    per_call_seconds,
) -> tuple[EditedProfile, Fraction]:
    """Set the per-call self time of one arc's records.

    The time is converted to whole samples (rounded half-up, but never to
    zero for a positive request) and applied through apply_bin_edit so the
    same id bookkeeping, provenance, and total_bin semantics hold.
    """
    base = _base_of(profile)
    per_call = Fraction(str(per_call_seconds))
    if per_call < 0:
        raise InvalidEdit("per-call seconds must be non-negative")
    ids = [
        rec.id
        for rec in _records_of(profile)
        if rec.caller == caller and rec.callee == callee
    ]
    if not ids:
        raise ArcNotFound(f"no arc {caller!r} -> {callee!r} in the profile")

    per_call_samples = per_call / base.quantum
    if per_call_samples.denominator != 1:
        rounded = _round_half_up(per_call_samples)
        if rounded == 0 and per_call > 0:
            rounded = 1
        warnings.warn(
            f"{per_call} s/call is not a whole number of samples at quantum "
            f"{base.quantum}; using {rounded} samples/call",
            NonIntegralSamplesWarning,
            stacklevel=2,
        )
        per_call_samples = Fraction(rounded)

    lo, hi = min(ids), max(ids)
    assert hi - lo + 1 == len(ids), "records of one arc are contiguous"
    values = [int(per_call_samples) * base.group_calls[i - 1] for i in ids]
    return apply_bin_edit(profile, lo, hi, values=values)


def recompute(edited: EditedProfile) -> CallGraph:
    """Re-propagate the call graph with self times taken from the records."""
    base = edited.base
    self_samples: dict[str, Fraction] = {}
    for rec in edited.records:
        self_samples[rec.callee] = self_samples.get(rec.callee, Fraction(0)) + rec.samples
    return engine.analyze(
        base.profile,
        base.table,
        self_samples_override=self_samples,
        unattributed_override=base.graph.unattributed_time,
    )


def self_shares(graph: CallGraph) -> dict[str, Fraction]:
    """Percent of total program time spent in each function's own code."""
    total = engine.total_time(graph)
    if total == 0:
        return {n.name: Fraction(0) for n in graph.nodes if n.calls_in or n.self_time}
    return {
        n.name: n.prop_self / total * 100
        for n in graph.nodes
        if n.prop_self > 0
    }


@dataclass(frozen=True)
class WhatIfResult:
    base_total: Fraction
    edited_total: Fraction
    total_bin: Fraction | None
    shares_before: dict[str, Fraction]  # percent of total, by function
    shares_after: dict[str, Fraction]

    @property
    def delta_seconds(self) -> Fraction:
        return self.base_total - self.edited_total

    @property
    def delta_percent(self) -> Fraction:
        if self.base_total == 0:
            return Fraction(0)
        return self.delta_seconds / self.base_total * 100

    def to_json_dict(self) -> dict:
        return {
            "base_total_seconds": float(self.base_total),
            "edited_total_seconds": float(self.edited_total),
            "total_bin": None if self.total_bin is None else float(self.total_bin),
            "delta_seconds": float(self.delta_seconds),
            "delta_percent": float(self.delta_percent),
            "shares_before_percent": {k: float(v) for k, v in self.shares_before.items()},
            "shares_after_percent": {k: float(v) for k, v in self.shares_after.items()},
        }


def delta_report(
    base_graph: CallGraph,
    edited_graph: CallGraph,
    total_bin: Fraction | None = None,
) -> WhatIfResult:
    """Absolute and percent total reduction plus share shifts."""
    return WhatIfResult(
        base_total=engine.total_time(base_graph),
        edited_total=engine.total_time(edited_graph),
        total_bin=total_bin,
        shares_before=self_shares(base_graph),
        shares_after=self_shares(edited_graph),
    )


@dataclass(frozen=True)
class SweepPoint:
    r: Fraction  # reduction fraction applied to the target's self time
    total_reduction_percent: Fraction
    shares: dict[str, Fraction]  # post-edit percent shares


@dataclass(frozen=True)
class SweepCurve:
    target: str
    points: tuple[SweepPoint, ...]
    threshold: Fraction | None

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "points": [
                {
                    "r": float(p.r),
                    "total_reduction_percent": float(p.total_reduction_percent),
                    "shares_percent": {k: float(v) for k, v in p.shares.items()},
                }
                for p in self.points
            ],
            "threshold": None if self.threshold is None else float(self.threshold),
        }


def _scale_function(
    ap: AttributedProfile, target: str, scale: Fraction
) -> EditedProfile:
    records = tuple(
        _with_samples(rec, rec.samples * scale, ap.quantum)
        if rec.callee == target
        else rec
        for rec in ap.records
    )
    note = {"kind": "function_scale", "target": target, "scale": str(scale)}
    return EditedProfile(ap, records, (note,))


def sweep(
    ap: AttributedProfile,
    target: str,
    fractions=DEFAULT_SWEEP_GRID,
) -> SweepCurve:
    """Scale the target's self time by (1-r) across a grid of r values.

    Each point re-propagates the graph and records the total-time reduction
    and every function's post-edit share.
    """
    node = ap.graph.node(target)
    if node is None:
        raise UnknownTarget(f"no function named {target!r}")
    if node.self_time == 0:
        raise ZeroSelfTime(f"{target!r} has no self time to reduce")

    grid = sorted({Fraction(str(r)) for r in fractions})
    if not grid:
        raise InvalidEdit("sweep grid is empty")
    if grid[0] < 0 or grid[-1] > 1:
        raise InvalidEdit("sweep fractions must lie in [0, 1]")

    base_total = ap.base_total
    points = []
    for r in grid:
        edited = _scale_function(ap, target, 1 - r)
        graph = recompute(edited)
        edited_total = engine.total_time(graph)
        reduction = (
            Fraction(0)
            if base_total == 0
            else (base_total - edited_total) / base_total * 100
        )
        points.append(SweepPoint(r=r, total_reduction_percent=reduction,
                                 shares=self_shares(graph)))

    curve = SweepCurve(target=target, points=tuple(points), threshold=None)
    return SweepCurve(target=target, points=curve.points, threshold=threshold(curve))


def threshold(curve: SweepCurve) -> Fraction | None:
    """Smallest swept r where the target's share no longer exceeds every
    other function's share (the point the curve flattens enough that another
    function dominates)."""
    for p in curve.points:
        target_share = p.shares.get(curve.target, Fraction(0))
        others = [v for k, v in p.shares.items() if k != curve.target]
        runner_up = max(others, default=Fraction(0))
        if target_share <= runner_up:
            return p.r
    return None


# -- scenario documents -----------------------------------------------------

EDIT_KINDS = ("bin_range", "per_id_values", "arc_per_call")


@dataclass(frozen=True)
class Edit:
    kind: str
    min_id: int | None = None
    max_id: int | None = None
    c: int | None = None
    values: tuple[int, ...] | None = None
    caller: str | None = None
    callee: str | None = None
    per_call_seconds: float | None = None


@dataclass(frozen=True)
class SweepSpec:
    target: str
    grid: tuple[Fraction, ...]


@dataclass(frozen=True)
class Scenario:
    edits: tuple[Edit, ...]
    sweep: SweepSpec | None = None


def _require(cond: bool, msg: str):
    if not cond:
        raise ScenarioError(msg)


def load_scenario(doc) -> Scenario:
    """Validate a scenario document (dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "scenario must be a JSON object")
    _require(
        doc.get("accex_scenario_version") == SCENARIO_SCHEMA_VERSION,
        f"accex_scenario_version must be {SCENARIO_SCHEMA_VERSION}",
    )
    edits = []
    raw_edits = doc.get("edits", [])
    _require(isinstance(raw_edits, list), "'edits' must be a list")
    for i, e in enumerate(raw_edits):
        _require(isinstance(e, dict), f"edits[{i}] must be an object")
        kind = e.get("kind")
        _require(kind in EDIT_KINDS, f"edits[{i}].kind must be one of {EDIT_KINDS}")
        if kind == "bin_range":
            _require(
                isinstance(e.get("min"), int) and isinstance(e.get("max"), int),
                f"edits[{i}]: bin_range needs integer 'min' and 'max'",
            )
            _require(isinstance(e.get("c"), int), f"edits[{i}]: bin_range needs integer 'c'")
            _require(e["min"] <= e["max"], f"edits[{i}]: need min <= max")
            edits.append(Edit(kind=kind, min_id=e["min"], max_id=e["max"], c=e["c"]))
        elif kind == "per_id_values":
            _require(
                isinstance(e.get("min"), int) and isinstance(e.get("max"), int),
                f"edits[{i}]: per_id_values needs integer 'min' and 'max'",
            )
            _require(e["min"] <= e["max"], f"edits[{i}]: need min <= max")
            vals = e.get("values")
            _require(
                isinstance(vals, list) and all(isinstance(v, int) for v in vals),
                f"edits[{i}]: 'values' must be a list of integers",
            )
            _require(
                len(vals) == e["max"] - e["min"] + 1,
                f"edits[{i}]: values length must equal max-min+1",
            )
            edits.append(
                Edit(kind=kind, min_id=e["min"], max_id=e["max"], values=tuple(vals))
            )
        else:  # arc_per_call
            _require(
                isinstance(e.get("caller"), str) and isinstance(e.get("callee"), str),
                f"edits[{i}]: arc_per_call needs 'caller' and 'callee' names",
            )
            sec = e.get("per_call_seconds")
            _require(
                isinstance(sec, (int, float)) and sec >= 0,
                f"edits[{i}]: 'per_call_seconds' must be a non-negative number",
            )
            edits.append(
                Edit(kind=kind, caller=e["caller"], callee=e["callee"],
                     per_call_seconds=sec)
            )

    sweep_spec = None
    if "sweep" in doc and doc["sweep"] is not None:
        s = doc["sweep"]
        _require(isinstance(s, dict), "'sweep' must be an object")
        _require(isinstance(s.get("target"), str), "sweep.target must be a name")
        grid = s.get("grid")
        if grid is None:
            grid_fracs = DEFAULT_SWEEP_GRID
        else:
            _require(
                isinstance(grid, list) and all(isinstance(g, (int, float)) for g in grid),
                "sweep.grid must be a list of numbers",
            )
            grid_fracs = tuple(Fraction(str(g)) for g in grid)
        sweep_spec = SweepSpec(target=s["target"], grid=grid_fracs)

    return Scenario(edits=tuple(edits), sweep=sweep_spec)


def run_scenario(ap: AttributedProfile, scenario: Scenario) -> WhatIfResult:
    """Apply every edit in order, re-propagate, and report the delta."""
    current: AttributedProfile | EditedProfile = ap
    total_bin = Fraction(0)
    any_edit = False
    for edit in scenario.edits:
        any_edit = True
        if edit.kind == "bin_range":
            current, tb = apply_bin_edit(current, edit.min_id, edit.max_id, c=edit.c)
        elif edit.kind == "per_id_values":
            current, tb = apply_bin_edit(
                current, edit.min_id, edit.max_id, values=list(edit.values)
            )
        else:
            current, tb = apply_arc_edit(
                current, edit.caller, edit.callee, edit.per_call_seconds
            )
        total_bin += tb

    if isinstance(current, EditedProfile):
        edited_graph = recompute(current)
    else:
        edited_graph = ap.graph
    return delta_report(
        ap.graph, edited_graph, total_bin=total_bin if any_edit else None
    )
