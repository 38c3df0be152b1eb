"""Profile report rendering: flat profile, call-graph profile, id table.

Output is deterministic for a given graph: seconds print with 2 decimals,
percentages with 1, and every ordering rule is a strict total order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import engine
from .engine import ArcEdge, CallGraph, Component
from .whatif import SPONTANEOUS, AttributionRecord


@dataclass(frozen=True)
class FlatRow:
    percent_time: Fraction
    cumulative_seconds: Fraction
    self_seconds: Fraction
    calls: int
    self_per_call: Fraction | None
    total_per_call: Fraction | None
    name: str

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "percent_time": float(self.percent_time),
            "cumulative_seconds": float(self.cumulative_seconds),
            "self_seconds": float(self.self_seconds),
            "calls": self.calls,
            "self_per_call": None if self.self_per_call is None else float(self.self_per_call),
            "total_per_call": None if self.total_per_call is None else float(self.total_per_call),
        }


@dataclass(frozen=True)
class CgLine:
    """One caller or child line inside a call-graph entry."""

    name: str
    index: int | None  # entry index of the named component, if it has one
    self_share: Fraction
    child_share: Fraction
    count: int | None
    total_calls: int | None
    cycle_internal: bool = False

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "index": self.index,
            "self_seconds": float(self.self_share),
            "children_seconds": float(self.child_share),
            "calls": self.count,
            "total_calls": self.total_calls,
            "cycle_internal": self.cycle_internal,
        }


@dataclass(frozen=True)
class CgEntry:
    index: int
    name: str  # function name, or "<cycle N as a whole>"
    cycle_id: int | None
    percent_time: Fraction
    self_seconds: Fraction
    children_seconds: Fraction
    called: int
    per_call: Fraction | None  # (self+children)/called
    callers: tuple[CgLine, ...]
    children: tuple[CgLine, ...]
    members: tuple[str, ...] = ()  # cycle member names

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "cycle_id": self.cycle_id,
            "percent_time": float(self.percent_time),
            "self_seconds": float(self.self_seconds),
            "children_seconds": float(self.children_seconds),
            "called": self.called,
            "per_call_seconds": None if self.per_call is None else float(self.per_call),
            "callers": [c.to_json_dict() for c in self.callers],
            "children": [c.to_json_dict() for c in self.children],
            "members": list(self.members),
        }


def flat_profile(graph: CallGraph, include_zero: bool = False) -> list[FlatRow]:
    """Rows sorted by self time desc, then call count desc, then name asc."""
    total = engine.total_time(graph)
    nodes = [
        n
        for n in graph.nodes
        if include_zero or n.prop_self > 0 or n.calls_in > 0
    ]
    nodes.sort(key=lambda n: (-n.prop_self, -n.calls_in, n.name))
    rows = []
    cumulative = Fraction(0)
    for n in nodes:
        cumulative += n.prop_self
        pct = Fraction(0) if total == 0 else n.prop_self / total * 100
        if n.calls_in > 0:
            spc = n.prop_self / n.calls_in
            tpc = n.total / n.calls_in
        else:
            spc = tpc = None
        rows.append(
            FlatRow(
                percent_time=pct,
                cumulative_seconds=cumulative,
                self_seconds=n.prop_self,
                calls=n.calls_in,
                self_per_call=spc,
                total_per_call=tpc,
                name=n.name,
            )
        )
    return rows


def _entry_name(comp: Component) -> str:
    if comp.cycle_id is not None:
        return f"<cycle {comp.cycle_id} as a whole>"
    return comp.nodes[0].name


def callgraph_profile(graph: CallGraph, include_zero: bool = False) -> list[CgEntry]:
    """One entry per condensation component, roots first, indexed from [1]."""
    total = engine.total_time(graph)
    ordered = [
        comp
        for comp in reversed(graph.components)
        if include_zero or comp.total > 0 or comp.external_calls_in > 0
    ]
    index_of: dict[str, int] = {}
    for i, comp in enumerate(ordered, start=1):
        for n in comp.nodes:
            index_of[n.name] = i

    entries = []
    for i, comp in enumerate(ordered, start=1):
        members = {n.name for n in comp.nodes}
        called = comp.external_calls_in

        callers = []
        for n in comp.nodes:
            for e in graph.in_edges(n):
                if e.caller.name in members:
                    continue
                share = Fraction(e.count, called)
                callers.append(
                    CgLine(
                        name=e.caller.name,
                        index=index_of.get(e.caller.name),
                        self_share=comp.prop_self * share,
                        child_share=comp.prop_child * share,
                        count=e.count,
                        total_calls=called,
                    )
                )
        callers.sort(key=lambda l: (l.self_share + l.child_share, l.name))
        if not callers and called == 0 and comp.total > 0:
            callers.append(
                CgLine(SPONTANEOUS, None, Fraction(0), Fraction(0), None, None)
            )

        children: list[CgLine] = []
        for n in comp.nodes:
            for e in graph.out_edges(n):
                if e.cycle_internal:
                    children.append(
                        CgLine(
                            name=e.callee.name,
                            index=index_of.get(e.callee.name),
                            self_share=Fraction(0),
                            child_share=Fraction(0),
                            count=e.count,
                            total_calls=None,
                            cycle_internal=True,
                        )
                    )
                    continue
                callee_comp = graph.component_of(e.callee)
                share = Fraction(e.count, callee_comp.external_calls_in)
                children.append(
                    CgLine(
                        name=e.callee.name,
                        index=index_of.get(e.callee.name),
                        self_share=callee_comp.prop_self * share,
                        child_share=callee_comp.prop_child * share,
                        count=e.count,
                        total_calls=callee_comp.external_calls_in,
                    )
                )
        children.sort(
            key=lambda l: (-(l.self_share + l.child_share), l.name, l.cycle_internal)
        )

        entries.append(
            CgEntry(
                index=i,
                name=_entry_name(comp),
                cycle_id=comp.cycle_id,
                percent_time=Fraction(0) if total == 0 else comp.total / total * 100,
                self_seconds=comp.prop_self,
                children_seconds=comp.prop_child,
                called=called,
                per_call=comp.total / called if called > 0 else None,
                callers=tuple(callers),
                children=tuple(children),
                members=tuple(n.name for n in comp.nodes) if comp.cycle_id else (),
            )
        )
    return entries


# -- text rendering -----------------------------------------------------------

FLAT_HEADER = (
    "  %   cumulative   self              self     total",
    " time   seconds   seconds    calls  s/call   s/call  name",
)
CG_HEADER = "index  % time    self  children    called   s/call  name"
CG_SEPARATOR = "-" * 59
ARC_AVERAGE_NOTE = (
    "note: caller/child line times are per-call averages scaled by call",
    "counts, not per-invocation measurements; per-call variation is only",
    "visible in the id table.",
)


def _sec(x: Fraction | None, width: int = 8) -> str:
    if x is None:
        return " " * width
    return f"{float(x):{width}.2f}"


def _quantum_line(quantum: Fraction) -> str:
    return f"Each sample counts as {float(quantum):g} seconds."


def render_flat(rows: list[FlatRow], quantum: Fraction) -> str:
    lines = ["Flat profile:", "", _quantum_line(quantum)]
    lines.extend(FLAT_HEADER)
    for r in rows:
        calls = f"{r.calls:8d}" if r.calls > 0 else " " * 8
        line = (
            f"{float(r.percent_time):5.1f} {float(r.cumulative_seconds):10.2f} "
            f"{float(r.self_seconds):8.2f} {calls} {_sec(r.self_per_call)} "
            f"{_sec(r.total_per_call)}  {r.name}"
        )
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def _cg_name(line: CgLine) -> str:
    suffix = f" [{line.index}]" if line.index is not None else ""
    if line.cycle_internal:
        suffix += " <cycle-internal>"
    return line.name + suffix


def render_callgraph(entries: list[CgEntry], quantum: Fraction) -> str:
    lines = ["Call graph profile:", "", _quantum_line(quantum), CG_HEADER]
    for e in entries:
        for c in e.callers:
            if c.name == SPONTANEOUS:
                lines.append(f"{'':6} {'':6} {'':8} {'':9} {'':>9} {'':8}  {SPONTANEOUS}")
                continue
            calls = f"{c.count}/{c.total_calls}"
            lines.append(
                f"{'':6} {'':6} {_sec(c.self_share)} {_sec(c.child_share, 9)} "
                f"{calls:>9} {'':8}  {_cg_name(c)}"
            )
        called = f"{e.called}" if e.called > 0 else ""
        lines.append(
            f"{f'[{e.index}]':<6} {float(e.percent_time):6.1f} "
            f"{_sec(e.self_seconds)} {_sec(e.children_seconds, 9)} "
            f"{called:>9} {_sec(e.per_call)}  {e.name} [{e.index}]"
        )
        if e.members:
            for m in e.members:
                lines.append(f"{'':6} {'':6} {'':8} {'':9} {'':>9} {'':8}      {m} <cycle {e.cycle_id}>")
        for c in e.children:
            calls = f"{c.count}/{c.total_calls}" if c.total_calls else f"{c.count}"
            lines.append(
                f"{'':6} {'':6} {_sec(c.self_share)} {_sec(c.child_share, 9)} "
                f"{calls:>9} {'':8}  {_cg_name(c)}"
            )
        lines.append(CG_SEPARATOR)
    lines.append("")
    lines.extend(ARC_AVERAGE_NOTE)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_ids(records: tuple[AttributionRecord, ...] | list[AttributionRecord]) -> str:
    lines = [
        "Attribution records:",
        "",
        "   id  caller            callee              occ    samples    seconds",
    ]
    for r in records:
        lines.append(
            f"{r.id:5d}  {r.caller:<16}  {r.callee:<16}  {r.occurrence:5d} "
            f"{float(r.samples):10.2f} {float(r.seconds):10.2f}"
        )
    return "\n".join(line.rstrip() for line in lines) + "\n"


def ids_table(records) -> str:
    return render_ids(records)


# -- machine-readable payloads (shared by the CLI --json mode and the API) ----

def profile_payload(ap) -> dict:
    graph = ap.graph
    return {
        "flat": [r.to_json_dict() for r in flat_profile(graph)],
        "callgraph": [e.to_json_dict() for e in callgraph_profile(graph)],
        "total_seconds": float(engine.total_time(graph)),
        "quantum": float(ap.quantum),
        "unattributed_seconds": float(graph.unattributed_time),
        "dropped_arcs": graph.dropped_arcs,
    }


def ids_payload(ap) -> dict:
    return {
        "records": [
            {
                "id": r.id,
                "caller": r.caller,
                "callee": r.callee,
                "occurrence": r.occurrence,
                "samples": float(r.samples),
                "seconds": float(r.seconds),
            }
            for r in ap.records
        ]
    }
