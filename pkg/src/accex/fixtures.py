"""Synthetic workload generation and an independent analytic oracle.

A WorkloadSpec describes a call structure with exact per-call self times.
generate() lays the functions out on disjoint page-aligned address ranges
and emits a binary profile, a symbol map, and a portable profile whose
analysis must reproduce the spec's arithmetic exactly. oracle_totals()
computes the expected propagated times by direct recursion over the spec,
sharing no code with the graph engine.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CycleUnsupported, SpecError
from .ingest import write_gmon, write_portable_profile, write_symbol_map
from .model import Histogram, RawArc, RawProfile, SymbolTable

BASE_ADDRESS = 0x10000
FUNCTION_SIZE = 0x1000
BIN_WIDTH = 16


@dataclass(frozen=True)
class CallSpec:
    caller: str
    callee: str
    count: int
    per_call_self: Fraction  # callee self seconds per call on this arc


@dataclass(frozen=True)
class RootSpec:
    name: str
    self_seconds: Fraction


@dataclass(frozen=True)
class WorkloadSpec:
    functions: tuple[str, ...]
    calls: tuple[CallSpec, ...]
    roots: tuple[RootSpec, ...]
    quantum: Fraction = Fraction(1, 100)
    allow_cycles: bool = False

    @staticmethod
    def from_dict(doc: dict) -> "WorkloadSpec":
        try:
            functions = tuple(doc["functions"])
            calls = tuple(
                CallSpec(
                    c["caller"],
                    c["callee"],
                    int(c["count"]),
                    Fraction(str(c["per_call_self_seconds"])),
                )
                for c in doc.get("calls", [])
            )
            roots = tuple(
                RootSpec(r["name"], Fraction(str(r["self_seconds"])))
                for r in doc.get("roots", [])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"malformed workload spec: {exc}") from exc
        quantum = Fraction(str(doc.get("quantum", "0.01")))
        return WorkloadSpec(
            functions=functions,
            calls=calls,
            roots=roots,
            quantum=quantum,
            allow_cycles=bool(doc.get("allow_cycles", False)),
        )

    def to_dict(self) -> dict:
        return {
            "functions": list(self.functions),
            "roots": [
                {"name": r.name, "self_seconds": float(r.self_seconds)}
                for r in self.roots
            ],
            "calls": [
                {
                    "caller": c.caller,
                    "callee": c.callee,
                    "count": c.count,
                    "per_call_self_seconds": float(c.per_call_self),
                }
                for c in self.calls
            ],
            "quantum": float(self.quantum),
            "allow_cycles": self.allow_cycles,
        }


def _validate(spec: WorkloadSpec) -> None:
    known = set(spec.functions)
    if len(known) != len(spec.functions):
        raise SpecError("duplicate function names")
    if spec.quantum <= 0:
        raise SpecError("quantum must be positive")
    callees = {c.callee for c in spec.calls}
    for c in spec.calls:
        if c.caller not in known or c.callee not in known:
            raise SpecError(f"call {c.caller}->{c.callee} names unknown functions")
        if c.count < 1:
            raise SpecError(f"call {c.caller}->{c.callee} needs count >= 1")
        if c.per_call_self < 0:
            raise SpecError("per-call self time must be non-negative")
        if (c.per_call_self / spec.quantum).denominator != 1:
            raise SpecError(
                f"{c.caller}->{c.callee}: per-call self {c.per_call_self} is not "
                f"a multiple of the quantum {spec.quantum}"
            )
    for r in spec.roots:
        if r.name not in known:
            raise SpecError(f"root {r.name!r} is not a declared function")
        if r.name in callees:
            raise SpecError(f"root {r.name!r} also appears as a callee")
        if r.self_seconds < 0:
            raise SpecError("root self time must be non-negative")
        if (r.self_seconds / spec.quantum).denominator != 1:
            raise SpecError(
                f"root {r.name!r}: self {r.self_seconds} is not a multiple of "
                f"the quantum {spec.quantum}"
            )
    if not spec.allow_cycles and _has_cycle(spec):
        raise SpecError("call structure has a cycle; set allow_cycles to permit")


def _has_cycle(spec: WorkloadSpec) -> bool:
    succ: dict[str, list[str]] = {f: [] for f in spec.functions}
    for c in spec.calls:
        succ[c.caller].append(c.callee)
    state: dict[str, int] = {}

    def visit(v: str) -> bool:
        state[v] = 1
        for w in succ[v]:
            s = state.get(w, 0)
            if s == 1 or (s == 0 and visit(w)):
                return True
        state[v] = 2
        return False

    return any(state.get(f, 0) == 0 and visit(f) for f in spec.functions)


def self_sample_totals(spec: WorkloadSpec) -> dict[str, int]:
    """Whole-sample self counts per function implied by the spec."""
    totals = {f: Fraction(0) for f in spec.functions}
    for c in spec.calls:
        totals[c.callee] += c.count * (c.per_call_self / spec.quantum)
    for r in spec.roots:
        totals[r.name] += r.self_seconds / spec.quantum
    return {f: int(v) for f, v in totals.items()}


@dataclass
class FixtureBundle:
    spec: WorkloadSpec
    profile: RawProfile  # carries per-arc sample groups
    table: SymbolTable
    gmon: bytes = b""
    symbol_map: str = ""
    portable: str = ""
    layout: dict[str, tuple[int, int]] = field(default_factory=dict)


def generate(spec: WorkloadSpec, base_address: int = BASE_ADDRESS) -> FixtureBundle:
    """Lay out symbols, fill histogram bins, and emit every format.

    Functions get disjoint page-aligned ranges in declaration order; bins
    never straddle a symbol, so sample assignment back out of the histogram
    is exact.
    """
    _validate(spec)
    layout = {}
    addr = base_address
    for name in spec.functions:
        layout[name] = (addr, addr + FUNCTION_SIZE)
        addr += FUNCTION_SIZE
    table = SymbolTable([(n, lo, hi) for n, (lo, hi) in layout.items()])

    totals = self_sample_totals(spec)
    low = base_address
    high = addr
    nbins = (high - low) // BIN_WIDTH
    bins = [0] * nbins
    per_symbol_bins = FUNCTION_SIZE // BIN_WIDTH
    bin_cap = 0xFFFF  # 16-bit bins in the binary format
    for name, samples in totals.items():
        first = (layout[name][0] - low) // BIN_WIDTH
        if samples > per_symbol_bins * bin_cap:
            raise SpecError(f"{name}: {samples} samples exceed the bin capacity")
        i = 0
        while samples > 0:
            chunk = min(samples, bin_cap)
            bins[first + i] = chunk
            samples -= chunk
            i += 1
    prof_rate = 1 / spec.quantum
    hist = Histogram(low, high, bins, prof_rate)

    arc_map: dict[tuple[int, int], tuple[int, list[int]]] = {}
    for c in spec.calls:
        from_pc = layout[c.caller][0] + BIN_WIDTH  # a call site inside the caller
        self_pc = layout[c.callee][0]
        per_call_samples = int(c.per_call_self / spec.quantum)
        count, groups = arc_map.get((from_pc, self_pc), (0, []))
        arc_map[(from_pc, self_pc)] = (
            count + c.count,
            groups + [per_call_samples] * c.count,
        )
    arcs = tuple(
        RawArc(f, s, count, self_samples=tuple(groups))
        for (f, s), (count, groups) in sorted(arc_map.items())
    )
    profile = RawProfile((hist,), arcs, spec.quantum)

    bundle = FixtureBundle(spec=spec, profile=profile, table=table, layout=layout)
    bundle.symbol_map = write_symbol_map(table)
    bundle.portable = write_portable_profile(profile, table)
    bundle.gmon = write_gmon(profile.without_arc_samples())
    return bundle


def oracle_totals(spec: WorkloadSpec) -> dict[str, tuple[Fraction, Fraction, Fraction]]:
    """Expected (self, child, total) seconds per function, by recursion.

    Child time flows to callers proportionally to call counts, computed
    straight off the spec with memoized descent; cycles are out of scope.
    """
    _validate(spec)
    if _has_cycle(spec):
        raise CycleUnsupported("the analytic oracle needs an acyclic call structure")

    self_total = {f: Fraction(0) for f in spec.functions}
    for c in spec.calls:
        self_total[c.callee] += c.count * c.per_call_self
    for r in spec.roots:
        self_total[r.name] += r.self_seconds

    calls_in: dict[str, int] = {f: 0 for f in spec.functions}
    out: dict[str, list[CallSpec]] = {f: [] for f in spec.functions}
    for c in spec.calls:
        calls_in[c.callee] += c.count
        out[c.caller].append(c)

    memo: dict[str, Fraction] = {}

    def total(f: str) -> Fraction:
        if f not in memo:
            child = sum(
                (total(c.callee) * Fraction(c.count, calls_in[c.callee])
                 for c in out[f]),
                Fraction(0),
            )
            memo[f] = self_total[f] + child
        return memo[f]

    return {
        f: (self_total[f], total(f) - self_total[f], total(f))
        for f in spec.functions
    }


def random_spec(seed: int, max_functions: int = 12, quantum=Fraction(1, 100)) -> WorkloadSpec:
    """Seeded random acyclic workload: small, exact, deterministic."""
    rng = random.Random(seed)
    n = rng.randint(2, max_functions)
    names = [f"fn{i:02d}" for i in range(n)]
    rng.shuffle(names)  # decouple name order from call order

    calls = []
    seen_pairs = set()
    for i in range(1, n):
        for _ in range(rng.randint(1, min(3, i))):
            j = rng.randrange(i)
            if (j, i) in seen_pairs:
                continue
            seen_pairs.add((j, i))
            calls.append(
                CallSpec(
                    caller=names[j],
                    callee=names[i],
                    count=rng.randint(1, 5),
                    per_call_self=Fraction(rng.randint(0, 200)) * quantum,
                )
            )
    called = {c.callee for c in calls}
    roots = tuple(
        RootSpec(name, Fraction(rng.randint(1, 200)) * quantum)
        for name in names
        if name not in called
    )
    return WorkloadSpec(
        functions=tuple(names), calls=tuple(calls), roots=roots, quantum=quantum
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="accex-fixture",
        description="Generate profile fixtures from a workload spec.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="emit gmon.out, symbols.map, profile.json")
    gen.add_argument("--spec", required=True, help="workload spec JSON path")
    gen.add_argument("--out-dir", required=True, help="directory to write into")
    args = parser.parse_args(argv)

    try:
        doc = json.loads(Path(args.spec).read_text())
        bundle = generate(WorkloadSpec.from_dict(doc))
    except (OSError, json.JSONDecodeError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "gmon.out").write_bytes(bundle.gmon)
    (out / "symbols.map").write_text(bundle.symbol_map)
    (out / "profile.json").write_text(bundle.portable)
    print(f"wrote gmon.out, symbols.map, profile.json to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
