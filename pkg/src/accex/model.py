"""Core profile domain types: symbols, histograms, raw arcs.

Everything here is immutable after construction and uses exact rational
arithmetic for time (a sample count times a rational quantum), so that
downstream propagation can conserve time exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidProfile, MismatchedGeometry, OverlappingSymbols

MAX_ADDRESS = 2**64

#: Sampling quantum assumed when a profile does not carry one (100 Hz).
DEFAULT_QUANTUM = Fraction(1, 100)


def parse_address(value: int | str) -> int:
    """Accept an int or a hex string ("0x1000" or bare "1000")."""
    if isinstance(value, str):
        addr = int(value, 16)
    else:
        addr = int(value)
    if not 0 <= addr < MAX_ADDRESS:
        raise InvalidProfile(f"address out of range: {value!r}")
    return addr


def format_address(addr: int) -> str:
    return f"0x{addr:x}"


@dataclass(frozen=True, order=True)
class Symbol:
    """A named function covering the half-open address range [low, high)."""

    name: str
    low: int
    high: int
    index: int = -1  # dense ordinal in ascending-name order, set by SymbolTable

    def __post_init__(self):
        if not self.name:
            raise InvalidProfile("symbol name must be non-empty")
        if not 0 <= self.low < self.high <= MAX_ADDRESS:
            raise InvalidProfile(
                f"symbol {self.name!r}: need 0 <= low < high, got "
                f"[{format_address(self.low)}, {format_address(self.high)})"
            )

    def covers(self, addr: int) -> bool:
        return self.low <= addr < self.high


class SymbolTable:
    """Symbols indexed two ways: by ascending address and by name.

    Indices are assigned densely in ascending-name order, which keeps them
    independent of where the binary happened to be loaded.
    """

    def __init__(self, symbols: list[tuple[str, int, int]] | list[Symbol]):
        raw: list[tuple[str, int, int]] = []
        for sym in symbols:
            if isinstance(sym, Symbol):
                raw.append((sym.name, sym.low, sym.high))
            else:
                name, low, high = sym
                raw.append((name, parse_address(low), parse_address(high)))

        names = [name for name, _, _ in raw]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise InvalidProfile(f"duplicate symbol names: {', '.join(dup)}")

        index_of = {name: i for i, name in enumerate(sorted(names))}
        built = [Symbol(name, low, high, index_of[name]) for name, low, high in raw]
        built.sort(key=lambda s: s.low)
        for prev, cur in zip(built, built[1:]):
            if cur.low < prev.high:
                raise OverlappingSymbols(
                    f"symbols {prev.name!r} and {cur.name!r} overlap at "
                    f"{format_address(cur.low)}"
                )

        self.symbols: tuple[Symbol, ...] = tuple(built)
        self.name_index: dict[str, Symbol] = {s.name: s for s in built}
        self._lows = [s.low for s in built]

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolTable) and self.symbols == other.symbols

    def by_name(self, name: str) -> Symbol | None:
        return self.name_index.get(name)

    def lookup(self, addr: int) -> Symbol | None:
        """The unique symbol whose [low, high) contains addr, else None."""
        i = bisect.bisect_right(self._lows, addr) - 1
        if i >= 0 and self.symbols[i].covers(addr):
            return self.symbols[i]
        return None

    def relocated(self, delta: int) -> "SymbolTable":
        return SymbolTable([(s.name, s.low + delta, s.high + delta) for s in self.symbols])


def lookup_symbol(table: SymbolTable, addr: int) -> Symbol | None:
    return table.lookup(addr)


@dataclass(frozen=True)
class Histogram:
    """Program-counter sample buckets over [low, high) at a fixed rate.

    Bin width must divide the covered range evenly; each bin's time is
    count * quantum seconds.
    """

    low: int
    high: int
    bins: tuple[int, ...]
    prof_rate: Fraction  # samples per second

    def __init__(self, low: int, high: int, bins, prof_rate):
        object.__setattr__(self, "low", parse_address(low))
        object.__setattr__(self, "high", parse_address(high))
        object.__setattr__(self, "bins", tuple(int(b) for b in bins))
        object.__setattr__(self, "prof_rate", Fraction(prof_rate))
        if self.low >= self.high:
            raise InvalidProfile("histogram needs low < high")
        if not self.bins:
            raise InvalidProfile("histogram needs at least one bin")
        if any(b < 0 for b in self.bins):
            raise InvalidProfile("histogram bin counts must be non-negative")
        if self.prof_rate <= 0:
            raise InvalidProfile("prof_rate must be positive")
        if (self.high - self.low) % len(self.bins) != 0:
            raise InvalidProfile(
                f"range {format_address(self.low)}..{format_address(self.high)} "
                f"is not an integral multiple of {len(self.bins)} bins"
            )

    @property
    def quantum(self) -> Fraction:
        return 1 / self.prof_rate

    @property
    def bin_width(self) -> int:
        return (self.high - self.low) // len(self.bins)

    @property
    def total_samples(self) -> int:
        return sum(self.bins)

    @property
    def total_time(self) -> Fraction:
        return self.total_samples * self.quantum

    def geometry(self) -> tuple[int, int, int, Fraction]:
        return (self.low, self.high, len(self.bins), self.prof_rate)


def bin_range(hist: Histogram, i: int) -> tuple[int, int]:
    """Address range [start, end) covered by bin i."""
    if not 0 <= i < len(hist.bins):
        raise IndexError(f"bin index {i} out of range 0..{len(hist.bins) - 1}")
    w = hist.bin_width
    return (hist.low + i * w, hist.low + (i + 1) * w)


def merge_histograms(histograms: list[Histogram]) -> Histogram:
    """Bin-wise sum of histograms sharing one geometry (multi-run merge)."""
    if not histograms:
        raise MismatchedGeometry("nothing to merge")
    first = histograms[0]
    for h in histograms[1:]:
        if h.geometry() != first.geometry():
            raise MismatchedGeometry(
                f"histogram geometry {h.geometry()} != {first.geometry()}"
            )
    merged = [0] * len(first.bins)
    for h in histograms:
        for i, b in enumerate(h.bins):
            merged[i] += b
    return Histogram(first.low, first.high, merged, first.prof_rate)


def merge_compatible(histograms: list[Histogram]) -> tuple[Histogram, ...]:
    """Merge same-geometry histograms; keep distinct geometries separate."""
    groups: dict[tuple, list[Histogram]] = {}
    for h in histograms:
        groups.setdefault(h.geometry(), []).append(h)
    return tuple(merge_histograms(groups[k]) for k in sorted(groups))


@dataclass(frozen=True)
class RawArc:
    """One caller-site -> callee-entry edge with a call count.

    self_samples optionally carries per-call-group sample counts of the
    callee's own time on this arc (only the structured text format can
    record these; the binary format cannot). Groups are stored largest
    first: sampling records no call order, so the group rank is the only
    stable occurrence label.
    """

    from_pc: int
    self_pc: int
    count: int
    self_samples: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.count < 1:
            raise InvalidProfile("arc count must be >= 1")
        if self.self_samples is not None:
            object.__setattr__(
                self, "self_samples", tuple(sorted(self.self_samples, reverse=True))
            )
            if not self.self_samples:
                raise InvalidProfile("self_samples must be non-empty when present")
            if len(self.self_samples) > self.count:
                raise InvalidProfile("more sample groups than calls on arc")
            if any(s < 0 for s in self.self_samples):
                raise InvalidProfile("self_samples must be non-negative")


@dataclass(frozen=True)
class RawProfile:
    """Parsed profile data: merged histograms, aggregated arcs, quantum."""

    histograms: tuple[Histogram, ...]
    arcs: tuple[RawArc, ...]
    quantum: Fraction = field(default=DEFAULT_QUANTUM)

    def __post_init__(self):
        rates = {h.prof_rate for h in self.histograms}
        if len(rates) > 1:
            raise MismatchedGeometry(f"histograms disagree on prof_rate: {rates}")
        if rates:
            object.__setattr__(self, "quantum", 1 / next(iter(rates)))
        if self.quantum <= 0:
            raise InvalidProfile("quantum must be positive")

    @property
    def total_samples(self) -> int:
        return sum(h.total_samples for h in self.histograms)

    def without_arc_samples(self) -> "RawProfile":
        """Drop per-arc sample groups (what the binary format would keep)."""
        arcs = tuple(RawArc(a.from_pc, a.self_pc, a.count) for a in self.arcs)
        return RawProfile(self.histograms, arcs, self.quantum)

    def relocated(self, delta: int) -> "RawProfile":
        hists = tuple(
            Histogram(h.low + delta, h.high + delta, h.bins, h.prof_rate)
            for h in self.histograms
        )
        arcs = tuple(
            RawArc(a.from_pc + delta, a.self_pc + delta, a.count, a.self_samples)
            for a in self.arcs
        )
        return RawProfile(hists, arcs, self.quantum)
