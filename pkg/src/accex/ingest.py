"""Profile readers and writers.

Three formats:

* the classic binary call-graph profile dump (``gmon.out``),
* a sidecar symbol map (one ``name lowhex highhex`` per line), standing in
  for the executable's symbol table,
* a portable JSON profile, the toolkit's native interchange format, which
  can additionally carry per-arc sample groups the binary format cannot.
"""

from __future__ import annotations

import json
import struct
import warnings
from fractions import Fraction

from .errors import (
    BadMagic,
    EmptyTable,
    InvalidProfile,
    ParseError,
    SchemaVersionUnsupported,
    SkippedRecordWarning,
    TruncatedRecord,
    UnknownTag,
    UnsupportedVersion,
)
from .model import (
    DEFAULT_QUANTUM,
    Histogram,
    RawArc,
    RawProfile,
    SymbolTable,
    format_address,
    merge_compatible,
    merge_histograms,
    parse_address,
)

# gmon.out layout (all little-endian):
#   header: magic "gmon" (4), version u32 (=1), spare (12)
#   then records, each 1-byte tag followed by a tag-specific body:
#     tag 0  time histogram: low_pc ptr, high_pc ptr, hist_size u32,
#            prof_rate u32, dimen char[15], dimen_abbrev char[1],
#            hist_size x u16 bin values
#     tag 1  call-graph arc: from_pc ptr, self_pc ptr, count u32
#     tag 2  basic-block counts: num u32, then num x (addr ptr, count u32)
#            -- recognized but skipped
GMON_MAGIC = b"gmon"
GMON_VERSION = 1
GMON_HEADER_LEN = 20
TAG_HIST = 0
TAG_ARC = 1
TAG_BB = 2

PORTABLE_SCHEMA_VERSION = 1


class _Cursor:
    """Bounds-checked reader over the raw bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def take(self, n: int, what: str) -> bytes:
        if self.remaining() < n:
            raise TruncatedRecord(
                f"{what}: need {n} bytes at offset {self.pos}, "
                f"have {self.remaining()}"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u16(self, what: str) -> int:
        return struct.unpack("<H", self.take(2, what))[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def ptr(self, size: int, what: str) -> int:
        fmt = "<I" if size == 4 else "<Q"
        return struct.unpack(fmt, self.take(size, what))[0]


def _check_ptr_size(ptr_size: int) -> None:
    if ptr_size not in (4, 8):
        raise InvalidProfile(f"ptr_size must be 4 or 8, got {ptr_size}")


def read_gmon(
    data: bytes, ptr_size: int = 8, default_quantum: Fraction = DEFAULT_QUANTUM
) -> RawProfile:
    """Parse a gmon.out byte sequence into a RawProfile.

    Histogram records are merged bin-wise; arcs with identical
    (from_pc, self_pc) are summed. Basic-block records are skipped with a
    warning. Truncation anywhere raises TruncatedRecord rather than
    over-reading. default_quantum only matters for files with no histogram
    record to carry a rate.
    """
    _check_ptr_size(ptr_size)
    cur = _Cursor(data)
    if cur.remaining() < 4:
        raise TruncatedRecord("file shorter than magic")
    if data[:4] != GMON_MAGIC:
        raise BadMagic(f"expected {GMON_MAGIC!r}, got {data[:4]!r}")
    cur.take(4, "magic")
    version = cur.u32("header version")
    cur.take(12, "header spare")
    if version != GMON_VERSION:
        raise UnsupportedVersion(f"version {version}, only {GMON_VERSION} supported")

    histograms: list[Histogram] = []
    arc_counts: dict[tuple[int, int], int] = {}
    while cur.remaining() > 0:
        tag = cur.u8("record tag")
        if tag == TAG_HIST:
            low = cur.ptr(ptr_size, "histogram low_pc")
            high = cur.ptr(ptr_size, "histogram high_pc")
            size = cur.u32("histogram size")
            rate = cur.u32("histogram prof_rate")
            cur.take(15, "histogram dimension")
            cur.take(1, "histogram dimension abbrev")
            if size == 0 or rate == 0:
                raise InvalidProfile("histogram record with zero size or rate")
            raw = cur.take(2 * size, "histogram bins")
            bins = struct.unpack(f"<{size}H", raw)
            histograms.append(Histogram(low, high, bins, rate))
        elif tag == TAG_ARC:
            from_pc = cur.ptr(ptr_size, "arc from_pc")
            self_pc = cur.ptr(ptr_size, "arc self_pc")
            count = cur.u32("arc count")
            key = (from_pc, self_pc)
            arc_counts[key] = arc_counts.get(key, 0) + count
        elif tag == TAG_BB:
            num = cur.u32("basic-block record length")
            cur.take(num * (ptr_size + 4), "basic-block entries")
            warnings.warn(
                "skipping basic-block count record", SkippedRecordWarning, stacklevel=2
            )
        else:
            raise UnknownTag(f"tag {tag} at offset {cur.pos - 1}")

    merged = (merge_histograms(histograms),) if histograms else ()
    arcs = tuple(
        RawArc(f, s, c) for (f, s), c in sorted(arc_counts.items()) if c > 0
    )
    quantum = merged[0].quantum if merged else default_quantum
    return RawProfile(merged, arcs, quantum)


def write_gmon(profile: RawProfile, ptr_size: int = 8) -> bytes:
    """Serialize a RawProfile as gmon.out bytes.

    Per-arc sample groups have no binary representation and are not written.
    """
    _check_ptr_size(ptr_size)
    pfmt = "<I" if ptr_size == 4 else "<Q"
    out = bytearray()
    out += struct.pack("<4sI12s", GMON_MAGIC, GMON_VERSION, b"\0" * 12)
    for h in profile.histograms:
        rate = h.prof_rate
        if rate.denominator != 1:
            raise InvalidProfile(f"binary format needs an integer prof_rate, got {rate}")
        if any(b > 0xFFFF for b in h.bins):
            raise InvalidProfile("bin count exceeds 16-bit binary limit")
        out += bytes([TAG_HIST])
        out += struct.pack(pfmt, h.low) + struct.pack(pfmt, h.high)
        out += struct.pack("<II", len(h.bins), int(rate))
        out += struct.pack("<15ss", b"seconds", b"s")
        out += struct.pack(f"<{len(h.bins)}H", *h.bins)
    for a in profile.arcs:
        out += bytes([TAG_ARC])
        out += struct.pack(pfmt, a.from_pc) + struct.pack(pfmt, a.self_pc)
        out += struct.pack("<I", a.count)
    return bytes(out)


def gmon_record_boundaries(data: bytes, ptr_size: int = 8) -> list[int]:
    """Offsets at which a truncated copy of data is itself well-formed."""
    _check_ptr_size(ptr_size)
    cur = _Cursor(data)
    cur.take(GMON_HEADER_LEN, "header")
    offsets = [cur.pos]
    while cur.remaining() > 0:
        tag = cur.u8("tag")
        if tag == TAG_HIST:
            cur.take(2 * ptr_size, "pcs")
            size = cur.u32("size")
            cur.take(4 + 16 + 2 * size, "rest")
        elif tag == TAG_ARC:
            cur.take(2 * ptr_size + 4, "arc")
        elif tag == TAG_BB:
            num = cur.u32("num")
            cur.take(num * (ptr_size + 4), "entries")
        else:
            break
        offsets.append(cur.pos)
    return offsets


def read_symbol_map(text: str) -> SymbolTable:
    """Parse "name lowhex highhex" lines; '#' starts a comment."""
    entries: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"expected 'name low high', got {raw!r}", lineno)
        name, low_s, high_s = parts
        try:
            low, high = int(low_s, 16), int(high_s, 16)
        except ValueError:
            raise ParseError(f"bad hex address in {raw!r}", lineno) from None
        if low >= high:
            raise ParseError(f"need low < high for {name!r}", lineno)
        entries.append((name, low, high))
    if not entries:
        raise EmptyTable("symbol map contained no symbols")
    try:
        return SymbolTable(entries)
    except InvalidProfile as exc:
        raise ParseError(str(exc)) from exc


def write_symbol_map(table: SymbolTable) -> str:
    lines = [f"{s.name} {s.low:x} {s.high:x}" for s in table]
    return "\n".join(lines) + "\n"


def _resolve_endpoint(value, table: SymbolTable, what: str) -> int:
    """An arc endpoint is a symbol name, a hex string, or an int address."""
    if isinstance(value, str) and not value.startswith("0x"):
        sym = table.by_name(value)
        if sym is None:
            raise ParseError(f"{what} references unknown symbol {value!r}")
        return sym.low
    try:
        return parse_address(value)
    except (InvalidProfile, ValueError, TypeError):
        raise ParseError(f"{what}: bad address {value!r}") from None


def read_portable_profile(
    text: str, default_quantum: Fraction = DEFAULT_QUANTUM
) -> tuple[RawProfile, SymbolTable]:
    """Parse the portable JSON profile format.

    default_quantum applies only when the document neither declares a
    quantum nor carries histograms with a rate.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    version = doc.get("accex_profile_version")
    if version != PORTABLE_SCHEMA_VERSION:
        raise SchemaVersionUnsupported(
            f"accex_profile_version {version!r}, expected {PORTABLE_SCHEMA_VERSION}"
        )

    quantum = default_quantum
    if "quantum" in doc:
        try:
            quantum = Fraction(str(doc["quantum"]))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad quantum {doc['quantum']!r}") from None
        if quantum <= 0:
            raise ParseError("quantum must be positive")

    symbols = doc.get("symbols")
    if not isinstance(symbols, list):
        raise ParseError("'symbols' must be a list")
    entries = []
    for i, s in enumerate(symbols):
        try:
            entries.append((s["name"], parse_address(s["low"]), parse_address(s["high"])))
        except (KeyError, TypeError, InvalidProfile) as exc:
            raise ParseError(f"symbols[{i}]: {exc}") from None
    try:
        table = SymbolTable(entries)
    except InvalidProfile as exc:
        raise ParseError(str(exc)) from exc

    histograms: list[Histogram] = []
    for i, h in enumerate(doc.get("histograms", [])):
        try:
            histograms.append(
                Histogram(
                    parse_address(h["low"]),
                    parse_address(h["high"]),
                    h["bins"],
                    int(h["prof_rate"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"histograms[{i}]: {exc}") from None

    symbol_samples = doc.get("symbol_samples")
    if symbol_samples is not None:
        if histograms:
            raise ParseError("give either 'histograms' or 'symbol_samples', not both")
        rate = doc.get("prof_rate")
        rate = 1 / quantum if rate is None else int(rate)
        for name, count in symbol_samples.items():
            sym = table.by_name(name)
            if sym is None:
                raise ParseError(f"symbol_samples references unknown symbol {name!r}")
            if not isinstance(count, int) or count < 0:
                raise ParseError(f"symbol_samples[{name!r}] must be a non-negative int")
            if count > 0:
                histograms.append(Histogram(sym.low, sym.high, [count], rate))

    arc_map: dict[tuple[int, int], tuple[int, list[tuple[int, ...]] | None]] = {}
    for i, a in enumerate(doc.get("arcs", [])):
        if not isinstance(a, dict):
            raise ParseError(f"arcs[{i}] must be an object")
        try:
            from_pc = _resolve_endpoint(a["from"], table, f"arcs[{i}].from")
            self_pc = _resolve_endpoint(a["to"], table, f"arcs[{i}].to")
            count = int(a["count"])
        except KeyError as exc:
            raise ParseError(f"arcs[{i}] missing {exc}") from None
        if count < 0:
            raise ParseError(f"arcs[{i}]: negative count")
        if count == 0:
            continue
        groups = a.get("self_samples")
        if groups is not None:
            if not isinstance(groups, list) or not all(
                isinstance(g, int) and g >= 0 for g in groups
            ):
                raise ParseError(f"arcs[{i}].self_samples must be non-negative ints")
            groups = tuple(groups)
        key = (from_pc, self_pc)
        if key in arc_map:
            prev_count, prev_groups = arc_map[key]
            if (groups is None) != (prev_groups is None):
                raise ParseError(f"arcs[{i}]: duplicate arc mixes grouped and plain forms")
            merged_groups = None if groups is None else prev_groups + [groups]
            arc_map[key] = (prev_count + count, merged_groups)
        else:
            arc_map[key] = (count, None if groups is None else [groups])

    arcs = []
    for (from_pc, self_pc), (count, group_lists) in sorted(arc_map.items()):
        flat = None
        if group_lists is not None:
            flat = tuple(g for groups in group_lists for g in groups)
        try:
            arcs.append(RawArc(from_pc, self_pc, count, flat))
        except InvalidProfile as exc:
            raise ParseError(f"arc {format_address(from_pc)}->"
                             f"{format_address(self_pc)}: {exc}") from exc

    profile = RawProfile(merge_compatible(histograms), tuple(arcs), quantum)
    return profile, table


def write_portable_profile(profile: RawProfile, table: SymbolTable) -> str:
    """Serialize to the portable JSON format. read(write(p)) == p."""
    doc: dict = {"accex_profile_version": PORTABLE_SCHEMA_VERSION}
    if not profile.histograms:
        doc["quantum"] = float(profile.quantum)
    doc["symbols"] = [
        {"name": s.name, "low": format_address(s.low), "high": format_address(s.high)}
        for s in table
    ]
    doc["histograms"] = [
        {
            "low": format_address(h.low),
            "high": format_address(h.high),
            "prof_rate": int(h.prof_rate) if h.prof_rate.denominator == 1
            else float(h.prof_rate),
            "bins": list(h.bins),
        }
        for h in profile.histograms
    ]
    doc["arcs"] = []
    for a in sorted(profile.arcs, key=lambda a: (a.from_pc, a.self_pc)):
        entry = {
            "from": format_address(a.from_pc),
            "to": format_address(a.self_pc),
            "count": a.count,
        }
        if a.self_samples is not None:
            entry["self_samples"] = list(a.self_samples)
        doc["arcs"].append(entry)
    return json.dumps(doc, indent=2) + "\n"
