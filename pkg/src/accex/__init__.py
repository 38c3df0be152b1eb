"""accex: call-graph profile analysis with what-if acceleration modeling."""

from .engine import CallGraph, analyze, total_time
from .errors import AccexError
from .ingest import (
    read_gmon,
    read_portable_profile,
    read_symbol_map,
    write_gmon,
    write_portable_profile,
    write_symbol_map,
)
from .model import (
    DEFAULT_QUANTUM,
    Histogram,
    RawArc,
    RawProfile,
    Symbol,
    SymbolTable,
    bin_range,
    lookup_symbol,
    merge_histograms,
)
from .whatif import (
    AttributedProfile,
    AttributionRecord,
    WhatIfResult,
    apply_arc_edit,
    apply_bin_edit,
    assign_stable_ids,
    attribute,
    delta_report,
    load_scenario,
    recompute,
    run_scenario,
    sweep,
    threshold,
)

__version__ = "0.1.0"

__all__ = [
    "AccexError",
    "AttributedProfile",
    "AttributionRecord",
    "CallGraph",
    "DEFAULT_QUANTUM",
    "Histogram",
    "RawArc",
    "RawProfile",
    "Symbol",
    "SymbolTable",
    "WhatIfResult",
    "analyze",
    "apply_arc_edit",
    "apply_bin_edit",
    "assign_stable_ids",
    "attribute",
    "bin_range",
    "delta_report",
    "load_scenario",
    "lookup_symbol",
    "merge_histograms",
    "read_gmon",
    "read_portable_profile",
    "read_symbol_map",
    "recompute",
    "run_scenario",
    "sweep",
    "threshold",
    "total_time",
    "write_gmon",
    "write_portable_profile",
    "write_symbol_map",
]
