#!/usr/bin/env python3
"""Binary profile round trip.

Generates gmon.out bytes plus a symbol map, reads them back, and shows
that the analysis is identical to the portable-format path — including
what the binary format *cannot* carry (per-arc sample groups).
"""

from accex import engine, fixtures, ingest, whatif

spec = fixtures.random_spec(seed=7)
bundle = fixtures.generate(spec)

print(f"workload: {len(spec.functions)} functions, {len(spec.calls)} arcs")
print(f"gmon.out: {len(bundle.gmon)} bytes; symbol map: "
      f"{len(bundle.symbol_map.splitlines())} lines")

profile = ingest.read_gmon(bundle.gmon)
table = ingest.read_symbol_map(bundle.symbol_map)
assert profile == bundle.profile.without_arc_samples()
print("read_gmon(write_gmon(p)) reproduced the profile structurally.")

g_binary = engine.analyze(profile, table)
g_portable = engine.analyze(*ingest.read_portable_profile(bundle.portable))
assert [(n.name, n.total) for n in g_binary.nodes] == [
    (n.name, n.total) for n in g_portable.nodes
]
print("binary and portable paths propagate to identical totals.")

# The difference shows up in record granularity: the portable form can
# carry one record per call group, the binary form gets one per arc.
ids_binary = whatif.assign_stable_ids(profile, table)
ids_portable = whatif.assign_stable_ids(*ingest.read_portable_profile(bundle.portable))
print(f"records from binary input:   {len(ids_binary)}")
print(f"records from portable input: {len(ids_portable)}")

# Truncated files fail loudly rather than over-reading:
try:
    ingest.read_gmon(bundle.gmon[: len(bundle.gmon) // 2 + 1])
except Exception as exc:
    print(f"mid-record truncation raises {type(exc).__name__}: {exc}")
