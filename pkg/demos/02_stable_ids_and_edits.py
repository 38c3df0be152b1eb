#!/usr/bin/env python3
"""Stable record ids and what-if edits.

Shows why addresses make bad edit handles, how the id table names every
unit of self time, and how replacing two records' sample counts
re-propagates through every ancestor.
"""

from accex import engine, fixtures, reports, whatif

spec = fixtures.WorkloadSpec.from_dict({
    "functions": ["start", "func4", "func5"],
    "roots": [{"name": "start", "self_seconds": 1.0}],
    "calls": [
        {"caller": "start", "callee": "func4", "count": 1, "per_call_self_seconds": 1.46},
        {"caller": "func4", "callee": "func5", "count": 2, "per_call_self_seconds": 3.36},
        {"caller": "start", "callee": "func5", "count": 1, "per_call_self_seconds": 0.16},
    ],
})
bundle = fixtures.generate(spec)
ap = whatif.attribute(bundle.profile, bundle.table)

print(reports.render_ids(ap.records))

# Ids survive relocation: load the same program 4 KiB higher and nothing
# in the table changes. An address-keyed edit would silently miss.
moved = whatif.assign_stable_ids(
    bundle.profile.relocated(0x1000), bundle.table.relocated(0x1000)
)
assert moved == ap.records
print("relocating every address by +0x1000 leaves the table identical.\n")

# Records 2 and 3 are the two func4 -> func5 calls (3.36 s each). Pretend
# an accelerator brings each call down to one sample (0.01 s):
edited, total_bin = whatif.apply_bin_edit(ap, 2, 3, c=1)
edited_graph = whatif.recompute(edited)
result = whatif.delta_report(ap.graph, edited_graph, total_bin)

print(f"replaced sample counts on ids 2..3 (originally {int(total_bin)} samples)")
print(f"  func5 total: {float(ap.graph.node('func5').total):.2f} s"
      f" -> {float(edited_graph.node('func5').total):.2f} s")
print(f"  program:     {float(result.base_total):.2f} s"
      f" -> {float(result.edited_total):.2f} s"
      f"  ({float(result.delta_percent):.1f}% faster)")

# The change reaches ancestors that never call func5 directly:
print(f"  func4 total: {float(ap.graph.node('func4').total):.2f} s"
      f" -> {float(edited_graph.node('func4').total):.2f} s (via its callee)")

# The same edit phrased as an arc-level per-call time:
via_arc, _ = whatif.apply_arc_edit(ap, "func4", "func5", 0.01)
assert via_arc.records == edited.records
print("\narc edit func4->func5 @ 0.01 s/call produced the same records.")

# And the per-call average the call-graph report shows afterwards:
entry = next(e for e in reports.callgraph_profile(edited_graph) if e.name == "func5")
print(f"call-graph per-call for func5 afterwards: {float(entry.per_call):.2f} s/call")
