from fractions import Fraction

import pytest

from accex import engine, fixtures, whatif
from accex.errors import CycleUnsupported, SpecError
from accex.fixtures import CallSpec, RootSpec, WorkloadSpec


def spec_of(doc) -> WorkloadSpec:
    return WorkloadSpec.from_dict(doc)


class TestGenerate:
    def test_single_function_second(self):
        bundle = fixtures.generate(spec_of({
            "functions": ["f"],
            "roots": [{"name": "f", "self_seconds": 1.0}],
            "calls": [],
        }))
        assert bundle.profile.total_samples == 100

    def test_bins_never_straddle_symbols(self):
        bundle = fixtures.generate(fixtures.random_spec(5))
        hist = bundle.profile.histograms[0]
        from accex.model import bin_range
        for i, count in enumerate(hist.bins):
            if count == 0:
                continue
            lo, hi = bin_range(hist, i)
            syms = [s for s in bundle.table if s.low < hi and lo < s.high]
            assert len(syms) == 1
            assert syms[0].low <= lo and hi <= syms[0].high

    def test_worked_example_totals(self, worked_example_spec):
        bundle = fixtures.generate(worked_example_spec)
        g = engine.analyze(bundle.profile, bundle.table)
        assert g.node("func5").total == Fraction(688, 100)
        assert engine.total_time(g) == Fraction(934, 100)

    def test_generated_formats_agree(self, worked_example_bundle):
        from accex.ingest import read_gmon, read_portable_profile, read_symbol_map

        b = worked_example_bundle
        gmon_profile = read_gmon(b.gmon)
        portable_profile, portable_table = read_portable_profile(b.portable)
        map_table = read_symbol_map(b.symbol_map)
        assert gmon_profile == portable_profile.without_arc_samples()
        assert portable_table == map_table == b.table

    def test_engine_matches_oracle_exactly(self, worked_example_spec):
        bundle = fixtures.generate(worked_example_spec)
        g = engine.analyze(bundle.profile, bundle.table)
        for name, (self_t, child_t, tot) in fixtures.oracle_totals(worked_example_spec).items():
            node = g.node(name)
            assert (node.self_time, node.prop_child, node.total) == (self_t, child_t, tot)


class TestOracle:
    def test_single_root(self):
        totals = fixtures.oracle_totals(spec_of({
            "functions": ["f"],
            "roots": [{"name": "f", "self_seconds": 1.0}],
            "calls": [],
        }))
        assert totals["f"] == (Fraction(1), Fraction(0), Fraction(1))

    def test_root_plus_leaf(self):
        # root 1 s plus a at 2 s/call * 2 calls -> root total 5 s
        totals = fixtures.oracle_totals(spec_of({
            "functions": ["root", "a"],
            "roots": [{"name": "root", "self_seconds": 1.0}],
            "calls": [{"caller": "root", "callee": "a", "count": 2,
                       "per_call_self_seconds": 2.0}],
        }))
        assert totals["root"][2] == Fraction(5)

    def test_worked_example_total(self, worked_example_spec):
        totals = fixtures.oracle_totals(worked_example_spec)
        assert totals["start"][2] == Fraction(934, 100)

    def test_cycles_unsupported(self):
        spec = WorkloadSpec(
            functions=("a", "b"),
            calls=(
                CallSpec("a", "b", 1, Fraction(1, 100)),
                CallSpec("b", "a", 1, Fraction(1, 100)),
            ),
            roots=(),
            allow_cycles=True,
        )
        with pytest.raises(CycleUnsupported):
            fixtures.oracle_totals(spec)


class TestSpecValidation:
    def test_time_not_multiple_of_quantum(self):
        with pytest.raises(SpecError):
            fixtures.generate(spec_of({
                "functions": ["a", "b"],
                "roots": [{"name": "a", "self_seconds": 0.01}],
                "calls": [{"caller": "a", "callee": "b", "count": 1,
                           "per_call_self_seconds": 0.015}],
            }))

    def test_unknown_names(self):
        with pytest.raises(SpecError):
            fixtures.generate(spec_of({
                "functions": ["a"],
                "roots": [],
                "calls": [{"caller": "a", "callee": "ghost", "count": 1,
                           "per_call_self_seconds": 0.01}],
            }))

    def test_root_cannot_be_a_callee(self):
        with pytest.raises(SpecError):
            fixtures.generate(spec_of({
                "functions": ["a", "b"],
                "roots": [{"name": "b", "self_seconds": 0.01}],
                "calls": [{"caller": "a", "callee": "b", "count": 1,
                           "per_call_self_seconds": 0.01}],
            }))

    def test_unmarked_cycle_rejected(self):
        with pytest.raises(SpecError):
            fixtures.generate(WorkloadSpec(
                functions=("a", "b"),
                calls=(
                    CallSpec("a", "b", 1, Fraction(1, 100)),
                    CallSpec("b", "a", 1, Fraction(1, 100)),
                ),
                roots=(),
            ))


class TestRandomSpec:
    def test_deterministic(self):
        assert fixtures.random_spec(99) == fixtures.random_spec(99)

    def test_respects_bounds(self):
        for seed in range(20):
            spec = fixtures.random_spec(seed)
            assert 2 <= len(spec.functions) <= 12
            assert all(1 <= c.count <= 5 for c in spec.calls)
            assert all(c.per_call_self <= 2 for c in spec.calls)
            fixtures.oracle_totals(spec)  # acyclic by construction


class TestCli:
    def test_generate_writes_three_files(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        import json
        spec_path.write_text(json.dumps({
            "functions": ["f"],
            "roots": [{"name": "f", "self_seconds": 0.25}],
            "calls": [],
        }))
        rc = fixtures.main(["generate", "--spec", str(spec_path),
                            "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        for name in ("gmon.out", "symbols.map", "profile.json"):
            assert (tmp_path / "out" / name).exists()

    def test_bad_spec_exits_2(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text("{}")
        assert fixtures.main(["generate", "--spec", str(spec_path),
                              "--out-dir", str(tmp_path)]) == 2
