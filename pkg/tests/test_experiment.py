import io
from fractions import Fraction

import pytest

from parasched.experiment import (DEFAULT_BUCKETS, METHODS, emit, parse_csv,
                                  run_methods, sweep, trial_seed)
from parasched.gen import GenConfig
from parasched.model import DagTask


def _unit_chain(task_id, length, period):
    verts = [(i, 1) for i in range(length)]
    edges = [(i, i + 1) for i in range(length - 1)]
    return DagTask(task_id, verts, edges, period=period, deadline=period)


def test_trial_seed_deterministic_and_distinct():
    a = trial_seed(42, "utilization", Fraction(1, 2), 3)
    assert a == trial_seed(42, "utilization", Fraction(1, 2), 3)
    assert a != trial_seed(42, "utilization", Fraction(1, 2), 4)
    assert a != trial_seed(43, "utilization", Fraction(1, 2), 3)
    assert a != trial_seed(42, "p", Fraction(1, 2), 3)


def test_run_methods_accepts_trivially_light_set():
    tasks = [_unit_chain(i, 2, 100) for i in range(3)]
    verdicts = run_methods(tasks, 8)
    assert set(verdicts) == set(METHODS)
    assert all(verdicts.values())


def test_run_methods_rejects_overload_unanimously():
    # total utilization 4 on one processor: nothing should accept
    tasks = [_unit_chain(i, 4, 1) for i in range(1)]
    verdicts = run_methods(tasks, 1)
    assert not any(verdicts.values())


def test_run_methods_respects_method_subset():
    tasks = [_unit_chain(0, 2, 100)]
    verdicts = run_methods(tasks, 4, methods=("SF1", "G-LI"))
    assert set(verdicts) == {"SF1", "G-LI"}


def test_sweep_deterministic():
    base = GenConfig(seed=9, n_tasks=2, p=0.1, m=4, n_vertices=(4, 8),
                     wcet_range=(1, 10))
    kwargs = dict(buckets=[Fraction(3, 10), Fraction(6, 10)],
                  methods=("SF1", "G-LI"))
    a = sweep("utilization", base, trials=5, **kwargs)
    b = sweep("utilization", base, trials=5, **kwargs)
    assert a == b
    assert len(a) == 4
    assert {r.method for r in a} == {"SF1", "G-LI"}
    assert all(0 <= r.accepted <= r.total == 5 for r in a)


def test_sweep_rejects_bad_inputs():
    base = GenConfig()
    with pytest.raises(ValueError):
        sweep("utilization", base, trials=0)
    with pytest.raises(ValueError):
        sweep("voltage", base, trials=1)


def test_default_buckets_cover_all_axes():
    assert set(DEFAULT_BUCKETS) == {"utilization", "processors", "p"}
    assert DEFAULT_BUCKETS["utilization"][-1] == 1


def test_emit_parse_csv_round_trip():
    base = GenConfig(seed=4, n_tasks=2, p=0.1, m=4, n_vertices=(4, 8),
                     wcet_range=(1, 10))
    records = sweep("p", base, trials=3, buckets=[0.05, 0.2],
                    methods=("SF2",))
    buf = io.StringIO()
    emit(records, buf)
    buf.seek(0)
    parsed = parse_csv(buf)
    assert len(parsed) == len(records)
    for got, want in zip(parsed, records):
        assert got.axis == want.axis
        assert got.bucket == str(float(want.bucket))
        assert got.method == want.method
        assert got.accepted == want.accepted
        assert got.total == want.total
        assert got.seed == want.seed
        assert got.ratio == pytest.approx(want.ratio)


def test_emit_jsonl_line_count():
    base = GenConfig(seed=4, n_tasks=2, p=0.1, m=4, n_vertices=(4, 8),
                     wcet_range=(1, 10))
    records = sweep("p", base, trials=2, buckets=[0.1],
                    methods=("SF1", "SF2"))
    buf = io.StringIO()
    emit(records, buf, fmt="jsonl")
    lines = [l for l in buf.getvalue().splitlines() if l]
    assert len(lines) == 2


def test_emit_empty_records_still_writes_header():
    buf = io.StringIO()
    emit([], buf)
    assert buf.getvalue().splitlines() == [
        "axis,bucket,method,accepted,total,ratio,seed"]
    buf.seek(0)
    assert parse_csv(buf) == []


def test_emit_unknown_format():
    with pytest.raises(ValueError):
        emit([], io.StringIO(), fmt="xml")
