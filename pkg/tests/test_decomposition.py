import random
from fractions import Fraction

import pytest

from parasched.decomposition import (build_segments, dbf_and_load, decompose,
                                     distribute_laxity, reassemble,
                                     segment_workload, segmentation_oracle,
                                     timing_diagram)
from parasched.errors import OracleTooLarge
from parasched.model import validate
from conftest import (build_corpus, chain_task, diamond_task, fig1_task,
                      fork_task)


def test_diamond_timing_diagram():
    t = diamond_task()
    td = timing_diagram(t)
    assert td.critical_path == 6
    assert td.rdy[0] == 0 and td.fsh[0] == 1
    assert td.rdy[1] == 1 and td.fsh[1] == 5
    assert td.rdy[2] == 1 and td.fsh[2] == 5
    assert td.rdy[3] == 5 and td.fsh[3] == 6


def test_windows_are_wide_enough(corpus):
    for task in corpus[:200]:
        td = timing_diagram(task)
        for v in task.real_vertex_ids:
            assert td.fsh[v] - td.rdy[v] >= task.wcets[v]


def test_segments_partition_critical_path():
    t = fig1_task()
    segs = build_segments(timing_diagram(t))
    assert segs[0].start == 0
    assert segs[-1].end == 8
    for a, b in zip(segs, segs[1:]):
        assert a.end == b.start


def test_segment_boundaries_align_with_windows(corpus):
    # every vertex window is exactly a union of consecutive segments
    for task in corpus[:200]:
        td = timing_diagram(task)
        bounds = {s.start for s in build_segments(td)} | {td.critical_path}
        for v in task.real_vertex_ids:
            assert td.rdy[v] in bounds and td.fsh[v] in bounds


def test_workload_is_conserved(corpus):
    for task in corpus[:200]:
        met = validate(task)
        td = timing_diagram(task, met)
        seg = segment_workload(task, td, build_segments(td), met)
        total = sum((sum(portions.values(), Fraction(0))
                     for portions in seg.assignment.values()), Fraction(0))
        assert total == met.work


def test_chain_omega_is_one():
    for k in range(1, 6):
        assert decompose(chain_task(k)).omega == 1


def test_fork_omega_matches_oracle():
    for w in range(1, 6):
        task = fork_task(w)
        dec = decompose(task)
        oracle = segmentation_oracle(task)
        assert dec.omega == oracle.omega_opt


def test_omega_identity_and_range(corpus):
    for task in corpus[:300]:
        seg = decompose(task).segmentation
        heavy = [s for s in seg.segments if seg.is_heavy(s)]
        c_out = sum((s.c - seg.work / seg.critical_path * s.e
                     for s in heavy), Fraction(0))
        assert seg.omega == 1 + c_out / seg.work
        assert 1 <= seg.omega < 2


def test_oracle_rejects_large_graphs():
    rng = random.Random(0)
    from conftest import random_small_task
    big = random_small_task(rng, 0, max_vertices=8)
    with pytest.raises(OracleTooLarge):
        segmentation_oracle(big, max_vertices=2)


def test_laxity_sums_to_period(corpus):
    for task in corpus[:300]:
        dec = decompose(task)
        assert sum(s.d for s in dec.stretched) == task.period


def test_segment_load_and_density_bounds(corpus):
    for task in corpus[:300]:
        dec = decompose(task)
        met = dec.metrics
        omega = dec.omega
        for s in dec.stretched:
            assert s.c / s.d <= omega * met.utilization
            assert s.e / s.d <= omega * met.elasticity


def test_reassembled_precedence_and_windows(corpus):
    for task in corpus[:300]:
        dec = decompose(task)
        sub = {st.origin: st for st in dec.decomposed.subtasks}
        for u, v in task.edges:
            if u in task.dummy_ids or v in task.dummy_ids:
                continue
            assert sub[u].deadline <= sub[v].release
        feasible = dec.omega * dec.metrics.elasticity <= 1
        for st in dec.decomposed.subtasks:
            assert 0 <= st.release < st.deadline <= task.period
            if feasible:   # density <= omega*Gamma <= 1 implies wcet fits
                assert st.wcet <= st.deadline - st.release


def test_vertex_density_bounded(corpus):
    for task in corpus[:300]:
        dec = decompose(task)
        assert dec.max_vertex_density \
            <= dec.omega * dec.metrics.elasticity


def test_dbf_and_load_basics():
    dec = decompose(fig1_task(), compute_load=True)
    dbf, load = dbf_and_load(dec.decomposed)
    assert dbf(dec.decomposed.period) == dec.metrics.work
    assert dbf(Fraction(0)) == 0
    assert load == dec.load
    assert dec.metrics.utilization <= load \
        <= dec.omega * dec.metrics.utilization


def test_load_bounded_on_sample(corpus):
    for task in corpus[:60]:
        dec = decompose(task, compute_load=True)
        assert dec.load <= dec.omega * dec.metrics.utilization


def test_paper_worked_segmentation_threshold():
    # C/L = 2 for the six-vertex example; phase-2 fills light segments
    # exactly to the threshold, so no light segment exceeds it.
    dec = decompose(fig1_task())
    seg = dec.segmentation
    for s in seg.segments:
        if not seg.is_heavy(s):
            assert s.c * seg.critical_path <= seg.work * s.e
