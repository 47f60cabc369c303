import io
import random
import statistics
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parasched.gen import (GenConfig, gen_dag, gen_period, gen_structure,
                           gen_taskset, uunifast)
from parasched.model import dump_taskset, validate


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(p=1.5)
    with pytest.raises(ValueError):
        GenConfig(util=0)


def test_seed_reproducibility_byte_for_byte():
    cfg = GenConfig(seed=123, n_tasks=4, p=0.2)
    a, b = io.StringIO(), io.StringIO()
    dump_taskset(gen_taskset(cfg), a)
    dump_taskset(gen_taskset(cfg), b)
    assert a.getvalue() == b.getvalue()


def test_p_zero_gives_edgeless_dag():
    cfg = GenConfig(seed=5, p=0.0, period_mode="gamma-formula")
    task = gen_dag(cfg, random.Random(5))
    real_edges = [e for e in task.edges if not set(e) & task.dummy_ids]
    assert not real_edges
    met = validate(task)
    assert met.critical_path == max(task.wcets[v]
                                    for v in task.real_vertex_ids)


def test_p_one_gives_total_order():
    cfg = GenConfig(seed=5, p=1.0, period_mode="gamma-formula")
    task = gen_dag(cfg, random.Random(5))
    met = validate(task)
    assert met.critical_path == met.work


def test_critical_path_grows_with_p():
    means = []
    for p in (0.01, 0.1, 0.5):
        cfg = GenConfig(seed=7, p=p, period_mode="gamma-formula")
        rng = random.Random(7)
        ratios = []
        for i in range(200):
            task = gen_dag(cfg, rng, task_id=i)
            met = validate(task)
            ratios.append(met.critical_path / met.work)
        means.append(statistics.mean(ratios))
    assert means[0] < means[1] < means[2]


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=20),
       st.integers(min_value=0, max_value=10 ** 6),
       st.fractions(min_value=Fraction(1, 10), max_value=Fraction(10)))
def test_uunifast_sums_exactly(n, seed, total):
    parts = uunifast(total, n, random.Random(seed))
    assert sum(parts) == total
    assert all(p > 0 for p in parts)
    assert len(parts) == n


def test_gamma_formula_at_zero_noise():
    class ZeroNoise(random.Random):
        def gammavariate(self, a, b):
            return 0.0

    cfg = GenConfig(m=8, util=0.5, period_mode="gamma-formula")
    t = gen_period(100, 10, cfg, ZeroNoise())
    assert t == 10 + Fraction(100) / (Fraction(2, 5) * 8 * Fraction(1, 2))


def test_periods_always_exceed_critical_path():
    rng = random.Random(3)
    for mode in ("target-utilization", "gamma-formula"):
        cfg = GenConfig(seed=3, n_tasks=4, p=0.15, util=0.6,
                        period_mode=mode)
        for s in range(50):
            tasks = gen_taskset(cfg, seed=s)
            for task in tasks:
                assert validate(task).critical_path < task.period


def test_target_utilization_sums_exactly():
    cfg = GenConfig(seed=11, n_tasks=5, util=Fraction(7, 10), m=8)
    for s in range(20):
        tasks = gen_taskset(cfg, seed=s)
        total = sum((validate(t).utilization for t in tasks), Fraction(0))
        assert total == Fraction(7, 10) * 8


def test_structure_respects_vertex_range():
    cfg = GenConfig(seed=2, n_vertices=(3, 6))
    rng = random.Random(2)
    for i in range(50):
        _, verts, _ = gen_structure(cfg, rng, i)
        assert 3 <= len(verts) <= 6
        assert all(50 <= w <= 100 for _, w in verts)
