"""Random workload generation.

DAG structure follows the Erdos-Renyi recipe G(n, p): draw a vertex count,
fix a random topological order, and keep each forward edge with
probability p.  Periods come in two flavours: a target-utilization split
of a configured total (UUniFast-style), or the gamma-noise formula
T = (L + C/(0.4*m*U)) * (1 + 0.25*Gamma(2,1)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import DagTask, validate


@dataclass
class GenConfig:
    seed: int = 1
    n_tasks: int = 5
    p: float = 0.1
    m: int = 8
    util: float = 0.5            # normalized utilization U_sum / m
    n_vertices: tuple = (10, 50)  # desk-scale default; papers use (50, 250)
    wcet_range: tuple = (50, 100)
    period_mode: str = "target-utilization"   # or "gamma-formula"

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("edge probability must be in [0, 1]")
        if self.util <= 0:
            raise ValueError("utilization must be positive")


PAPER_SCALE = (50, 250)


def gen_structure(config: GenConfig, rng: random.Random, task_id):
    """One DAG without a period yet: vertices, WCETs, G(n,p) edges over a
    random topological order."""
    n = rng.randint(*config.n_vertices)
    wcets = [rng.randint(*config.wcet_range) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < config.p:
                edges.append((order[a], order[b]))
    return task_id, list(enumerate(wcets)), edges


def uunifast(total: Fraction, n: int, rng: random.Random) -> list:
    """Uniform split of `total` into n positive parts.  Draws are floats
    but the parts are exact rationals summing to `total` exactly."""
    total = Fraction(total)
    parts = []
    remaining = total
    for i in range(n - 1, 0, -1):
        draw = Fraction(rng.random() ** (1.0 / i))
        nxt = remaining * draw
        parts.append(remaining - nxt)
        remaining = nxt
    parts.append(remaining)
    return parts


def gen_period(work, critical_path, config: GenConfig, rng: random.Random,
               target_util: Optional[Fraction] = None) -> Fraction:
    """A valid period (> L) for a task with total work C and critical path L.

    target-utilization mode: T = C / u_i for the given utilization share.
    gamma-formula mode: T = (L + C/(0.4*m*U)) * (1 + 0.25*Gamma(2,1)).
    """
    work, critical_path = Fraction(work), Fraction(critical_path)
    if config.period_mode == "target-utilization":
        if target_util is None:
            raise ValueError("target-utilization mode needs a share")
        return work / Fraction(target_util)
    if config.period_mode == "gamma-formula":
        noise = Fraction(rng.gammavariate(2.0, 1.0))
        base = critical_path + work / (Fraction(2, 5) * config.m
                                       * Fraction(config.util))
        return base * (1 + Fraction(1, 4) * noise)
    raise ValueError(f"unknown period mode {config.period_mode!r}")


def gen_dag(config: GenConfig, rng: random.Random, task_id=0) -> DagTask:
    """A single DAG; the period comes from the gamma formula so that no
    utilization split is needed."""
    tid, verts, edges = gen_structure(config, rng, task_id)
    probe = DagTask(tid, verts, edges, period=1, deadline=1)
    met = validate(probe)
    cfg = config if config.period_mode == "gamma-formula" else GenConfig(
        **{**config.__dict__, "period_mode": "gamma-formula"})
    period = gen_period(met.work, met.critical_path, cfg, rng)
    return DagTask(tid, verts, edges, period=period, deadline=period)


def gen_taskset(config: GenConfig,
                seed: Optional[int] = None) -> list[DagTask]:
    """A full task set; deterministic for a given (config, seed).

    In target-utilization mode the utilization shares are resampled until
    every task gets a valid period (T > L, i.e. u_i < C_i/L_i); the shares
    sum to util*m exactly.
    """
    rng = random.Random(config.seed if seed is None else seed)
    structures = [gen_structure(config, rng, i)
                  for i in range(config.n_tasks)]
    metrics = []
    for tid, verts, edges in structures:
        probe = DagTask(tid, verts, edges, period=1, deadline=1)
        met = validate(probe)
        metrics.append((met.work, met.critical_path))

    total = Fraction(config.util) * config.m
    if config.period_mode == "target-utilization":
        for _ in range(10000):
            shares = uunifast(total, config.n_tasks, rng)
            if all(u < c / l for u, (c, l) in zip(shares, metrics)):
                break
        else:
            raise RuntimeError("could not draw valid utilization shares; "
                               "total utilization too sequential")
    else:
        shares = [None] * config.n_tasks

    tasks = []
    for (tid, verts, edges), (c, l), share in zip(structures, metrics,
                                                  shares):
        period = gen_period(c, l, config, rng, target_util=share)
        assert period > l
        tasks.append(DagTask(tid, verts, edges, period=period,
                             deadline=period))
    return tasks
