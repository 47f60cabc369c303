"""Shared task builders and the random-DAG corpus."""

import random
from fractions import Fraction

import pytest

from parasched.model import DagTask


def fig1_task(period=14):
    """Six-vertex DAG with C=16, L=8 (longest path 0-3-4-5)."""
    vertices = [(0, 1), (1, 5), (2, 3), (3, 4), (4, 2), (5, 1)]
    edges = [(0, 1), (0, 2), (0, 3), (2, 4), (3, 4), (1, 5), (4, 5)]
    return DagTask("fig1", vertices, edges, period=period, deadline=period)


def diamond_task(period=10):
    """0 -> {1, 2} -> 3 with WCETs 1, 4, 2, 1."""
    vertices = [(0, 1), (1, 4), (2, 2), (3, 1)]
    edges = [(0, 1), (0, 2), (1, 3), (2, 3)]
    return DagTask("diamond", vertices, edges, period=period, deadline=period)


def chain_task(length, wcet=3, period=None):
    vertices = [(i, wcet) for i in range(length)]
    edges = [(i, i + 1) for i in range(length - 1)]
    period = period if period is not None else wcet * length * 2
    return DagTask(f"chain{length}", vertices, edges, period=period,
                   deadline=period)


def fork_task(width, period=None):
    """source -> width parallel vertices -> sink, unequal WCETs."""
    vertices = [(0, 1)] + [(i, i + 1) for i in range(1, width + 1)] \
        + [(width + 1, 1)]
    edges = [(0, i) for i in range(1, width + 1)] \
        + [(i, width + 1) for i in range(1, width + 1)]
    period = period if period is not None else 4 * (width + 3)
    return DagTask(f"fork{width}", vertices, edges, period=period,
                   deadline=period)


def random_small_task(rng, task_id, max_vertices=8):
    """Random G(n,p) DAG with integer WCETs and a valid period T >= L."""
    n = rng.randint(1, max_vertices)
    wcets = [(i, rng.randint(1, 10)) for i in range(n)]
    p = rng.choice([0.0, 0.1, 0.3, 0.5, 0.8])
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[a], order[b]) for a in range(n) for b in range(a + 1, n)
             if rng.random() < p]
    task = DagTask(task_id, wcets, edges, period=1, deadline=1)
    # longest path for a valid period
    dist = {}
    for v in task.topological_order():
        dist[v] = task.wcets[v] + max((dist[u] for u in task.pred[v]),
                                      default=Fraction(0))
    cpl = max(dist.values())
    period = cpl + Fraction(rng.randint(1, 80), rng.randint(1, 4))
    return DagTask(task_id, wcets, edges, period=period, deadline=period)


def build_corpus(count=1000, seed=2024):
    rng = random.Random(seed)
    tasks = [random_small_task(rng, i) for i in range(count)]
    tasks += [chain_task(k) for k in range(1, 6)]
    tasks += [fork_task(w) for w in range(1, 6)]
    return tasks


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
