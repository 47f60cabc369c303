"""Discrete-event simulators.

Three engines share the exact-rational style:

* ``simulate_uniform`` -- a single DAG on uniform (heterogeneous speed)
  processors under work-conserving list scheduling, with or without
  migration.
* ``simulate_dispatcher`` -- a single DAG executed through container tasks
  with load bounds, splitting vertices so that faster containers never
  idle while slower ones are busy.
* ``simulate_gedf`` -- periodic subtask jobs of decomposed tasks under
  preemptive global EDF, reporting deadline misses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .decomposition import DecomposedTask
from .model import DagTask


@dataclass
class SimTrace:
    response_time: Fraction
    events: list = field(default_factory=list)
    split_count: int = 0
    assignments: list = field(default_factory=list)
    intervals: list = field(default_factory=list)   # (t0, t1, {proc: vertex})

    @property
    def migrations(self):
        return [e for e in self.events if e[1] == "migrate"]


def _real_graph(task: DagTask):
    """Vertex ids, WCETs and predecessor sets with the zero-cost dummy
    source/sink stripped out."""
    real = set(task.real_vertex_ids)
    preds = {v: {u for u in task.pred[v] if u in real} for v in real}
    return sorted(real), preds


def simulate_uniform(task: DagTask, speeds: Sequence,
                     order: Optional[Callable] = None,
                     migration: bool = True) -> SimTrace:
    """Run one DAG job on processors with the given speeds.

    At every event the eligible vertices, ordered by ``order(t, ids)``
    (default: ascending id), are placed on the fastest processors.  With
    ``migration=False`` a started vertex stays pinned to its processor and
    only idle processors pick up fresh work.
    """
    speeds = sorted((Fraction(s) for s in speeds), reverse=True)
    vids, preds = _real_graph(task)
    remaining = {v: Fraction(task.wcets[v]) for v in vids}
    done = set()
    where = {}          # vertex -> processor index it last ran on
    trace = SimTrace(response_time=Fraction(0))
    t = Fraction(0)

    while len(done) < len(vids):
        eligible = [v for v in vids
                    if v not in done and preds[v] <= done]
        assert eligible, "deadlock in precedence graph"
        if order is not None:
            eligible = list(order(t, list(eligible)))

        running = {}    # processor index -> vertex
        if migration:
            for idx, v in enumerate(eligible[:len(speeds)]):
                running[idx] = v
        else:
            free = [i for i in range(len(speeds))]
            for v in list(eligible):
                if v in where:
                    running[where[v]] = v
                    free.remove(where[v])
            fresh = [v for v in eligible if v not in where]
            for idx, v in zip(sorted(free), fresh):
                running[idx] = v

        for idx, v in running.items():
            if v in where and where[v] != idx:
                trace.events.append((t, "migrate", v, where[v], idx))
            elif v not in where:
                trace.events.append((t, "start", v, idx))
            where[v] = idx

        # advance to the earliest completion
        dt = min(remaining[v] / speeds[idx] for idx, v in running.items())
        assert dt > 0
        trace.intervals.append((t, t + dt, dict(running)))
        t += dt
        for idx, v in running.items():
            remaining[v] -= dt * speeds[idx]
            if remaining[v] == 0:
                done.add(v)
                trace.events.append((t, "finish", v, idx))

    trace.response_time = t
    return trace


@dataclass
class _Container:
    index: int
    delta: Fraction
    deadline: Optional[Fraction] = None   # None when empty
    exe: Optional[object] = None


def simulate_dispatcher(task: DagTask, deltas: Sequence,
                        choice: Optional[Callable] = None) -> SimTrace:
    """Execute one DAG job through container tasks with load bounds
    ``deltas``.

    Whenever an eligible vertex and an empty container exist, the vertex is
    assigned to the empty container with the largest load bound with
    deadline t + c(v)/delta.  If a strictly faster occupied container would
    empty earlier, the vertex is split at that deadline and its remainder
    goes back to the head of the ready list.  Occupied containers empty
    exactly at their deadlines.
    """
    vids, preds = _real_graph(task)
    containers = [_Container(i, Fraction(getattr(d, "load", d)))
                  for i, d in enumerate(deltas)]
    # ready list S: (key, wcet, pred keys); vertex keys are the id or
    # (id, suffix) for split parts
    s_list = [(v, Fraction(task.wcets[v])) for v in vids]
    pred_of = {v: set(preds[v]) for v in vids}
    done = set()
    trace = SimTrace(response_time=Fraction(0))
    t = Fraction(0)

    def eligible():
        return [entry for entry in s_list if pred_of[entry[0]] <= done]

    while s_list or any(c.exe is not None for c in containers):
        # vacate containers whose deadline is now
        for c in containers:
            if c.deadline is not None and c.deadline == t:
                done.add(c.exe)
                trace.events.append((t, "finish", c.exe, c.index))
                c.deadline = None
                c.exe = None

        while True:
            empty = [c for c in containers if c.deadline is None]
            elig = eligible()
            if not empty or not elig:
                break
            if choice is not None:
                key = choice(t, [e[0] for e in elig])
                entry = next(e for e in elig if e[0] == key)
            else:
                entry = elig[0]
            s_list.remove(entry)
            v, c_v = entry
            phi = max(empty, key=lambda c: (c.delta, -c.index))
            faster = [c.deadline for c in containers
                      if c.deadline is not None and c.delta > phi.delta]
            d_prime = min(faster) if faster else None
            if d_prime is None or d_prime >= t + c_v / phi.delta:
                phi.deadline = t + c_v / phi.delta
                phi.exe = v
            else:
                phi.deadline = d_prime
                head = (d_prime - t) * phi.delta
                v1 = (v, "'") if not isinstance(v, tuple) else (v[0], v[1] + "'")
                v2 = (v, "''") if not isinstance(v, tuple) else (v[0], v[1] + "''")
                phi.exe = v1
                # the remainder inherits v's role in the graph
                pred_of[v2] = {v1}
                for w, ps in pred_of.items():
                    if v in ps:
                        ps.discard(v)
                        ps.add(v2)
                s_list.insert(0, (v2, c_v - head))
                trace.split_count += 1
                trace.events.append((t, "split", v, head, c_v - head))
            trace.assignments.append((t, phi.index, phi.exe, phi.deadline))

        future = [c.deadline for c in containers if c.deadline is not None]
        if not future:
            assert not s_list, "stuck with unassigned vertices"
            break
        t = min(future)

    trace.response_time = t
    return trace


@dataclass
class GedfReport:
    misses: list
    horizon: Fraction

    @property
    def ok(self):
        return not self.misses


def simulate_gedf(tasks: Sequence[DecomposedTask], m: int,
                  horizon) -> GedfReport:
    """Preemptive global EDF over the periodic subtask jobs of decomposed
    tasks, synchronous release, checked up to ``horizon``."""
    horizon = Fraction(horizon)
    jobs = []   # [release, deadline, remaining, (task, subtask, k)]
    for dt in tasks:
        for si, sub in enumerate(dt.subtasks):
            if sub.wcet == 0:
                continue
            k = 0
            while k * dt.period + sub.release < horizon:
                jobs.append([k * dt.period + sub.release,
                             k * dt.period + sub.deadline,
                             Fraction(sub.wcet), (dt.task_id, si, k)])
                k += 1
    jobs.sort(key=lambda j: (j[0], j[1], j[3]))

    misses = []
    t = Fraction(0)
    pending = []
    i = 0
    while t < horizon:
        while i < len(jobs) and jobs[i][0] <= t:
            pending.append(jobs[i])
            i += 1
        active = sorted((j for j in pending if j[2] > 0),
                        key=lambda j: (j[1], j[3]))
        if not active:
            if i >= len(jobs):
                break
            t = jobs[i][0]
            continue
        run = active[:m]
        # next event: a completion, a release, or the horizon
        dt_candidates = [j[2] for j in run]
        if i < len(jobs):
            dt_candidates.append(jobs[i][0] - t)
        dt_candidates.append(horizon - t)
        step = min(c for c in dt_candidates if c > 0)
        for j in run:
            j[2] -= step
        t += step
        for j in list(pending):
            if j[2] == 0:
                pending.remove(j)
            elif j[1] <= t:
                misses.append((j[3], j[1], j[2]))
                pending.remove(j)
    for j in pending:
        if j[2] > 0 and j[1] <= horizon:
            misses.append((j[3], j[1], j[2]))
    return GedfReport(misses=misses, horizon=horizon)
