"""Schedulability tests and response-time bounds.

Covers the density/load global-EDF test, the decomposition-based processor
count test, capacity-augmentation and speed bounds, federated allocation,
and response-time bounds for a single DAG on a uniform (heterogeneous
speed) platform.  Everything is exact rational arithmetic except for the
irrational constant of the capacity-bound baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CriticalPathExceedsDeadline, NoFit
from .model import DagTask, TaskMetrics, TaskSetSummary, validate
from .semifed import gamma, worst_fit_partition, WfItem


class UniformPlatform:
    """Processors with speeds sorted non-increasing; S_x are prefix sums and
    lambda = max_x (S_m - S_x) / delta_x is the uniformity."""

    def __init__(self, speeds: Sequence):
        speeds = sorted((Fraction(s) for s in speeds), reverse=True)
        if not speeds or speeds[-1] <= 0:
            raise ValueError("speeds must be positive")
        self.speeds = tuple(speeds)
        prefix = []
        total = Fraction(0)
        for s in speeds:
            total += s
            prefix.append(total)
        self.prefix = tuple(prefix)
        self.total_speed = total
        self.uniformity = max((total - sx) / dx
                              for sx, dx in zip(prefix, speeds))

    def __len__(self):
        return len(self.speeds)


@dataclass
class Verdict:
    schedulable: bool
    test: str
    min_m: Optional[int] = None
    detail: dict = field(default_factory=dict)


def gedf_density_test(ell_sum: Fraction, delta_top: Fraction, m: int
                      ) -> Verdict:
    """Global EDF density/load test: ell_sum <= m - (m-1) * delta_top."""
    ell_sum, delta_top = Fraction(ell_sum), Fraction(delta_top)
    ok = ell_sum <= m - (m - 1) * delta_top
    min_m = None
    if delta_top < 1:
        # smallest m with ell_sum <= m - (m-1)*delta_top
        min_m = max(1, math.ceil((ell_sum - delta_top) / (1 - delta_top)))
    elif ell_sum <= 1:
        min_m = 1
    return Verdict(schedulable=ok, test="gedf-density", min_m=min_m,
                   detail={"bound": m - (m - 1) * delta_top})


def decomposed_test(summary: TaskSetSummary, m: int) -> Verdict:
    """Processor-count test for decomposed task sets:
    m >= (U_sum - Gamma_top) / (1/Omega_top - Gamma_top)."""
    omega, gamma_top = summary.omega_top, summary.gamma_top
    if omega is None:
        raise ValueError("summary lacks omega_top; run the decomposition")
    denom = 1 / omega - gamma_top
    if denom <= 0:
        return Verdict(schedulable=False, test="decomposed", min_m=None,
                       detail={"reason": "degenerate denominator",
                               "omega_gamma": omega * gamma_top})
    need = (summary.u_sum - gamma_top) / denom
    min_m = max(1, math.ceil(need))
    return Verdict(schedulable=m >= need, test="decomposed", min_m=min_m,
                   detail={"required": need})


def capacity_bound(omega_top: Fraction, m: int) -> Fraction:
    """Capacity augmentation bound (2 - 1/m) * Omega_top."""
    return (2 - Fraction(1, m)) * Fraction(omega_top)


def speed_requirement(summary: TaskSetSummary, m: int) -> Fraction:
    """Minimal processor speed making a decomposed set schedulable:
    s >= Omega*U_sum/m + Omega*Gamma_top*(1 - 1/m)."""
    omega = summary.omega_top
    return (omega * summary.u_sum / m
            + omega * summary.gamma_top * (1 - Fraction(1, m)))


def federated_allocate(tasks: Sequence[DagTask], m: int,
                       metrics: Optional[Sequence[TaskMetrics]] = None
                       ) -> Verdict:
    """Pure federated scheduling: ceil(gamma) dedicated processors per
    heavy task, light tasks partitioned by worst-fit decreasing EDF."""
    if metrics is None:
        metrics = [validate(t) for t in tasks]
    dedicated = {}
    light_items = []
    for task, met in zip(tasks, metrics):
        if met.heavy:
            try:
                g = gamma(met)
            except CriticalPathExceedsDeadline:
                return Verdict(schedulable=False, test="federated",
                               min_m=None,
                               detail={"reason": "critical path exceeds "
                                                 "deadline",
                                       "task": task.id})
            dedicated[task.id] = math.ceil(g)
        else:
            light_items.append(WfItem(item_id=task.id, load=met.density))

    used = sum(dedicated.values())
    detail = {"dedicated": dedicated}
    if used > m:
        return Verdict(schedulable=False, test="federated", min_m=None,
                       detail=detail)
    try:
        bins = worst_fit_partition(light_items, m - used)
    except NoFit:
        bins = None
    if bins is None:
        # find the minimal shared-processor count that packs the lights
        extra = len(light_items)
        for k in range(1, len(light_items) + 1):
            try:
                worst_fit_partition(light_items, k)
                extra = k
                break
            except NoFit:
                continue
        detail["min_m"] = used + extra
        return Verdict(schedulable=False, test="federated",
                       min_m=used + extra, detail=detail)
    detail["bins"] = [[(i.item_id, i.load) for i in b.items] for b in bins]
    min_shared = 0
    if light_items:
        for k in range(1, len(light_items) + 1):
            try:
                worst_fit_partition(light_items, k)
                min_shared = k
                break
            except NoFit:
                continue
    return Verdict(schedulable=True, test="federated",
                   min_m=used + min_shared, detail=detail)


_GLI_B = (3 + math.sqrt(5)) / 2
_GLI_SLACK = 1e-12


def gli_capacity_test(tasks: Sequence[DagTask], m: int,
                      metrics: Optional[Sequence[TaskMetrics]] = None
                      ) -> Verdict:
    """Capacity-bound baseline: U_sum <= m/b and L_i <= D_i/b with
    b = (3+sqrt(5))/2.  b is irrational, so this one test compares in
    floating point with a small slack."""
    if metrics is None:
        metrics = [validate(t) for t in tasks]
    u_sum = float(sum((met.utilization for met in metrics), Fraction(0)))
    ok = u_sum <= m / _GLI_B + _GLI_SLACK
    for task, met in zip(tasks, metrics):
        if float(met.critical_path) > float(task.deadline) / _GLI_B + _GLI_SLACK:
            ok = False
            break
    return Verdict(schedulable=ok, test="gli-capacity",
                   detail={"b": _GLI_B})


def uniform_response_bound(metrics: TaskMetrics,
                           platform: UniformPlatform) -> Fraction:
    """Work-conserving response-time bound (C + lambda*L) / S_m."""
    return ((metrics.work + platform.uniformity * metrics.critical_path)
            / platform.total_speed)


def weak_response_bound(metrics: TaskMetrics,
                        platform: UniformPlatform) -> Fraction:
    """No-migration (weakly work-conserving) bound L/delta_m + (C-L)/S_m."""
    return (metrics.critical_path / platform.speeds[-1]
            + (metrics.work - metrics.critical_path) / platform.total_speed)
