"""Semi-federated scheduling: container-task construction and partitioning.

A heavy task with capacity requirement gamma = (C-L)/(D-L) gets
floor(gamma) dedicated processors; the fractional remainder becomes one
container task (SF1) or up to two (SF2, split on demand during bin
packing).  Containers and light tasks share the remaining processors under
partitioned EDF with worst-fit packing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CriticalPathExceedsDeadline, NoFit
from .model import DagTask, TaskMetrics, validate


def capacity_requirement(work, critical_path, deadline) -> Fraction:
    """Minimal capacity requirement (C - L) / (D - L)."""
    work, critical_path, deadline = (
        Fraction(work), Fraction(critical_path), Fraction(deadline))
    if critical_path >= deadline:
        raise CriticalPathExceedsDeadline(
            f"critical path {critical_path} >= deadline {deadline}")
    return (work - critical_path) / (deadline - critical_path)


def gamma(metrics: TaskMetrics) -> Fraction:
    """Minimal capacity requirement of a task, from its metrics."""
    return capacity_requirement(metrics.work, metrics.critical_path,
                                metrics.work / metrics.density)


def delta_star(g: Fraction) -> Fraction:
    """Minimal load bound of the larger part when a fractional container of
    a task with requirement g is divided in two:
    max(frac(g)/2, frac(g)/g)."""
    g = Fraction(g)
    frac = g - math.floor(g)
    if frac == 0:
        return Fraction(0)
    return max(frac / 2, frac / g)


@dataclass(frozen=True)
class ContainerTask:
    owner: object            # owning task id, or the light task itself
    load: Fraction           # delta: load bound, or density for light tasks
    split_bound: Fraction    # delta*: minimal larger part when divided
    light: bool = False
    label: str = ""

    @property
    def item_id(self):
        return (str(self.owner), self.label)


# generic worst-fit item for plain partitioned EDF
@dataclass(frozen=True)
class WfItem:
    item_id: object
    load: Fraction


class Bin:
    def __init__(self, index: int):
        self.index = index
        self.items: list = []

    @property
    def load(self) -> Fraction:
        return sum((i.load for i in self.items), Fraction(0))

    def dstar_sum(self) -> Fraction:
        return sum((i.split_bound for i in self.items), Fraction(0))


def worst_fit_into(items: Sequence, bins: list, key=lambda i: i.load) -> None:
    """Place items (already ordered) on the least-loaded fitting bin.

    Mutates ``bins``; raises NoFit on the first unplaceable item.
    """
    for item in items:
        candidates = [b for b in bins if b.load + item.load <= 1]
        if not candidates:
            raise NoFit(f"item {item!r} does not fit on any bin")
        best = min(candidates, key=lambda b: (b.load, b.index))
        best.items.append(item)


def worst_fit_partition(items: Sequence, bins) -> list:
    """Worst-fit decreasing: sort by load non-increasing (ties by item id),
    always pick the bin with the minimal current total."""
    if isinstance(bins, int):
        bins = [Bin(i) for i in range(bins)]
    ordered = sorted(items, key=lambda i: (-i.load, str(i.item_id)))
    worst_fit_into(ordered, bins)
    return bins


@dataclass
class ContainerPlan:
    dedicated: dict                        # task id -> processor count
    bins: list                             # list of Bin over shared processors
    containers: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "dedicated": {str(k): v for k, v in self.dedicated.items()},
            "bins": [[{"owner": str(i.owner if isinstance(i, ContainerTask)
                                    else i.item_id),
                       "delta": str(i.load)} for i in b.items]
                     for b in self.bins],
        }


@dataclass
class PlanVerdict:
    schedulable: bool
    algorithm: str
    plan: Optional[ContainerPlan] = None
    reason: str = ""


def _classify(tasks, metrics):
    """Returns (dedicated counts, fractional containers, light containers)."""
    dedicated = {}
    fractional = []
    lights = []
    for task, met in zip(tasks, metrics):
        if met.heavy:
            g = gamma(met)
            dedicated[task.id] = math.floor(g)
            frac = g - math.floor(g)
            if frac > 0:
                fractional.append(ContainerTask(
                    owner=task.id, load=frac, split_bound=delta_star(g),
                    label="frac"))
        else:
            lights.append(ContainerTask(
                owner=task.id, load=met.density, split_bound=met.density,
                light=True, label="light"))
    return dedicated, fractional, lights


def sf1(tasks: Sequence[DagTask], m: int,
        metrics: Optional[Sequence[TaskMetrics]] = None) -> PlanVerdict:
    """First semi-federated algorithm: one fractional container per heavy
    task; containers and light tasks partitioned by worst-fit decreasing."""
    if metrics is None:
        metrics = [validate(t) for t in tasks]
    try:
        dedicated, fractional, lights = _classify(tasks, metrics)
    except CriticalPathExceedsDeadline:
        return PlanVerdict(False, "sf1",
                           reason="critical path exceeds deadline")
    used = sum(dedicated.values())
    if used > m:
        return PlanVerdict(False, "sf1", reason="insufficient dedicated")
    try:
        bins = worst_fit_partition(fractional + lights, m - used)
    except NoFit:
        return PlanVerdict(False, "sf1", reason="partition failure")
    plan = ContainerPlan(dedicated=dedicated, bins=bins,
                         containers=fractional + lights)
    return PlanVerdict(True, "sf1", plan=plan)


def sf2(tasks: Sequence[DagTask], m: int,
        metrics: Optional[Sequence[TaskMetrics]] = None) -> PlanVerdict:
    """Second semi-federated algorithm: containers may be split in two.

    Stage 1 packs by the split lower bounds delta*; a bin whose real load
    exceeds 1 is set aside.  Stage 2 scrapes each such bin down to load
    exactly 1, emitting remainder containers.  Stage 3 worst-fit places the
    remainders on the bins still open.
    """
    if metrics is None:
        metrics = [validate(t) for t in tasks]
    try:
        dedicated, fractional, lights = _classify(tasks, metrics)
    except CriticalPathExceedsDeadline:
        return PlanVerdict(False, "sf2",
                           reason="critical path exceeds deadline")
    used = sum(dedicated.values())
    if used > m:
        return PlanVerdict(False, "sf2", reason="insufficient dedicated")

    bins = [Bin(i) for i in range(m - used)]
    open_bins = list(bins)
    over_bins = []

    items = sorted(fractional + lights,
                   key=lambda i: (-i.split_bound, str(i.item_id)))
    for item in items:
        candidates = [b for b in open_bins
                      if b.dstar_sum() + item.split_bound <= 1]
        if not candidates:
            return PlanVerdict(False, "sf2", reason="sched* failure")
        best = min(candidates, key=lambda b: (b.dstar_sum(), b.index))
        best.items.append(item)
        if best.load > 1:
            open_bins.remove(best)
            over_bins.append(best)

    remainders = []
    for b in over_bins:
        remainders.extend(_scrape(b))

    ordered = sorted(remainders, key=lambda i: (-i.load, str(i.item_id)))
    try:
        worst_fit_into(ordered, open_bins)
    except NoFit:
        return PlanVerdict(False, "sf2", reason="remainder partition failure")

    plan = ContainerPlan(dedicated=dedicated, bins=bins,
                         containers=fractional + lights + remainders)
    return PlanVerdict(True, "sf2", plan=plan)


def _scrape(b: Bin) -> list:
    """Split containers on an overfull bin until its load is exactly 1.

    Every split keeps at least delta* on the bin; the excess containers are
    returned for replacement elsewhere.
    """
    excess = b.load - 1
    assert excess > 0
    out = []
    for pos, item in enumerate(list(b.items)):
        if item.light:
            continue
        if item.load - item.split_bound > excess:
            kept, spill = item.load - excess, excess
        else:
            kept, spill = item.split_bound, item.load - item.split_bound
        if spill == 0:
            continue
        assert kept >= item.split_bound
        b.items[b.items.index(item)] = ContainerTask(
            owner=item.owner, load=kept, split_bound=item.split_bound,
            label=item.label + "'")
        out.append(ContainerTask(
            owner=item.owner, load=spill, split_bound=spill,
            label=item.label + "''"))
        excess -= spill
        if excess == 0:
            break
    assert excess == 0, "scrape could not reduce the bin to load 1"
    return out
