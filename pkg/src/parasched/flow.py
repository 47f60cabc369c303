"""Exact maximum flow on small networks with rational capacities.

Edmonds-Karp (BFS augmenting paths) over an adjacency-list residual graph.
Capacities are Fractions, so the result is exact; intended for the
segmentation optimality oracle and other desk-scale instances only.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

INF = Fraction(1 << 62)


class FlowNetwork:
    def __init__(self):
        self.adj: dict[object, list[int]] = {}
        # edge i and its reverse i^1 are stored adjacently
        self.to: list[object] = []
        self.cap: list[Fraction] = []

    def add_node(self, node) -> None:
        self.adj.setdefault(node, [])

    def add_edge(self, u, v, capacity) -> None:
        self.add_node(u)
        self.add_node(v)
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(Fraction(capacity))
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Fraction(0))

    def max_flow(self, source, sink) -> Fraction:
        total = Fraction(0)
        while True:
            # BFS for a shortest augmenting path
            parent_edge = {source: None}
            queue = deque([source])
            while queue and sink not in parent_edge:
                u = queue.popleft()
                for ei in self.adj[u]:
                    v = self.to[ei]
                    if v not in parent_edge and self.cap[ei] > 0:
                        parent_edge[v] = ei
                        queue.append(v)
            if sink not in parent_edge:
                return total
            # bottleneck along the path
            bottleneck = INF
            v = sink
            while parent_edge[v] is not None:
                ei = parent_edge[v]
                bottleneck = min(bottleneck, self.cap[ei])
                v = self.to[ei ^ 1]
            v = sink
            while parent_edge[v] is not None:
                ei = parent_edge[v]
                self.cap[ei] -= bottleneck
                self.cap[ei ^ 1] += bottleneck
                v = self.to[ei ^ 1]
            total += bottleneck
