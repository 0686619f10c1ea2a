"""Minimal unit-capacity max-flow with BFS augmenting paths.

Used for vertex-disjoint path packing and for the flow engine behind the
per-vertex boundary minimization.  Augmenting paths follow breadth-first
order over edges in insertion order, so results are deterministic.
"""

from __future__ import annotations

from collections import deque


class FlowNetwork:
    __slots__ = ("node_count", "to", "cap", "adj")

    def __init__(self, node_count: int) -> None:
        self.node_count = node_count
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(node_count)]

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        eid = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((capacity, 0))
        self.adj[u].append(eid)
        self.adj[v].append(eid + 1)
        return eid

    def _augment(self, source: int, sink: int) -> int:
        parent_edge = [-1] * self.node_count
        parent_edge[source] = -2
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == sink:
                break
            for eid in self.adj[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and parent_edge[v] == -1:
                    parent_edge[v] = eid
                    queue.append(v)
        if parent_edge[sink] == -1:
            return 0
        bottleneck = None
        v = sink
        while v != source:
            eid = parent_edge[v]
            bottleneck = self.cap[eid] if bottleneck is None else min(bottleneck, self.cap[eid])
            v = self.to[eid ^ 1]
        v = sink
        while v != source:
            eid = parent_edge[v]
            self.cap[eid] -= bottleneck
            self.cap[eid ^ 1] += bottleneck
            v = self.to[eid ^ 1]
        return bottleneck

    def max_flow(self, source: int, sink: int, limit: int | None = None) -> int:
        total = 0
        while limit is None or total < limit:
            pushed = self._augment(source, sink)
            if pushed == 0:
                break
            total += pushed
        return total

    def residual_reachable(self, source: int) -> list[bool]:
        seen = [False] * self.node_count
        seen[source] = True
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for eid in self.adj[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen

    def flow_on(self, eid: int) -> int:
        return self.cap[eid ^ 1]
