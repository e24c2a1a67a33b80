"""Integral max-flow (Dinic) on small networks with unit-ish capacities."""
from __future__ import annotations

from collections import deque

BIG = 1 << 40


class FlowNetwork:
    """Residual network; arcs ``a`` and ``a ^ 1`` are mutual reverses."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self._cap0: list[int] = []

    def add_arc(self, u: int, v: int, cap: int = 1) -> int:
        a = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.head[u].append(a)
        self.head[v].append(a + 1)
        self._cap0 = []
        return a

    def add_edge(self, u: int, v: int, cap: int = 1) -> int:
        """Undirected edge: both directions carry ``cap`` and share one residual pair."""
        a = len(self.to)
        self.to += [v, u]
        self.cap += [cap, cap]
        self.head[u].append(a)
        self.head[v].append(a + 1)
        self._cap0 = []
        return a

    def reset(self):
        if not self._cap0:
            self._cap0 = self.cap.copy()
        else:
            self.cap[:] = self._cap0

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        to, cap, head = self.to, self.cap, self.head
        while q:
            u = q.popleft()
            for a in head[u]:
                v = to[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, s: int, t: int, level: list[int], it: list[int]) -> int:
        to, cap, head = self.to, self.cap, self.head
        path: list[int] = []
        u = s
        while True:
            if u == t:
                b = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= b
                    cap[a ^ 1] += b
                return b
            arcs = head[u]
            while it[u] < len(arcs):
                a = arcs[it[u]]
                v = to[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    path.append(a)
                    u = v
                    break
                it[u] += 1
            else:
                if not path:
                    return 0
                level[u] = -1
                a = path.pop()
                u = to[a ^ 1]
                it[u] += 1

    def max_flow(self, s: int, t: int, limit: int = BIG) -> int:
        """Flow value from ``s`` to ``t``, stopping early once ``limit`` is reached."""
        if s == t:
            raise ValueError("source and sink coincide")
        self.reset()
        flow = 0
        while flow < limit:
            level = self._levels(s, t)
            if level is None:
                break
            it = [0] * self.n
            while flow < limit:
                pushed = self._augment(s, t, level, it)
                if not pushed:
                    break
                flow += pushed
        return min(flow, limit) if limit < BIG else flow

    def residual_reachable(self, s: int) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.head[u]:
                v = self.to[a]
                if self.cap[a] > 0 and not seen[v]:
                    seen[v] = True
                    q.append(v)
        return seen
