"""Integer flow kernel for degree-constrained edge selections.

The engines phrase every construction as: select a subset of the edges of
a bipartite multigraph so that each left node keeps a prescribed number of
selected edges, each right node likewise, optionally with a forced total.
Feasibility is a circulation-with-lower-bounds check; the returned
selection is the lexicographically least feasible one (edges are forced
one at a time in index order), which makes every construction in the
package deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, cap: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def maxflow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for e in self.head[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        q.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    e = self.head[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed


def _feasible(
    left_of: Sequence[int],
    right_of: Sequence[int],
    left_bounds: Sequence[tuple[int, int]],
    right_bounds: Sequence[tuple[int, int]],
    total_bounds: Optional[tuple[int, int]],
    forced: dict[int, int],
) -> bool:
    """Does a selection exist respecting all bounds and the forced edges?

    Graph: source -> left node -> (edge) -> right node -> sink, with a
    sink -> source return arc carrying the total; every arc has a lower
    bound, reduced to plain max-flow the standard way (excess nodes).
    """
    n_edges = len(left_of)
    nl, nr = len(left_bounds), len(right_bounds)
    big = n_edges + 1
    src, snk = 0, 1
    left0, right0 = 2, 2 + nl
    n = 2 + nl + nr
    sstar, tstar = n, n + 1
    din = _Dinic(n + 2)
    excess = [0] * n

    def arc(u: int, v: int, lo: int, hi: int) -> None:
        if lo > hi:
            raise ValueError("empty bound interval")
        if hi > lo:
            din.add(u, v, hi - lo)
        if lo:
            excess[v] += lo
            excess[u] -= lo

    for i, (lo, hi) in enumerate(left_bounds):
        arc(src, left0 + i, lo, hi)
    for j, (lo, hi) in enumerate(right_bounds):
        arc(right0 + j, snk, lo, hi)
    for e in range(n_edges):
        lo = hi = forced[e] if e in forced else None
        if lo is None:
            lo, hi = 0, 1
        arc(left0 + left_of[e], right0 + right_of[e], lo, hi)
    tlo, thi = total_bounds if total_bounds is not None else (0, big)
    arc(snk, src, tlo, thi)

    need = 0
    for v in range(n):
        if excess[v] > 0:
            din.add(sstar, v, excess[v])
            need += excess[v]
        elif excess[v] < 0:
            din.add(v, tstar, -excess[v])
    return din.maxflow(sstar, tstar) == need


def lex_least_selection(
    left_of: Sequence[int],
    right_of: Sequence[int],
    left_bounds: Sequence[tuple[int, int]],
    right_bounds: Sequence[tuple[int, int]],
    total_bounds: Optional[tuple[int, int]] = None,
) -> Optional[list[int]]:
    """Greedy-canonical feasible edge selection, or None.

    Edges are identified by index; edge e joins left node left_of[e] to
    right node right_of[e]. Greedy in index order: an edge is kept exactly
    when keeping it (on top of earlier decisions) still admits a feasible
    completion. When the selection size is pinned (exact node degrees, or
    exact total_bounds) this is the lexicographically least feasible set
    of kept indices; with slack bounds it is the earliest-inclusion
    maximal choice.
    """
    forced: dict[int, int] = {}
    if not _feasible(left_of, right_of, left_bounds, right_bounds, total_bounds, forced):
        return None
    for e in range(len(left_of)):
        forced[e] = 1
        if not _feasible(left_of, right_of, left_bounds, right_bounds, total_bounds, forced):
            forced[e] = 0
    return [e for e in range(len(left_of)) if forced[e] == 1]
