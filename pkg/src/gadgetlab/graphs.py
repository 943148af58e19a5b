"""Small graph routines: strongly connected components, BFS paths, Euler trails."""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable


def strongly_connected_components(nodes: Iterable[Hashable], succ: Callable) -> list[list]:
    """Iterative Tarjan.  Components come out in reverse topological order."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def bfs_path(start, goal: Callable, edges: Callable) -> list | None:
    """Shortest list of edge labels from ``start`` to a node satisfying ``goal``.

    ``edges(node)`` yields ``(label, next_node)`` pairs.
    """
    if goal(start):
        return []
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for label, w in edges(v):
            if w in parent:
                continue
            parent[w] = (v, label)
            if goal(w):
                path = []
                while parent[w] is not None:
                    v2, lab = parent[w]
                    path.append(lab)
                    w = v2
                return path[::-1]
            queue.append(w)
    return None


def reachable(start, succ: Callable) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def euler_trail(edges: list[tuple], start) -> list[int] | None:
    """Hierholzer trail over an undirected multigraph, starting at ``start``.

    ``edges`` is a list of ``(u, v)``; returns edge indices in trail order, or
    ``None`` if no trail from ``start`` uses every edge exactly once.
    """
    if not edges:
        return []
    adj: dict = {}
    for k, (u, v) in enumerate(edges):
        adj.setdefault(u, []).append(k)
        adj.setdefault(v, []).append(k)
    if start not in adj:
        return None
    odd = [v for v, ks in adj.items() if len(ks) % 2]
    if len(odd) not in (0, 2) or (odd and start not in odd):
        return None
    used = [False] * len(edges)
    ptr = {v: 0 for v in adj}
    stack = [(start, None)]
    trail: list[int] = []
    while stack:
        v, via = stack[-1]
        ks = adj[v]
        while ptr[v] < len(ks) and used[ks[ptr[v]]]:
            ptr[v] += 1
        if ptr[v] == len(ks):
            stack.pop()
            if via is not None:
                trail.append(via)
            continue
        k = ks[ptr[v]]
        used[k] = True
        u, w = edges[k]
        stack.append((w if u == v else u, k))
    if len(trail) != len(edges):
        return None
    return trail[::-1]
