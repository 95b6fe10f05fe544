"""Feasibility of transport with forbidden cells, via bipartite max-flow.

A finite-cost plan exists iff the max flow from a source (capacities = row
weights) through the finite-cost cells (unbounded) to a sink (capacities =
column weights) saturates the whole unit mass.  When it does not, the
min-cut yields a Hall-type certificate: a set S of rows whose weight
exceeds the total weight of the columns they can reach.
"""

from __future__ import annotations

from collections import deque

from ..numerics import INF, is_inf


def max_flow_feasible(mu1_weights, mu2_weights, cost, tol=0):
    """Check for a finite-cost coupling.  Returns (feasible, certificate).

    certificate is None when feasible, else a dict with the violating row
    set, its reachable columns, and the two masses.
    """
    n, m = len(mu1_weights), len(mu2_weights)
    finite = [[not is_inf(cost[i][j]) for j in range(m)] for i in range(n)]

    # node ids: 0 source, 1..n rows, n+1..n+m cols, n+m+1 sink
    source, sink = 0, n + m + 1
    cap = {}

    def add(uu, vv, c):
        cap[(uu, vv)] = cap.get((uu, vv), 0) + c
        cap.setdefault((vv, uu), 0)

    adj = [[] for _ in range(n + m + 2)]

    def connect(uu, vv, c):
        if vv not in adj[uu]:
            adj[uu].append(vv)
            adj[vv].append(uu)
        add(uu, vv, c)

    for i in range(n):
        connect(source, 1 + i, mu1_weights[i])
    for j in range(m):
        connect(n + 1 + j, sink, mu2_weights[j])
    for i in range(n):
        for j in range(m):
            if finite[i][j]:
                connect(1 + i, n + 1 + j, INF)

    total = sum(mu1_weights)
    pushed = 0
    while True:
        # BFS for a shortest augmenting path (Edmonds-Karp)
        parent = {source: None}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            if node == sink:
                break
            for nxt in adj[node]:
                if nxt not in parent and cap.get((node, nxt), 0) > 0:
                    parent[nxt] = node
                    queue.append(nxt)
        if sink not in parent:
            break
        bottleneck = None
        node = sink
        while parent[node] is not None:
            prev = parent[node]
            c = cap[(prev, node)]
            if bottleneck is None or c < bottleneck:
                bottleneck = c
            node = prev
        node = sink
        while parent[node] is not None:
            prev = parent[node]
            if not is_inf(cap[(prev, node)]):
                cap[(prev, node)] -= bottleneck
            cap[(node, prev)] += bottleneck
            node = prev
        pushed += bottleneck

    if pushed >= total - tol:
        return True, None

    # min cut: rows reachable from the source in the residual graph
    reachable = {source}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for nxt in adj[node]:
            if nxt not in reachable and cap.get((node, nxt), 0) > 0:
                reachable.add(nxt)
                queue.append(nxt)
    rows = sorted(i for i in range(n) if 1 + i in reachable)
    cols = sorted(
        {j for i in rows for j in range(m) if finite[i][j]}
    )
    certificate = {
        "rows": rows,
        "reachable_columns": cols,
        "row_mass": sum(mu1_weights[i] for i in rows),
        "column_mass": sum(mu2_weights[j] for j in cols),
    }
    return False, certificate
