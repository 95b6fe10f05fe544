"""Pure-Python (numpy-assisted) dense float transportation simplex.

Fallback used when the compiled extension is unavailable.  Same contract
as finiteot.solver._core.solve_dense: all-finite float costs, balanced
supplies/demands, returns the optimal plan and the pivot count.

Entering cells are picked by the most-negative reduced cost (vectorized
scan); after a long degenerate stall the rule drops to least-index, which
cannot cycle.
"""

from __future__ import annotations

import numpy as np

KERNEL_NAME = "python"


def _northwest_corner(a, b):
    n, m = len(a), len(b)
    supply = a.copy()
    demand = b.copy()
    basis = []
    flow = []
    i = j = 0
    while True:
        q = min(supply[i], demand[j])
        basis.append((i, j))
        flow.append(q)
        supply[i] -= q
        demand[j] -= q
        if i == n - 1 and j == m - 1:
            break
        if supply[i] <= 0 and i < n - 1:
            i += 1
        elif demand[j] <= 0 and j < m - 1:
            j += 1
        elif i < n - 1:
            i += 1
        else:
            j += 1
    return basis, flow


def _duals(basis, C, n, m):
    adj = [[] for _ in range(n + m)]
    for k, (i, j) in enumerate(basis):
        adj[i].append((n + j, k))
        adj[n + j].append((i, k))
    u = np.full(n, np.nan)
    v = np.full(m, np.nan)
    u[0] = 0.0
    stack = [0]
    while stack:
        node = stack.pop()
        for nxt, k in adj[node]:
            i, j = basis[k]
            if nxt < n:
                if np.isnan(u[nxt]):
                    u[nxt] = C[i, j] - v[j]
                    stack.append(nxt)
            elif np.isnan(v[nxt - n]):
                v[nxt - n] = C[i, j] - u[i]
                stack.append(nxt)
    return u, v, adj


def _cycle(basis, adj, enter_i, enter_j, n):
    start, goal = enter_i, n + enter_j
    parent = {start: None}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for nxt, k in adj[node]:
            if nxt not in parent:
                parent[nxt] = (node, k)
                stack.append(nxt)
    path = []
    node = goal
    while parent[node] is not None:
        prev, k = parent[node]
        path.append(k)
        node = prev
    return path  # basic-cell indices from the column node back to the row node


def solve_dense(a, b, C, tol):
    """Minimize <C, X> over the transportation polytope (floats, no inf)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    n, m = C.shape
    basis, flow = _northwest_corner(a, b)
    in_basis = np.zeros((n, m), dtype=bool)
    for i, j in basis:
        in_basis[i, j] = True

    iterations = 0
    stall = 0
    bland = False
    max_iter = 20000 + 200 * (n + m)
    while True:
        u, v, adj = _duals(basis, C, n, m)
        R = C - u[:, None] - v[None, :]
        R[in_basis] = 0.0
        if bland:
            cand = np.argwhere(R < -tol)
            if len(cand) == 0:
                break
            ei, ej = int(cand[0][0]), int(cand[0][1])
        else:
            flat = int(np.argmin(R))
            ei, ej = divmod(flat, m)
            if R[ei, ej] >= -tol:
                break
        iterations += 1
        if iterations > max_iter:
            raise RuntimeError(f"float simplex exceeded {max_iter} pivots")

        path = _cycle(basis, adj, ei, ej, n)
        # signs alternate along [entering] + path, entering positive
        theta = None
        leave_pos = -1
        sign = -1
        for t, k in enumerate(path):
            if sign < 0:
                f = flow[k]
                if theta is None or f < theta - 1e-18 or (
                    f <= theta + 1e-18 and (leave_pos < 0 or basis[k] < basis[leave_pos])
                ):
                    theta = f
                    leave_pos = k
            sign = -sign
        sign = -1
        for k in path:
            flow[k] += sign * theta
            sign = -sign
        li, lj = basis[leave_pos]
        in_basis[li, lj] = False
        in_basis[ei, ej] = True
        basis[leave_pos] = (ei, ej)
        flow[leave_pos] = theta

        if theta <= tol:
            stall += 1
            if stall > 3 * (n + m):
                bland = True
        else:
            stall = 0

    X = np.zeros((n, m))
    for (i, j), f in zip(basis, flow):
        X[i, j] = f
    return X, iterations
