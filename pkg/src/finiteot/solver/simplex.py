"""Transportation simplex over an arbitrary ordered number type.

This is the exact engine: it runs unchanged on Fractions (rational mode)
and on floats (small problems, or as a reference).  Forbidden cells
(+inf cost) are handled by a two-component lexicographic cost (M, value):
a unit of M outweighs any finite value, so the optimum carries mass on a
forbidden cell only when no finite-cost feasible plan exists.

Basis handling is the classic spanning-tree scheme: north-west corner
start, dual values by tree traversal, entering and leaving cells chosen by
least index (Bland's rule), which terminates even under degeneracy.
"""

from __future__ import annotations

from ..numerics import INF, is_inf


class BigM:
    """Lexicographic pair m*M + v where M is larger than any value."""

    __slots__ = ("m", "v")

    def __init__(self, m, v):
        self.m = m
        self.v = v

    def __add__(self, other):
        if isinstance(other, BigM):
            return BigM(self.m + other.m, self.v + other.v)
        return BigM(self.m, self.v + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, BigM):
            return BigM(self.m - other.m, self.v - other.v)
        return BigM(self.m, self.v - other)

    def __rsub__(self, other):
        return BigM(-self.m, other - self.v)

    def __neg__(self):
        return BigM(-self.m, -self.v)

    def __mul__(self, scalar):
        return BigM(self.m * scalar, self.v * scalar)

    __rmul__ = __mul__

    def __lt__(self, other):
        if isinstance(other, BigM):
            return (self.m, self.v) < (other.m, other.v)
        return (self.m, self.v) < (0, other)

    def __eq__(self, other):
        if isinstance(other, BigM):
            return self.m == other.m and self.v == other.v
        return self.m == 0 and self.v == other

    def __repr__(self):
        return f"BigM({self.m}, {self.v})"


def _is_negative(rc, tol):
    """rc < -tol, with the M-component compared exactly."""
    if isinstance(rc, BigM):
        if rc.m != 0:
            return rc.m < 0
        rc = rc.v
    return rc < -tol


def northwest_corner(a, b):
    """Initial basic feasible solution; always n + m - 1 basic cells."""
    n, m = len(a), len(b)
    supply = list(a)
    demand = list(b)
    flow = {}
    basis = []
    i = j = 0
    while True:
        q = supply[i] if supply[i] < demand[j] else demand[j]
        basis.append((i, j))
        flow[(i, j)] = q
        supply[i] -= q
        demand[j] -= q
        if i == n - 1 and j == m - 1:
            break
        # advance one index per step so degenerate ties add zero-flow cells
        if supply[i] == 0 and i < n - 1:
            i += 1
        elif demand[j] == 0 and j < m - 1:
            j += 1
        elif i < n - 1:
            i += 1
        else:
            j += 1
    return flow, basis


def _tree_adjacency(basis, n):
    adj = {}
    for i, j in basis:
        adj.setdefault(i, []).append((n + j, (i, j)))
        adj.setdefault(n + j, []).append((i, (i, j)))
    return adj


def _compute_duals(basis, cost, n, m, zero):
    """Solve u_i + v_j = c_ij over the basis tree, rooted at row 0."""
    adj = _tree_adjacency(basis, n)
    u = [None] * n
    v = [None] * m
    u[0] = zero
    stack = [0]
    while stack:
        node = stack.pop()
        for nxt, (i, j) in adj.get(node, ()):
            if nxt < n:
                if u[nxt] is None:
                    u[nxt] = cost[i][j] - v[j]
                    stack.append(nxt)
            else:
                if v[nxt - n] is None:
                    v[nxt - n] = cost[i][j] - u[i]
                    stack.append(nxt)
    return u, v


def _find_cycle(basis, entering, n):
    """Cells of the unique cycle closed by the entering cell, signed.

    Returns a list of ((i, j), sign) starting with (entering, +1); signs
    alternate along the traversal.
    """
    ei, ej = entering
    adj = _tree_adjacency(basis, n)
    start, goal = ei, n + ej
    parent = {start: None}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for nxt, cell in adj.get(node, ()):
            if nxt not in parent:
                parent[nxt] = (node, cell)
                stack.append(nxt)
    path_cells = []
    node = goal
    while parent[node] is not None:
        prev, cell = parent[node]
        path_cells.append(cell)
        node = prev
    # traversal order: entering edge, then tree path from the column node
    # back to the row node; signs alternate around the (even) cycle
    cycle = [((ei, ej), 1)]
    sign = -1
    for cell in path_cells:
        cycle.append((cell, sign))
        sign = -sign
    return cycle


def transportation_simplex(a, b, cost, tol=0, max_iter=None):
    """Minimize sum c_ij x_ij subject to row sums a and column sums b.

    cost entries may be numbers or BigM pairs; a and b are positive-sum
    supplies/demands with equal totals.  Returns (flow dict on basic cells,
    iterations).
    """
    n, m = len(a), len(b)
    flow, basis = northwest_corner(a, b)
    basis_set = set(basis)
    zero_cost = cost[0][0] - cost[0][0]  # typed zero (BigM or plain)
    if max_iter is None:
        max_iter = 10000 + 200 * (n + m) * max(n, m)
    iterations = 0
    while True:
        u, v = _compute_duals(basis, cost, n, m, zero_cost)
        entering = None
        for i in range(n):
            ui = u[i]
            ci = cost[i]
            for j in range(m):
                if (i, j) in basis_set:
                    continue
                if _is_negative(ci[j] - ui - v[j], tol):
                    entering = (i, j)
                    break
            if entering:
                break
        if entering is None:
            return flow, iterations
        iterations += 1
        if iterations > max_iter:
            raise RuntimeError(
                f"simplex exceeded {max_iter} pivots on a {n}x{m} problem"
            )
        cycle = _find_cycle(basis, entering, n)
        theta = None
        leaving = None
        for cell, sign in cycle:
            if sign < 0:
                f = flow[cell]
                if theta is None or f < theta or (f == theta and cell < leaving):
                    theta = f
                    leaving = cell
        for cell, sign in cycle:
            if cell == entering:
                flow[cell] = theta
            else:
                flow[cell] = flow[cell] + sign * theta
        basis_set.remove(leaving)
        basis_set.add(entering)
        basis[basis.index(leaving)] = entering
        del flow[leaving]


def wrap_costs_with_bigm(cost):
    """Finite c -> (0, c); +inf -> (1, 0).  Returns (wrapped, had_inf)."""
    wrapped = []
    had_inf = False
    for row in cost:
        out = []
        for c in row:
            if is_inf(c):
                out.append(BigM(1, 0))
                had_inf = True
            else:
                out.append(BigM(0, c))
        wrapped.append(out)
    return wrapped, had_inf


def flow_cost(flow, cost):
    """Cost of a basic flow; +inf when positive mass sits on an inf cell."""
    total = 0
    for (i, j), f in flow.items():
        if f == 0:
            continue
        c = cost[i][j]
        if is_inf(c):
            return INF
        total += c * f
    return total


def flow_to_matrix(flow, n, m, zero=0):
    mat = [[zero] * m for _ in range(n)]
    for (i, j), f in flow.items():
        mat[i][j] = f
    return mat
