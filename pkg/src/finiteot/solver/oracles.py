"""Independent brute-force oracles for the Kantorovich problem.

Both enumerate the vertices of the feasible set directly and never touch
the simplex code, so agreement with solve_kantorovich is a real check:

* oracle_permutation: for uniform marginals of equal size, the vertices
  are the n! permutation plans (Birkhoff).
* oracle_basis_enumeration: in general, every vertex is supported on a
  spanning tree of the complete bipartite graph with n + m - 1 cells; the
  flows on a tree are forced, so enumerate trees, keep the feasible ones,
  and take the cheapest.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from ..coupling import TransportPlan
from ..measure import DiscreteMeasure
from ..numerics import INF, ParameterError, ShapeError, is_inf, mul0
from ..space import CostMatrix

PERMUTATION_LIMIT = 8
BASIS_NODE_LIMIT = 10


def _cost_rows(cost):
    return cost.cost if isinstance(cost, CostMatrix) else cost


def oracle_permutation(mu1: DiscreteMeasure, mu2: DiscreteMeasure, cost):
    """Minimum over all permutation plans; valid for equal-size uniform marginals."""
    from . import OTSolution  # local import to avoid a cycle

    c = _cost_rows(cost)
    n = mu1.n
    if mu2.n != n or len(c) != n or len(c[0]) != n:
        raise ShapeError("permutation oracle needs square, matching sizes")
    if n > PERMUTATION_LIMIT:
        raise ParameterError(f"permutation oracle limited to n <= {PERMUTATION_LIMIT}")
    unif = Fraction(1, n)
    for w in list(mu1.weights) + list(mu2.weights):
        if w != unif:
            raise ParameterError("permutation oracle needs uniform marginals")

    best_perm, best_cost = None, None
    for perm in permutations(range(n)):
        total = 0
        for i in range(n):
            cij = c[i][perm[i]]
            if is_inf(cij):
                total = INF
                break
            total += cij
        if best_cost is None or total < best_cost:
            best_cost, best_perm = total, perm
    mass = unif if mu1.mode == "rational" else 1.0 / n
    matrix = tuple(
        tuple(mass if j == best_perm[i] else 0 * mass for j in range(n))
        for i in range(n)
    )
    value = INF if is_inf(best_cost) else best_cost * mass
    plan = TransportPlan(matrix, mu1, mu2)
    return OTSolution(plan, value, 0, mu1.mode)


def _spanning_tree_schedules(n, m):
    """All spanning trees of K_{n,m} as leaf-elimination schedules.

    A schedule is a list of (i, j, from_row) directives: processed in
    order, each forces one flow from the current residual supply/demand.
    Cached per shape; the tree set does not depend on the instance.
    """
    nodes = n + m
    cells = [(i, j) for i in range(n) for j in range(m)]
    schedules = []
    for subset in combinations(cells, nodes - 1):
        parent = list(range(nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for i, j in subset:
            ri, rj = find(i), find(n + j)
            if ri == rj:
                acyclic = False
                break
            parent[ri] = rj
        if not acyclic:
            continue
        # acyclic with nodes-1 edges over `nodes` vertices => spanning tree
        degree = [0] * nodes
        adj = {}
        for idx, (i, j) in enumerate(subset):
            degree[i] += 1
            degree[n + j] += 1
            adj.setdefault(i, []).append((n + j, idx))
            adj.setdefault(n + j, []).append((i, idx))
        # peel leaves; each removed edge fixes one flow
        removed = [False] * len(subset)
        deg = degree[:]
        leaves = [x for x in range(nodes) if deg[x] == 1]
        order = []
        while leaves:
            x = leaves.pop()
            for y, idx in adj[x]:
                if not removed[idx]:
                    removed[idx] = True
                    i, j = subset[idx]
                    order.append((i, j, x < n))
                    deg[x] -= 1
                    deg[y] -= 1
                    if deg[y] == 1:
                        leaves.append(y)
                    break
        schedules.append(tuple(order))
    return schedules


_SCHEDULE_CACHE = {}


def oracle_basis_enumeration(mu1: DiscreteMeasure, mu2: DiscreteMeasure, cost):
    """Minimum over all basic feasible solutions of the transportation polytope."""
    from . import OTSolution

    c = _cost_rows(cost)
    n, m = mu1.n, mu2.n
    if len(c) != n or len(c[0]) != m:
        raise ShapeError("cost shape does not match the measures")
    if n + m > BASIS_NODE_LIMIT:
        raise ParameterError(
            f"basis enumeration limited to n + m <= {BASIS_NODE_LIMIT}"
        )
    key = (n, m)
    if key not in _SCHEDULE_CACHE:
        _SCHEDULE_CACHE[key] = _spanning_tree_schedules(n, m)
    schedules = _SCHEDULE_CACHE[key]

    a0, b0 = list(mu1.weights), list(mu2.weights)
    best_cost, best_flows, best_sched = None, None, None
    for sched in schedules:
        a = a0[:]
        b = b0[:]
        flows = []
        feasible = True
        for i, j, from_row in sched:
            f = a[i] if from_row else b[j]
            if f < 0:
                feasible = False
                break
            a[i] -= f
            b[j] -= f
            flows.append(f)
        if not feasible:
            continue
        total = 0
        for (i, j, _), f in zip(sched, flows):
            term = mul0(c[i][j], f)
            if is_inf(term):
                total = INF
                break
            total += term
        if best_cost is None or total < best_cost:
            best_cost, best_flows, best_sched = total, flows, sched

    if best_cost is None:
        return OTSolution(None, INF, 0, mu1.mode)
    zero = a0[0] - a0[0]
    matrix = [[zero] * m for _ in range(n)]
    for (i, j, _), f in zip(best_sched, best_flows):
        matrix[i][j] = f
    plan = TransportPlan(tuple(map(tuple, matrix)), mu1, mu2)
    return OTSolution(plan, best_cost, 0, mu1.mode)
