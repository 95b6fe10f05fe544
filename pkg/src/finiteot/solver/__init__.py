"""Exact solution of the discrete Kantorovich problem.

The public entry point is solve_kantorovich.  Rational-mode problems (and
any problem with forbidden +inf cells) go through the generic exact
simplex; large all-finite float problems go through the dense float
kernel, which is the compiled extension when it built and a numpy
fallback otherwise (FINITEOT_FORCE_PURE=1 forces the fallback).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from ..coupling import TransportPlan, is_coupling
from ..measure import DiscreteMeasure, integrate
from ..numerics import (
    FLOAT,
    INF,
    RATIONAL,
    DomainError,
    ParameterError,
    ShapeError,
    infer_mode,
    is_inf,
    mul0,
)
from ..space import CostMatrix
from .feasibility import max_flow_feasible
from .simplex import (
    flow_to_matrix,
    transportation_simplex,
    wrap_costs_with_bigm,
)

if os.environ.get("FINITEOT_FORCE_PURE"):
    from . import _core_py as _kernel
else:
    try:
        from . import _core as _kernel
    except ImportError:
        from . import _core_py as _kernel

KERNEL = _kernel.KERNEL_NAME

#: below this cell count the generic simplex is fast enough even on floats
_KERNEL_CUTOFF = 64


@dataclass(frozen=True)
class OTSolution:
    """Optimal plan with its cost; cost is +inf when no finite plan exists."""

    plan: TransportPlan
    optimal_cost: object
    iterations: int
    mode: str
    infeasibility_certificate: dict = None

    @property
    def feasible(self) -> bool:
        return not is_inf(self.optimal_cost)


def cost_of_plan(plan, cost) -> object:
    """sum c_ij pi_ij with 0 * inf = 0; +inf if mass sits on an inf cell."""
    matrix = plan.matrix if isinstance(plan, TransportPlan) else plan
    c = cost.cost if isinstance(cost, CostMatrix) else cost
    if len(matrix) != len(c) or len(matrix[0]) != len(c[0]):
        raise ShapeError("plan and cost shapes differ")
    total = 0
    for crow, prow in zip(c, matrix):
        for cij, pij in zip(crow, prow):
            term = mul0(cij, pij)
            if is_inf(term):
                return INF
            total += term
    return total


def check_lower_bound(cost: CostMatrix, mu1, mu2, plan):
    """Integral of the lower-bound pair against the marginals vs plan cost.

    The bound is the same for every coupling, so it lower-bounds the
    optimum.  Returns (bound, cost, holds).
    """
    if cost.lower_bound is None:
        raise ParameterError("cost matrix carries no lower-bound pair")
    a1, a2 = cost.lower_bound
    bound = integrate(mu1, a1) + integrate(mu2, a2)
    value = cost_of_plan(plan, cost)
    return bound, value, is_inf(value) or value >= bound


def _resolve_mode(mu1, mu2, c, mode):
    if mode is not None:
        return mode
    vals = list(mu1.weights) + list(mu2.weights)
    vals += [x for row in c for x in row if not is_inf(x)]
    return infer_mode(vals)


def solve_kantorovich(
    mu1: DiscreteMeasure,
    mu2: DiscreteMeasure,
    cost,
    mode: str = None,
    tol: float = None,
) -> OTSolution:
    """Minimize the total transport cost over all couplings of (mu1, mu2).

    +inf cost cells are forbidden moves; when they disconnect the problem
    the result has optimal_cost = +inf and a Hall-type cut certificate.
    """
    cm = cost if isinstance(cost, CostMatrix) else CostMatrix(tuple(map(tuple, cost)))
    n, m = cm.shape
    if n != mu1.n or m != mu2.n:
        raise ShapeError(f"cost is {n}x{m} but measures have {mu1.n}, {mu2.n} points")
    mode = _resolve_mode(mu1, mu2, cm.cost, mode)
    if mode not in (RATIONAL, FLOAT):
        raise ParameterError(f"unknown mode {mode!r}")
    if tol is None:
        tol = 0 if mode == RATIONAL else 1e-9 * (1 + float(cm.max_abs_finite()))

    if mode == RATIONAL:
        a = [Fraction(w) for w in mu1.weights]
        b = [Fraction(w) for w in mu2.weights]
        c = [
            [x if is_inf(x) else Fraction(x) for x in row] for row in cm.cost
        ]
    else:
        a = [float(w) for w in mu1.weights]
        b = [float(w) for w in mu2.weights]
        c = [[x if is_inf(x) else float(x) for x in row] for row in cm.cost]

    if cm.has_infinite_entries():
        feasible, certificate = max_flow_feasible(a, b, c, tol=tol)
        if not feasible:
            return OTSolution(None, INF, 0, mode, certificate)
        wrapped, _ = wrap_costs_with_bigm(c)
        flow, iters = transportation_simplex(a, b, wrapped, tol=tol)
        matrix = flow_to_matrix(flow, n, m, zero=a[0] - a[0])
        if mode == FLOAT:
            # roundoff can leave dust on forbidden basic cells; sweep it
            for i in range(n):
                for j in range(m):
                    if is_inf(c[i][j]) and abs(matrix[i][j]) <= tol:
                        matrix[i][j] = 0.0
    elif mode == FLOAT and n * m > _KERNEL_CUTOFF:
        X, iters = _kernel.solve_dense(a, b, c, tol)
        matrix = [[float(x) for x in row] for row in X]
    else:
        flow, iters = transportation_simplex(a, b, c, tol=tol)
        matrix = flow_to_matrix(flow, n, m, zero=a[0] - a[0])

    plan = TransportPlan(tuple(map(tuple, matrix)), mu1, mu2)
    ok, report = is_coupling(plan, mu1, mu2, tol=None if mode == RATIONAL else 1e-9)
    if not ok:
        raise RuntimeError(f"solver returned an invalid plan: {report[:3]}")
    value = cost_of_plan(plan, cm)
    return OTSolution(plan, value, iters, mode)


def verify_restriction_optimality(solution: OTSolution, mask, cost, tol=None):
    """Restricted-and-renormalized optimal plans stay optimal.

    Returns (restricted_cost, resolved_cost, holds).  The input solution is
    assumed optimal; that precondition is not checked here.
    """
    from ..coupling import restrict_and_normalize

    cm = cost if isinstance(cost, CostMatrix) else CostMatrix(tuple(map(tuple, cost)))
    restricted, Z, mu1p, mu2p = restrict_and_normalize(solution.plan, mask)
    restricted_cost = cost_of_plan(restricted, cm)
    resolved = solve_kantorovich(mu1p, mu2p, cm, mode=solution.mode)
    if tol is None:
        tol = 0 if solution.mode == RATIONAL else 1e-9 * (
            1 + float(cm.max_abs_finite())
        )
    if is_inf(restricted_cost) or is_inf(resolved.optimal_cost):
        holds = is_inf(restricted_cost) and is_inf(resolved.optimal_cost)
    else:
        holds = abs(restricted_cost - resolved.optimal_cost) <= tol
    return restricted_cost, resolved.optimal_cost, holds


from .oracles import oracle_basis_enumeration, oracle_permutation  # noqa: E402

__all__ = [
    "KERNEL",
    "OTSolution",
    "cost_of_plan",
    "check_lower_bound",
    "solve_kantorovich",
    "verify_restriction_optimality",
    "oracle_permutation",
    "oracle_basis_enumeration",
]
