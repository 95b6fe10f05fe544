"""Transport plans between two measures.

A plan is an n x m nonnegative matrix whose row sums are the first
measure's weights and whose column sums are the second's.  Everything here
is constructive: product plans, marginal extraction, verification both
directly and through sum-separable test functions, the sub-rectangle tail
bound, and restriction with renormalization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measure import DiscreteMeasure, TestFunction, indicator, integrate
from .numerics import (
    DomainError,
    EmptyRestrictionError,
    ShapeError,
    check_extended,
    default_tol,
    infer_mode,
)


@dataclass(frozen=True)
class TransportPlan:
    """Joint mass matrix coupling mu1 (rows) with mu2 (columns)."""

    matrix: tuple
    mu1: DiscreteMeasure = None
    mu2: DiscreteMeasure = None

    def __post_init__(self):
        mat = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if not mat or not mat[0]:
            raise ShapeError("empty plan matrix")
        m = len(mat[0])
        for row in mat:
            if len(row) != m:
                raise ShapeError("plan matrix is not rectangular")
            for x in row:
                check_extended(x, "plan entry")

    @property
    def shape(self):
        return (len(self.matrix), len(self.matrix[0]))

    @property
    def mode(self) -> str:
        return infer_mode(x for row in self.matrix for x in row)

    def total_mass(self):
        return sum(sum(row) for row in self.matrix)


def marginals(plan: TransportPlan):
    """Row-sum and column-sum measures of the plan."""
    n, m = plan.shape
    first = tuple(sum(row) for row in plan.matrix)
    second = tuple(sum(plan.matrix[i][j] for i in range(n)) for j in range(m))
    return DiscreteMeasure(first), DiscreteMeasure(second)


def product_coupling(mu1: DiscreteMeasure, mu2: DiscreteMeasure) -> TransportPlan:
    """The independent coupling mu1 (x) mu2; witnesses that plans always exist."""
    mat = tuple(tuple(a * b for b in mu2.weights) for a in mu1.weights)
    return TransportPlan(mat, mu1, mu2)


def is_coupling(plan, mu1, mu2, tol=None):
    """Check the coupling invariants; returns (ok, report).

    The report lists ("nonnegativity" | "row" | "column", index, magnitude)
    entries, worst violation first.
    """
    matrix = plan.matrix if isinstance(plan, TransportPlan) else tuple(
        tuple(row) for row in plan
    )
    n = len(matrix)
    m = len(matrix[0]) if matrix else 0
    if n != mu1.n or m != mu2.n:
        raise ShapeError(
            f"plan is {n}x{m} but measures have {mu1.n} and {mu2.n} points"
        )
    if tol is None:
        vals = [x for row in matrix for x in row]
        tol = default_tol(infer_mode(vals + list(mu1.weights) + list(mu2.weights)))
    report = []
    for i in range(n):
        for j in range(m):
            if matrix[i][j] < -tol:
                report.append(("nonnegativity", (i, j), -matrix[i][j]))
    for i in range(n):
        gap = abs(sum(matrix[i]) - mu1.weights[i])
        if gap > tol:
            report.append(("row", i, gap))
    for j in range(m):
        gap = abs(sum(matrix[i][j] for i in range(n)) - mu2.weights[j])
        if gap > tol:
            report.append(("column", j, gap))
    report.sort(key=lambda v: v[2], reverse=True)
    return (not report), report


def verify_coupling_via_test_functions(plan, mu1, mu2, pairs=None, tol=None) -> bool:
    """Marginal check through sum-separable test functions phi1 (+) phi2.

    For each pair, compares sum_{ij} (phi1[i] + phi2[j]) pi[ij] against
    int phi1 dmu1 + int phi2 dmu2.  With all singleton-indicator pairs this
    is equivalent to the direct marginal check (given unit total mass).
    """
    matrix = plan.matrix if isinstance(plan, TransportPlan) else tuple(
        tuple(row) for row in plan
    )
    n = len(matrix)
    m = len(matrix[0]) if matrix else 0
    if n != mu1.n or m != mu2.n:
        raise ShapeError("plan shape does not match the measures")
    if tol is None:
        tol = default_tol(infer_mode(x for row in matrix for x in row))
    if pairs is None:
        pairs = all_indicator_pairs(n, m)
    # a negative cell can hide behind cancelling integrals; reject it up front
    if any(x < -tol for row in matrix for x in row):
        return False
    for phi1, phi2 in pairs:
        v1 = phi1.values if isinstance(phi1, TestFunction) else tuple(phi1)
        v2 = phi2.values if isinstance(phi2, TestFunction) else tuple(phi2)
        if len(v1) != n or len(v2) != m:
            raise ShapeError("test-function lengths do not match the plan")
        lhs = sum(
            (v1[i] + v2[j]) * matrix[i][j]
            for i in range(n)
            for j in range(m)
            if matrix[i][j] != 0
        )
        rhs = integrate(mu1, v1) + integrate(mu2, v2)
        if abs(lhs - rhs) > tol:
            return False
    return True


def all_indicator_pairs(n: int, m: int):
    """(1_{i}, 0) and (0, 1_{j}) pairs spanning all marginal constraints."""
    zero_m = TestFunction((0,) * m)
    zero_n = TestFunction((0,) * n)
    pairs = [(indicator(i, n), zero_m) for i in range(n)]
    pairs += [(zero_n, indicator(j, m)) for j in range(m)]
    return pairs


def tail_mass_bound_check(plan: TransportPlan, K1, K2, mu1=None, mu2=None, tol=0):
    """Mass outside K1 x K2 against the sum of marginal tail masses.

    Returns (lhs, rhs, holds) with lhs = pi((K1 x K2)^c) and
    rhs = mu1(K1^c) + mu2(K2^c); the union bound makes holds always true
    for genuine couplings.
    """
    n, m = plan.shape
    K1, K2 = set(K1), set(K2)
    for i in K1:
        if not 0 <= i < n:
            raise IndexError(f"row index {i} out of range")
    for j in K2:
        if not 0 <= j < m:
            raise IndexError(f"column index {j} out of range")
    if mu1 is None or mu2 is None:
        mu1, mu2 = marginals(plan)
    lhs = sum(
        plan.matrix[i][j]
        for i in range(n)
        for j in range(m)
        if i not in K1 or j not in K2
    )
    rhs = sum(mu1.weights[i] for i in range(n) if i not in K1) + sum(
        mu2.weights[j] for j in range(m) if j not in K2
    )
    return lhs, rhs, lhs <= rhs + tol


def restrict_and_normalize(plan: TransportPlan, mask):
    """Keep the masked cells, renormalize to unit mass.

    Returns (restricted plan, Z, mu1', mu2') where Z is the retained mass.
    The mask is any n x m truth-valued matrix; an all-false (or zero-mass)
    selection is an error since renormalization needs positive mass.
    """
    n, m = plan.shape
    if len(mask) != n or any(len(row) != m for row in mask):
        raise ShapeError("mask shape does not match the plan")
    kept = [
        [plan.matrix[i][j] if mask[i][j] else 0 for j in range(m)] for i in range(n)
    ]
    Z = sum(sum(row) for row in kept)
    if Z <= 0:
        raise EmptyRestrictionError("restriction keeps zero mass")
    normalized = tuple(tuple(x / Z for x in row) for row in kept)
    mu1p = DiscreteMeasure(tuple(sum(row) for row in normalized))
    mu2p = DiscreteMeasure(
        tuple(sum(normalized[i][j] for i in range(n)) for j in range(m))
    )
    return TransportPlan(normalized, mu1p, mu2p), Z, mu1p, mu2p


def plan_between(matrix, mu1, mu2, tol=None) -> TransportPlan:
    """Construct a plan and insist it couples the given measures."""
    plan = TransportPlan(tuple(tuple(row) for row in matrix), mu1, mu2)
    ok, report = is_coupling(plan, mu1, mu2, tol)
    if not ok:
        kind, idx, mag = report[0]
        raise DomainError(f"not a coupling: {kind} violated at {idx} by {mag}")
    return plan
