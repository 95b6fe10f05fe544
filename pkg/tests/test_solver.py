import random
from fractions import Fraction as F

import pytest

from finiteot.coupling import TransportPlan, is_coupling, product_coupling
from finiteot.generators import (
    random_cost,
    random_coupling,
    random_rational_measure,
)
from finiteot.measure import DiscreteMeasure, new_measure
from finiteot.numerics import INF, ParameterError, ShapeError, is_inf
from finiteot.solver import (
    check_lower_bound,
    cost_of_plan,
    oracle_basis_enumeration,
    oracle_permutation,
    solve_kantorovich,
    verify_restriction_optimality,
)
from finiteot.space import CostMatrix

HALF = F(1, 2)
UNIFORM2 = new_measure([HALF, HALF])
D2 = ((0, 1), (1, 0))  # two-point unit space distance


class TestCostOfPlan:
    def test_zero_cost(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        assert cost_of_plan(plan, ((0, 0), (0, 0))) == 0

    def test_single_cell(self):
        assert cost_of_plan(((0, 1), (0, 0)), D2) == 1

    def test_zero_times_inf_is_zero(self):
        plan = ((HALF, 0), (0, HALF))
        cost = ((0, INF), (0, 0))
        assert cost_of_plan(plan, cost) == 0

    def test_positive_mass_on_inf_cell(self):
        assert is_inf(cost_of_plan(((HALF, HALF), (0, 0)), ((0, INF), (0, 0))))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            cost_of_plan(((1,),), D2)


class TestLowerBound:
    def test_zero_pair(self):
        cm = CostMatrix(D2, lower_bound=((0, 0), (0, 0)))
        plan = product_coupling(UNIFORM2, UNIFORM2)
        bound, cost, holds = check_lower_bound(cm, UNIFORM2, UNIFORM2, plan)
        assert bound == 0 and cost == HALF and holds

    def test_negative_bound(self):
        cm = CostMatrix(
            ((-1, 0), (0, -1)), lower_bound=((-1, -1), (0, 0))
        )
        plan = product_coupling(UNIFORM2, UNIFORM2)
        bound, cost, holds = check_lower_bound(cm, UNIFORM2, UNIFORM2, plan)
        assert bound == -1 and cost >= bound and holds

    def test_missing_pair(self):
        with pytest.raises(ParameterError):
            check_lower_bound(CostMatrix(D2), UNIFORM2, UNIFORM2, None)

    def test_bound_is_coupling_independent(self):
        # the integral of a1 (+) a2 is the same against every coupling
        rng = random.Random(2)
        a1 = tuple(F(rng.randint(-3, 3)) for _ in range(3))
        a2 = tuple(F(rng.randint(-3, 3)) for _ in range(4))
        mu1 = random_rational_measure(rng, 3)
        mu2 = random_rational_measure(rng, 4)
        sep = tuple(tuple(x + y for y in a2) for x in a1)
        expected = cost_of_plan(product_coupling(mu1, mu2), sep)
        for _ in range(20):
            plan = random_coupling(rng, mu1, mu2)
            assert cost_of_plan(plan, sep) == expected


class TestSolve:
    def test_forced_single_plan(self):
        sol = solve_kantorovich(new_measure([1, 0]), new_measure([0, 1]), D2)
        assert sol.optimal_cost == 1

    def test_identical_measures_cost_zero(self):
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, D2)
        assert sol.optimal_cost == 0

    def test_quarter_shift(self):
        sol = solve_kantorovich(UNIFORM2, new_measure([F(1, 4), F(3, 4)]), D2)
        assert sol.optimal_cost == F(1, 4)

    def test_returned_plan_is_coupling(self):
        rng = random.Random(7)
        for _ in range(50):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            sol = solve_kantorovich(mu1, mu2, random_cost(rng, n, m))
            assert is_coupling(sol.plan, mu1, mu2, tol=0)[0]

    def test_negative_costs_allowed(self):
        cost = ((-2, -1), (-1, -3))
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, cost)
        assert sol.optimal_cost == oracle_basis_enumeration(UNIFORM2, UNIFORM2, cost).optimal_cost

    def test_monotone_in_cost(self):
        rng = random.Random(13)
        for _ in range(30):
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            c = random_cost(rng, n, m)
            bump = tuple(
                tuple(F(rng.randint(0, 4)) for _ in range(m)) for _ in range(n)
            )
            c2 = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(c, bump))
            assert (
                solve_kantorovich(mu1, mu2, c2).optimal_cost
                >= solve_kantorovich(mu1, mu2, c).optimal_cost
            )

    def test_forbidden_arcs_feasible(self):
        cost = ((0, INF), (5, 1))
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, cost)
        assert sol.optimal_cost == HALF
        assert sol.plan.matrix[0][1] == 0

    def test_infeasible_gives_certificate(self):
        cost = ((INF, INF), (0, 0))
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, cost)
        assert not sol.feasible
        cert = sol.infeasibility_certificate
        assert cert["rows"] == [0]
        assert cert["row_mass"] > cert["column_mass"]

    def test_lower_bound_respected(self):
        rng = random.Random(23)
        for _ in range(30):
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            a1 = tuple(F(rng.randint(-3, 0)) for _ in range(n))
            a2 = tuple(F(rng.randint(-3, 0)) for _ in range(m))
            base = random_cost(rng, n, m)
            rows = tuple(
                tuple(base[i][j] + a1[i] + a2[j] for j in range(m)) for i in range(n)
            )
            cm = CostMatrix(rows, lower_bound=(a1, a2))
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            sol = solve_kantorovich(mu1, mu2, cm)
            bound, cost, holds = check_lower_bound(cm, mu1, mu2, sol.plan)
            assert holds and sol.optimal_cost >= bound


class TestOracles:
    def test_permutation_single_point(self):
        mu = new_measure([1])
        assert oracle_permutation(mu, mu, ((3,),)).optimal_cost == 3

    def test_permutation_identity_wins(self):
        sol = oracle_permutation(UNIFORM2, UNIFORM2, ((0, 1), (1, 0)))
        assert sol.optimal_cost == 0

    def test_permutation_shifted_line(self):
        third = F(1, 3)
        mu = new_measure([third] * 3)
        same = tuple(tuple(F(abs(i - j)) for j in range(3)) for i in range(3))
        assert oracle_permutation(mu, mu, same).optimal_cost == 0
        shifted = tuple(tuple(F(abs(i - (j + 1))) for j in range(3)) for i in range(3))
        assert oracle_permutation(mu, mu, shifted).optimal_cost == 1

    def test_permutation_rejects_nonuniform(self):
        with pytest.raises(ParameterError):
            oracle_permutation(new_measure([F(1, 4), F(3, 4)]), UNIFORM2, D2)

    def test_basis_single_cell(self):
        mu = new_measure([1])
        sol = oracle_basis_enumeration(mu, mu, ((7,),))
        assert sol.plan.matrix == ((1,),) and sol.optimal_cost == 7

    def test_basis_segment_polytope(self):
        sol = oracle_basis_enumeration(UNIFORM2, new_measure([F(1, 4), F(3, 4)]), D2)
        assert sol.optimal_cost == F(1, 4)

    def test_basis_zero_cost(self):
        assert oracle_basis_enumeration(UNIFORM2, UNIFORM2, ((0, 0), (0, 0))).optimal_cost == 0

    def test_basis_size_limit(self):
        mu = new_measure([F(1, 6)] * 6)
        with pytest.raises(ParameterError):
            oracle_basis_enumeration(mu, mu, tuple((F(0),) * 6 for _ in range(6)))

    def test_solver_matches_both_oracles(self):
        rng = random.Random(31)
        for _ in range(200):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            c = random_cost(rng, n, m)
            assert (
                solve_kantorovich(mu1, mu2, c).optimal_cost
                == oracle_basis_enumeration(mu1, mu2, c).optimal_cost
            )
        for _ in range(100):
            n = rng.randint(1, 5)
            mu = DiscreteMeasure(tuple(F(1, n) for _ in range(n)))
            c = random_cost(rng, n, n)
            assert (
                solve_kantorovich(mu, mu, c).optimal_cost
                == oracle_permutation(mu, mu, c).optimal_cost
            )


class TestRestrictionOptimality:
    def test_identity_mask(self):
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, D2)
        r, s, holds = verify_restriction_optimality(sol, [[True] * 2] * 2, D2)
        assert holds and r == sol.optimal_cost == s

    def test_single_cell_of_diagonal(self):
        sol = solve_kantorovich(UNIFORM2, UNIFORM2, D2)
        mask = [[sol.plan.matrix[i][j] > 0 and (i, j) == (0, 0) for j in range(2)] for i in range(2)]
        r, s, holds = verify_restriction_optimality(sol, mask, D2)
        assert holds and r == 0 == s

    def test_row_restriction_on_line(self):
        third = F(1, 3)
        mu = new_measure([third] * 3)
        c = tuple(tuple(F(abs(i - j)) for j in range(3)) for i in range(3))
        sol = solve_kantorovich(mu, mu, c)
        mask = [[i in (0, 1) for _ in range(3)] for i in range(3)]
        r, s, holds = verify_restriction_optimality(sol, mask, c)
        assert holds

    def test_random_masks_hold(self):
        rng = random.Random(41)
        checked = 0
        while checked < 100:
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            c = random_cost(rng, n, m)
            sol = solve_kantorovich(mu1, mu2, c)
            mask = [[rng.random() < 0.7 for _ in range(m)] for _ in range(n)]
            if not any(
                mask[i][j] and sol.plan.matrix[i][j] > 0
                for i in range(n)
                for j in range(m)
            ):
                continue
            _, _, holds = verify_restriction_optimality(sol, mask, c)
            assert holds
            checked += 1


class TestFloatMode:
    def test_matches_rational_on_same_instance(self):
        rng = random.Random(53)
        for _ in range(20):
            n, m = rng.randint(3, 10), rng.randint(3, 10)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            c = random_cost(rng, n, m)
            exact = solve_kantorovich(mu1, mu2, c, mode="rational")
            fl = solve_kantorovich(
                DiscreteMeasure(tuple(float(w) for w in mu1.weights)),
                DiscreteMeasure(tuple(float(w) for w in mu2.weights)),
                tuple(tuple(float(x) for x in row) for row in c),
                mode="float",
            )
            assert fl.optimal_cost == pytest.approx(float(exact.optimal_cost), abs=1e-9)
