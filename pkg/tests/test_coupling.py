import random
from fractions import Fraction as F

import pytest

from finiteot.coupling import (
    TransportPlan,
    is_coupling,
    marginals,
    product_coupling,
    restrict_and_normalize,
    tail_mass_bound_check,
    verify_coupling_via_test_functions,
)
from finiteot.generators import random_coupling, random_rational_measure
from finiteot.measure import new_measure
from finiteot.numerics import EmptyRestrictionError, ShapeError

HALF = F(1, 2)
UNIFORM2 = new_measure([HALF, HALF])


class TestProductCoupling:
    def test_uniform_product(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        assert plan.matrix == ((F(1, 4), F(1, 4)), (F(1, 4), F(1, 4)))

    def test_dirac_times_dirac(self):
        plan = product_coupling(new_measure([1, 0]), new_measure([0, 1]))
        assert plan.matrix == ((0, 1), (0, 0))

    def test_general_product_has_right_marginals(self):
        mu1 = new_measure([F(1, 4), F(3, 4)])
        mu2 = new_measure([F(1, 3), F(2, 3)])
        plan = product_coupling(mu1, mu2)
        assert plan.matrix == (
            (F(1, 12), F(2, 12)),
            (F(3, 12), F(6, 12)),
        )
        assert is_coupling(plan, mu1, mu2)[0]

    def test_always_a_coupling(self):
        rng = random.Random(5)
        for _ in range(100):
            mu1 = random_rational_measure(rng, rng.randint(1, 5))
            mu2 = random_rational_measure(rng, rng.randint(1, 5))
            assert is_coupling(product_coupling(mu1, mu2), mu1, mu2)[0]


class TestMarginals:
    def test_product_marginals(self):
        m1, m2 = marginals(TransportPlan(((F(1, 4),) * 2,) * 2))
        assert m1.weights == (HALF, HALF) and m2.weights == (HALF, HALF)

    def test_antidiagonal(self):
        m1, m2 = marginals(TransportPlan(((0, 1), (0, 0))))
        assert m1.weights == (1, 0) and m2.weights == (0, 1)

    def test_diagonal_thirds(self):
        t = F(1, 3)
        m1, m2 = marginals(TransportPlan(((t, 0, 0), (0, t, 0), (0, 0, t))))
        assert m1.weights == (t, t, t) == m2.weights


class TestIsCoupling:
    def test_mass_deficit_detected(self):
        ok, report = is_coupling(((HALF, 0), (0, F(1, 4))), UNIFORM2, UNIFORM2)
        assert not ok
        assert any(kind == "row" and idx == 1 for kind, idx, _ in report)

    def test_diagonal_half(self):
        assert is_coupling(((HALF, 0), (0, HALF)), UNIFORM2, UNIFORM2)[0]

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            is_coupling(((1,),), UNIFORM2, UNIFORM2)


class TestTestFunctionCharacterization:
    def test_zero_functions_always_pass(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        zero = (0, 0)
        assert verify_coupling_via_test_functions(plan, UNIFORM2, UNIFORM2, [(zero, zero)])

    def test_indicator_on_valid_coupling(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        assert verify_coupling_via_test_functions(
            plan, UNIFORM2, UNIFORM2, [((1, 0), (0, 0))]
        )

    def test_indicator_catches_wrong_marginal(self):
        # all mass at (0,0): integral of 1_{x=0} is 1, but mu1 gives 1/2
        bad = ((1, 0), (0, 0))
        assert not verify_coupling_via_test_functions(
            bad, UNIFORM2, UNIFORM2, [((1, 0), (0, 0))]
        )

    def test_agrees_with_direct_check_on_random_matrices(self):
        rng = random.Random(11)
        for _ in range(200):
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            plan = random_coupling(rng, mu1, mu2)
            mat = [list(row) for row in plan.matrix]
            if rng.random() < 0.5:  # corrupt half of them
                mat[rng.randrange(n)][rng.randrange(m)] += F(
                    rng.choice([-1, 1]), rng.randint(3, 9)
                )
            direct, _ = is_coupling(mat, mu1, mu2)
            assert direct == verify_coupling_via_test_functions(mat, mu1, mu2)


class TestTailBound:
    def test_full_sets_zero_tail(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        lhs, rhs, holds = tail_mass_bound_check(plan, {0, 1}, {0, 1})
        assert lhs == 0 and rhs == 0 and holds

    def test_product_corner(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        lhs, rhs, holds = tail_mass_bound_check(plan, {0}, {0})
        assert lhs == F(3, 4) and rhs == 1 and holds

    def test_diagonal_corner(self):
        plan = TransportPlan(((HALF, 0), (0, HALF)))
        lhs, rhs, holds = tail_mass_bound_check(plan, {0}, {0})
        assert lhs == HALF and rhs == 1 and holds

    def test_holds_on_random_couplings_and_subsets(self):
        rng = random.Random(3)
        for _ in range(300):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            plan = random_coupling(rng, mu1, mu2)
            K1 = {i for i in range(n) if rng.random() < 0.5}
            K2 = {j for j in range(m) if rng.random() < 0.5}
            assert tail_mass_bound_check(plan, K1, K2, mu1, mu2)[2]

    def test_bad_index(self):
        with pytest.raises(IndexError):
            tail_mass_bound_check(product_coupling(UNIFORM2, UNIFORM2), {5}, set())


class TestRestriction:
    def test_identity_mask(self):
        plan = product_coupling(UNIFORM2, UNIFORM2)
        restricted, Z, m1, m2 = restrict_and_normalize(plan, [[True] * 2] * 2)
        assert restricted.matrix == plan.matrix
        assert Z == 1
        assert m1.weights == UNIFORM2.weights and m2.weights == UNIFORM2.weights

    def test_single_cell(self):
        plan = TransportPlan(((HALF, 0), (0, HALF)))
        restricted, Z, m1, m2 = restrict_and_normalize(
            plan, [[True, False], [False, False]]
        )
        assert restricted.matrix == ((1, 0), (0, 0))
        assert Z == HALF
        assert m1.weights == (1, 0) and m2.weights == (1, 0)

    def test_empty_mask_rejected(self):
        plan = TransportPlan(((HALF, 0), (0, HALF)))
        with pytest.raises(EmptyRestrictionError):
            restrict_and_normalize(plan, [[False, True], [True, False]])

    def test_unnormalizing_recovers_minorant(self):
        rng = random.Random(19)
        for _ in range(100):
            n, m = rng.randint(2, 4), rng.randint(2, 4)
            mu1 = random_rational_measure(rng, n)
            mu2 = random_rational_measure(rng, m)
            plan = random_coupling(rng, mu1, mu2)
            mask = [[rng.random() < 0.6 for _ in range(m)] for _ in range(n)]
            try:
                restricted, Z, m1, m2 = restrict_and_normalize(plan, mask)
            except EmptyRestrictionError:
                continue
            assert restricted.total_mass() == 1
            assert is_coupling(restricted, m1, m2)[0]
            for i in range(n):
                for j in range(m):
                    assert restricted.matrix[i][j] * Z <= plan.matrix[i][j]
