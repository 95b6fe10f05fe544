"""Agreement between the compiled solver kernel and the pure-Python fallback.

Both kernels expose solve_dense(a, b, C, tol) -> (flow_matrix, iterations).
When the compiled extension is unavailable the cross-checks are skipped and
only the fallback's internal consistency is exercised.
"""

import random

import numpy as np
import pytest

from finiteot.solver import KERNEL, _core_py

try:
    from finiteot.solver import _core
except ImportError:
    _core = None


def random_instance(rng, n, m):
    a = np.array([rng.random() + 0.05 for _ in range(n)])
    a /= a.sum()
    b = np.array([rng.random() + 0.05 for _ in range(m)])
    b /= b.sum()
    C = np.array([[rng.uniform(0, 20) for _ in range(m)] for _ in range(n)])
    return a, b, C


def check_feasible(a, b, flow, tol=1e-9):
    assert flow.min() >= -tol
    np.testing.assert_allclose(flow.sum(axis=1), a, atol=tol)
    np.testing.assert_allclose(flow.sum(axis=0), b, atol=tol)


class TestFallback:
    def test_identity_instance(self):
        a = np.array([0.5, 0.5])
        C = np.array([[0.0, 1.0], [1.0, 0.0]])
        flow, _ = _core_py.solve_dense(a, a, C, 1e-9)
        assert float((flow * C).sum()) == pytest.approx(0.0, abs=1e-12)

    def test_random_instances_feasible(self):
        rng = random.Random(89)
        for _ in range(20):
            n, m = rng.randint(2, 12), rng.randint(2, 12)
            a, b, C = random_instance(rng, n, m)
            flow, _ = _core_py.solve_dense(a, b, C, 1e-9)
            check_feasible(a, b, flow)


@pytest.mark.skipif(_core is None, reason="compiled kernel not built")
class TestCompiled:
    def test_kernel_is_selected(self):
        assert KERNEL == "compiled"

    def test_random_instances_feasible(self):
        rng = random.Random(97)
        for _ in range(20):
            n, m = rng.randint(2, 12), rng.randint(2, 12)
            a, b, C = random_instance(rng, n, m)
            flow, _ = _core.solve_dense(a, b, C, 1e-9)
            check_feasible(a, b, flow)

    def test_costs_agree_with_fallback(self):
        rng = random.Random(101)
        for _ in range(30):
            n, m = rng.randint(2, 20), rng.randint(2, 20)
            a, b, C = random_instance(rng, n, m)
            f1, _ = _core.solve_dense(a, b, C, 1e-9)
            f2, _ = _core_py.solve_dense(a, b, C, 1e-9)
            c1 = float((f1 * C).sum())
            c2 = float((f2 * C).sum())
            assert c1 == pytest.approx(c2, abs=1e-9 * (1 + C.max()))

    def test_costs_agree_midsize(self):
        rng = random.Random(103)
        a, b, C = random_instance(rng, 60, 60)
        f1, _ = _core.solve_dense(a, b, C, 1e-9)
        f2, _ = _core_py.solve_dense(a, b, C, 1e-9)
        assert float((f1 * C).sum()) == pytest.approx(
            float((f2 * C).sum()), abs=1e-8 * (1 + C.max())
        )
