import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmsvtail import kernels
from lmsvtail.tails import NoiseSpec, survival_z

BACKENDS = kernels.available_backends()


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")
class TestParity:
    py, cy = BACKENDS["python"], BACKENDS.get("cython")

    def test_hermite_table(self):
        x = np.linspace(-6, 6, 101)
        assert np.allclose(self.py.hermite_table(x, 12), self.cy.hermite_table(x, 12), rtol=1e-14, atol=0)

    def test_count_exceedances(self):
        rng = np.random.default_rng(0)
        y = rng.pareto(1.0, 5000)
        t = np.sort(rng.uniform(0, 20, 40))
        assert np.array_equal(self.py.count_exceedances(y, t), self.cy.count_exceedances(y, t))

    def test_hill_curve(self):
        y = np.sort(np.random.default_rng(1).pareto(2.0, 300) + 1)[::-1].copy()
        assert np.allclose(self.py.hill_curve(y, 200), self.cy.hill_curve(y, 200), rtol=1e-12)

    @pytest.mark.parametrize("family,kw", [("pareto", {}), ("pareto_second_order", {"beta": 0.7}),
                                           ("log_perturbed", {})])
    def test_conditional_sums(self, family, kw):
        noise = NoiseSpec(1.3, family, **kw)
        x = np.random.default_rng(2).standard_normal(2000)
        levels = np.array([0.5, 3.0, 40.0])
        args = (x, 0.8, levels, noise.alpha, noise.scale, noise.beta or 0.0,
                kernels.FAMILY_CODES[family], noise.support_lower)
        a, b = self.py.conditional_exceedance_sums(*args), self.cy.conditional_exceedance_sums(*args)
        assert np.allclose(a, b, rtol=1e-12)
        direct = survival_z(noise, levels[:, None] * np.exp(-0.8 * x)[None, :]).sum(axis=1)
        assert np.allclose(a, direct, rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=60),
       st.lists(st.floats(-10, 10), min_size=1, max_size=10))
def test_count_exceedances_bruteforce(y, t):
    y, t = np.array(y), np.sort(np.array(t))
    expected = np.array([(y > v).sum() for v in t])
    for impl in BACKENDS.values():
        assert np.array_equal(impl.count_exceedances(y, t), expected)
