import math

import numpy as np
import pytest

from lmsvtail.errors import QuadratureError
from lmsvtail.quadrature import QuadPolicy, expect_normal, hermite_rule


def test_rule_normalized():
    x, w = hermite_rule(64)
    assert w.sum() == pytest.approx(1.0, rel=1e-14)
    assert np.dot(w, x**2) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("p,moment", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_even_moments(p, moment):
    assert expect_normal(lambda x: x**p) == pytest.approx(moment, rel=1e-12)


def test_mgf():
    assert expect_normal(lambda x: np.exp(1.3 * x)) == pytest.approx(math.exp(1.3**2 / 2), rel=1e-12)


def test_vector_output():
    out = expect_normal(lambda x: np.column_stack([x**2, np.exp(x)]))
    assert out == pytest.approx([1.0, math.exp(0.5)], rel=1e-12)


def test_breakpoints_indicator():
    # P(X > 0.37) with an explicit jump location
    from scipy.stats import norm
    val = expect_normal(lambda x: (x > 0.37).astype(float), breakpoints=(0.37,))
    assert val == pytest.approx(norm.sf(0.37), rel=1e-12)


def test_kink():
    val = expect_normal(lambda x: np.maximum(x, 0.0), breakpoints=(0.0,))
    assert val == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)


def test_nonconvergence_raises():
    policy = QuadPolicy(n_start=2, n_max=4)
    with pytest.raises(QuadratureError):
        expect_normal(lambda x: np.abs(x) ** 0.5 * np.sin(40 * x), policy=policy)
