import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracdelay import ForcingSeries, conformable_exp, eval_forcing, named_forcing


def test_constant_forcing():
    f = ForcingSeries([2.5])
    assert eval_forcing(f, 0.3, 7.0) == 2.5
    assert eval_forcing(f, 0.3, 0.0) == 2.5


def test_bench_value():
    f = ForcingSeries([1.0, 0.2, -0.05])
    u = 1 / 0.7
    assert eval_forcing(f, 0.7, 1.0) == pytest.approx(1 + 0.2 * u - 0.05 * u * u, rel=1e-15)
    assert eval_forcing(f, 0.7, 1.0) == pytest.approx(1.1836735, abs=1e-7)


def test_linear_at_alpha_one():
    assert eval_forcing(ForcingSeries([0, 1]), 1.0, 3.0) == 3.0


def test_value_at_zero_is_b0():
    assert eval_forcing(ForcingSeries([0.4, 3.0, 1.0]), 0.5, 0.0) == 0.4


def test_vectorised():
    f = ForcingSeries([1.0, 0.2, -0.05])
    t = np.linspace(0, 3, 7)
    out = eval_forcing(f, 0.7, t)
    assert out.shape == t.shape
    assert out[3] == eval_forcing(f, 0.7, float(t[3]))


def test_named():
    assert named_forcing("exp", 1.0, 2).coeffs == (1.0, 1.0, 0.5)
    assert named_forcing("sin", 99.0, 3).coeffs == pytest.approx((0, 1, 0, -1 / 6))
    assert named_forcing("cos", K=2).coeffs == (1.0, 0.0, -0.5)
    with pytest.raises(ValueError):
        named_forcing("tan")


@pytest.mark.parametrize("lam", [-1.0, 0.5, 1.0])
@pytest.mark.parametrize("alpha", [0.4, 0.7, 1.0])
def test_exp_forcing_converges(lam, alpha):
    f = named_forcing("exp", lam, 40)
    t = (alpha * np.linspace(0, 5, 30)) ** (1 / alpha)
    np.testing.assert_allclose(eval_forcing(f, alpha, t), conformable_exp(lam, alpha, t), rtol=1e-10, atol=1e-10)


def test_trig_forcing():
    alpha = 0.6
    t = (alpha * np.linspace(0, 4, 20)) ** (1 / alpha)
    u = t**alpha / alpha
    np.testing.assert_allclose(eval_forcing(named_forcing("sin", K=40), alpha, t), np.sin(u), atol=1e-12)
    np.testing.assert_allclose(eval_forcing(named_forcing("cos", K=40), alpha, t), np.cos(u), atol=1e-12)


@given(
    coeffs=st.lists(st.floats(-5, 5), min_size=1, max_size=6),
    a1=st.floats(0.2, 1.0),
    a2=st.floats(0.2, 1.0),
    u=st.floats(0.0, 3.0),
)
def test_depends_on_u_only(coeffs, a1, a2, u):
    f = ForcingSeries(coeffs)
    t1 = (a1 * u) ** (1 / a1)
    t2 = (a2 * u) ** (1 / a2)
    scale = sum(abs(c) for c in coeffs) * max(1.0, u) ** len(coeffs)
    assert eval_forcing(f, a1, t1) == pytest.approx(eval_forcing(f, a2, t2), abs=1e-12 * scale + 1e-300)


def test_validation_and_parse():
    with pytest.raises(ValueError):
        ForcingSeries([])
    with pytest.raises(ValueError):
        ForcingSeries([1.0, math.nan])
    f = ForcingSeries.parse("1.0, 0.2,-0.05")
    assert f.coeffs == (1.0, 0.2, -0.05) and f.K == 2
    assert f.truncated(0).coeffs == (1.0,)
    with pytest.raises(ValueError):
        ForcingSeries.parse("1.0,x")
