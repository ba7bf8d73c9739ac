import math

import mpmath as mp
import pytest

import fracdelay as fd

BENCH_B = [1.0, 0.2, -0.05]


def ml_oracle(alpha, z):
    """E_alpha(z) by direct summation at a working precision wide enough for the cancellation.

    Only practical while |z|^(1/alpha) stays in the hundreds.
    """
    peak = abs(z) ** (1.0 / alpha) if z else 0.0
    dps = 30 + int(peak / math.log(10)) + 10
    with mp.workdps(dps):
        a, x = mp.mpf(alpha), mp.mpf(z)
        total, k = mp.mpf(0), 0
        while True:
            term = x**k / mp.gamma(a * k + 1)
            total += term
            if k > peak / alpha + 10 and abs(term) < mp.mpf(10) ** (-dps + 5) * max(abs(total), mp.mpf(1)):
                break
            k += 1
            if k > 10_000:
                break
        return float(total)


def ml_laplace_oracle(alpha, z):
    """E_alpha(-x) as the inverse Laplace transform of s^(alpha-1)/(s^alpha+1) at t = x^(1/alpha)."""
    if z == 0:
        return 1.0
    with mp.workdps(40):
        t = mp.mpf(-z) ** (1 / mp.mpf(alpha))
        return float(mp.invertlaplace(lambda s: s ** (alpha - 1) / (s**alpha + 1), t, method="talbot"))


@pytest.fixture
def ex1_cfg():
    return fd.ProblemConfig(alpha=0.7, a=0.5, T=0.7, y0=1.0, forcing=BENCH_B, h=0.001, t_max=120.0)


@pytest.fixture
def bench_cfg():
    return fd.ProblemConfig(
        alpha=0.7, a=0.5, T=1.0, y0=1.0, forcing=BENCH_B, h=0.001, t_max=10.0, family="caputo"
    )


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        ok, title, detail = VERDICTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
