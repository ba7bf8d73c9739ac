"""Special functions: log-gamma, Mittag-Leffler E_alpha(z), conformable exponential."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import NonConvergenceError

#: |z| beyond which E_alpha(-|z|) uses the algebraic asymptotic expansion.
ASYMPTOTIC_CROSSOVER = 30.0

_EPS = np.finfo(float).eps


def log_gamma(x):
    """ln Gamma(x) for x > 0; scalars and arrays are both accepted."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"log_gamma is defined here only for x > 0, got {x!r}")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MLParams:
    alpha: float
    z: float
    tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


def mittag_leffler(alpha, z=None, tol: float = 1e-12, max_terms: int = 10_000) -> float:
    """One-parameter Mittag-Leffler function E_alpha(z) = sum z^k / Gamma(alpha k + 1).

    Call either as ``mittag_leffler(MLParams(...))`` or
    ``mittag_leffler(alpha, z, tol=..., max_terms=...)``.

    Evaluation route for real z:

    * alpha == 1: ``exp(z)``.
    * z >= 0, or z < 0 when the alternating series loses fewer digits than
      ``tol`` allows: Taylor series, terms built in log space and summed
      with ``math.fsum``.
    * z < -30: algebraic asymptotic expansion
      sum_{k>=1} (-1)^(k+1) |z|^-k / Gamma(1 - alpha k), truncated at its
      smallest term.
    * otherwise (moderate negative z, heavy cancellation): the Laplace-type
      representation
      E_alpha(-x) = sin(alpha pi)/(alpha pi) * int_0^inf exp(-(x u)^(1/alpha)) / (u^2 + 2u cos(alpha pi) + 1) du.
    """
    p = alpha if isinstance(alpha, MLParams) else MLParams(float(alpha), float(z), tol, max_terms)
    a, x = p.alpha, p.z
    if x == 0.0:
        return 1.0
    if a == 1.0:
        return math.exp(x) if x < 709.0 else math.inf
    if x > 0.0:
        return _ml_series(a, x, p.tol, p.max_terms)

    r = -x
    if r > ASYMPTOTIC_CROSSOVER:
        try:
            return _ml_asymptotic(a, r, p.tol, p.max_terms)
        except NonConvergenceError:
            return _ml_integral(a, r, p.tol)
    # largest series term is roughly exp(r^(1/alpha)) / alpha
    log_peak = r ** (1.0 / a) - math.log(a)
    if log_peak + math.log(_EPS) < math.log(p.tol) - math.log(100.0):
        return _ml_series(a, x, p.tol, p.max_terms)
    return _ml_integral(a, r, p.tol)


def _ml_series(a, x, tol, max_terms):
    log_abs = math.log(abs(x))
    negative = x < 0
    # the terms only start shrinking after k ~ |x|^(1/a) / a
    k_peak = abs(x) ** (1.0 / a) / a
    terms = [1.0]
    for k in range(1, max_terms + 1):
        lt = k * log_abs - math.lgamma(a * k + 1.0)
        if lt > 709.0:
            return math.inf
        t = math.exp(lt)
        terms.append(-t if (negative and k % 2) else t)
        if k > k_peak and t <= tol * 1e-3 * max(abs(math.fsum(terms)), 1e-300):
            return math.fsum(terms)
        if k > k_peak and t < 1e-300:
            return math.fsum(terms)
    raise NonConvergenceError(
        f"Mittag-Leffler series for alpha={a}, z={x} did not reach tol={tol} in {max_terms} terms"
    )


def _ml_asymptotic(a, r, tol, max_terms):
    total = 0.0
    prev = math.inf
    for k in range(1, max_terms + 1):
        t = special.rgamma(1.0 - a * k) * r ** (-k)
        if t == 0.0:
            # 1/Gamma has a zero when 1 - a k is a non-positive integer
            continue
        if abs(t) > prev:
            break
        prev = abs(t)
        total += t if k % 2 else -t
        if abs(t) < tol * 1e-3 * abs(total):
            return total
    if prev <= tol * abs(total):
        return total
    raise NonConvergenceError(f"asymptotic expansion of E_{a}(-{r}) stalls above tol={tol}")


def _ml_integral(a, r, tol):
    c = math.cos(a * math.pi)
    scale = r ** (1.0 / a)

    def integrand(u):
        return math.exp(-scale * u ** (1.0 / a)) / (u * u + 2.0 * u * c + 1.0)

    eps_abs = min(tol * 1e-2, 1e-14)
    head, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=eps_abs, epsrel=1e-13, limit=400)
    tail, _ = integrate.quad(integrand, 1.0, math.inf, epsabs=eps_abs, epsrel=1e-13, limit=400)
    return math.sin(a * math.pi) / (a * math.pi) * (head + tail)


def conformable_exp(lam, alpha, t):
    """e_alpha(lam, t) = exp(lam t^alpha / alpha).

    Overflow saturates to +inf and raises a ``RuntimeWarning``.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise ValueError("conformable_exp needs t >= 0")
    with np.errstate(over="ignore"):
        out = np.exp(lam * tt**alpha / alpha)
    if np.any(np.isinf(out)):
        warnings.warn("conformable_exp overflowed to +inf", RuntimeWarning, stacklevel=2)
    return float(out) if out.ndim == 0 else out
