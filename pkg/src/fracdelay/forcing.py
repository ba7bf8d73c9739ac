"""Analytic forcing b(t) = sum_k b_k (t^alpha / alpha)^k."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ForcingSeries:
    """Truncated coefficient list b_0 .. b_K in the basis u^k, u = t^alpha/alpha."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float]):
        cs = tuple(float(c) for c in coeffs)
        if not cs:
            raise ValueError("ForcingSeries needs at least one coefficient")
        if not all(math.isfinite(c) for c in cs):
            raise ValueError(f"ForcingSeries coefficients must be finite, got {cs}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def truncated(self, K: int) -> "ForcingSeries":
        if K < 0:
            raise ValueError("K must be >= 0")
        return ForcingSeries(self.coeffs[: K + 1])

    @classmethod
    def parse(cls, text: str) -> "ForcingSeries":
        """Build from a comma-separated list such as ``"1.0,0.2,-0.05"``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        try:
            return cls([float(p) for p in parts])
        except ValueError as exc:
            raise ValueError(f"cannot parse forcing coefficients {text!r}: {exc}") from None


def eval_forcing(f: ForcingSeries, alpha: float, t):
    """Horner evaluation of b(t); b(0) = b_0 (0^0 taken as 1)."""
    tt = np.asarray(t, dtype=float)
    u = tt**alpha / alpha
    acc = np.full_like(u, f.coeffs[-1])
    for c in reversed(f.coeffs[:-1]):
        acc = acc * u + c
    return float(acc) if acc.ndim == 0 else acc


def named_forcing(kind: str, lam: float = 1.0, K: int = 10) -> ForcingSeries:
    """Taylor coefficients of exp(lam z), sin z or cos z up to order K.

    ``lam`` is only used for ``kind="exp"``.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    coeffs = []
    for k in range(K + 1):
        if kind == "exp":
            coeffs.append(lam**k / math.factorial(k))
        elif kind == "sin":
            coeffs.append(0.0 if k % 2 == 0 else (-1) ** ((k - 1) // 2) / math.factorial(k))
        elif kind == "cos":
            coeffs.append(0.0 if k % 2 else (-1) ** (k // 2) / math.factorial(k))
        else:
            raise ValueError(f"unknown forcing kind {kind!r}; expected exp, sin or cos")
    return ForcingSeries(coeffs)
