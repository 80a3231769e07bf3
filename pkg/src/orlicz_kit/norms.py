"""Weighted weak Lebesgue and weak Orlicz quasi-norms of grid functions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grid import DistributionProfile, GridFunction, apply_weight, distribution_profile
from .weights import One, Weight
from .young import REL_SLACK, YoungFunction

__all__ = [
    "NormResult", "weak_modular", "weak_orlicz_norm", "weak_lebesgue_norm",
    "profile_orlicz_norm", "profile_lebesgue_norm", "modular_bound_check",
    "weighted_profile", "quasi_triangle_ratio",
]

B_CAP = 2.0 ** 64
B_FLOOR = 2.0 ** -64
RTOL = 1e-12


@dataclass(frozen=True)
class NormResult:
    """Quasi-norm value with its bisection bracket.

    ``value`` is the upper endpoint, so the modular is <= 1 there. ``finite``
    is False when the modular stays above 1 up to ``b = 2**64``.
    """

    value: float
    bracket: tuple
    evaluations: int
    finite: bool = True

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"value": self.value, "bracket": list(self.bracket), "finite": self.finite,
                "evaluations": self.evaluations}


def weighted_profile(f: GridFunction, u: Weight | None = None) -> DistributionProfile:
    return distribution_profile(apply_weight(f, u if u is not None else One(f.spec.n)))


def weak_modular(profile: DistributionProfile, phi: YoungFunction, b: float) -> float:
    """``sup_t phi(t) |{|g|/b > t}|``, i.e. ``max_k phi(v_k / b) M_k``.

    Exact for step functions: the superlevel measure equals ``M_k`` for ``t``
    just below ``v_k/b`` and ``phi`` is left-continuous.
    """
    if not b > 0:
        raise DomainError(f"scale b must be positive, got {b!r}")
    if len(profile) == 0:
        return 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        vals = phi(profile.levels / b) * profile.measures
    return float(np.max(vals))


def profile_orlicz_norm(profile: DistributionProfile, phi: YoungFunction) -> NormResult:
    """Bisect ``inf{b > 0 : modular(b) <= 1}`` on an already built profile."""
    if len(profile) == 0:
        return NormResult(0.0, (0.0, 0.0), 0)
    evals = 0

    def feasible(b):
        nonlocal evals
        evals += 1
        return weak_modular(profile, phi, b) <= 1.0

    hi = 1.0
    if feasible(hi):
        lo = 0.5
        while feasible(lo):
            hi = lo
            lo *= 0.5
            if lo < B_FLOOR:
                return NormResult(0.0, (0.0, hi), evals)
    else:
        lo = hi
        hi = 2.0
        while not feasible(hi):
            lo = hi
            hi *= 2.0
            if hi > B_CAP:
                return NormResult(math.inf, (lo, math.inf), evals, finite=False)
    while hi - lo > RTOL * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return NormResult(hi, (lo, hi), evals)


def profile_lebesgue_norm(profile: DistributionProfile, p: float) -> NormResult:
    if not p >= 1:
        raise DomainError(f"exponent p must be >= 1, got {p!r}")
    if len(profile) == 0:
        return NormResult(0.0, (0.0, 0.0), 0)
    value = float(np.max(profile.levels * profile.measures ** (1.0 / p)))
    return NormResult(value, (value, value), len(profile))


def weak_orlicz_norm(phi: YoungFunction, u: Weight | None, f: GridFunction) -> NormResult:
    """``||f||`` in the weighted weak Orlicz space of ``phi`` and ``u`` (``None`` means ``u = 1``)."""
    return profile_orlicz_norm(weighted_profile(f, u), phi)


def weak_lebesgue_norm(p: float, u: Weight | None, f: GridFunction) -> NormResult:
    """``sup_t t |{|u f| > t}|^(1/p)``, computed as ``max_k v_k M_k^(1/p)``."""
    if not p >= 1:
        raise DomainError(f"exponent p must be >= 1, got {p!r}")
    return profile_lebesgue_norm(weighted_profile(f, u), p)


def modular_bound_check(phi: YoungFunction, u: Weight | None, f: GridFunction, eps: float) -> bool:
    """Whether the modular at ``b = ||f|| + eps`` is at most 1."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    profile = weighted_profile(f, u)
    norm = profile_orlicz_norm(profile, phi)
    if not norm.finite:
        raise DomainError("norm is not finite at this truncation")
    return weak_modular(profile, phi, norm.value + eps) <= 1.0 + REL_SLACK


def quasi_triangle_ratio(phi: YoungFunction, u: Weight | None, f: GridFunction,
                         g: GridFunction) -> float:
    """``||f + g|| / (||f|| + ||g||)``, the empirical quasi-triangle constant for one pair."""
    denom = weak_orlicz_norm(phi, u, f).value + weak_orlicz_norm(phi, u, g).value
    if denom == 0:
        return 0.0
    return weak_orlicz_norm(phi, u, f + g).value / denom
