"""Young functions: evaluation, generalized inverse, doubling and ordering checks.

Every "for all t > 0" statement is certified on a geometric probe grid
2**-20 .. 2**20 with four points per octave (see :func:`probe_grid`).
Inequalities get a relative slack of ``REL_SLACK`` to absorb rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, PreconditionError

__all__ = [
    "REL_SLACK", "BISECT_RTOL", "probe_grid",
    "YoungFunction", "Power", "ScaledPower", "ExpMinusOne", "PowerSum", "Tabulated",
    "evaluate", "generalized_inverse", "validate_young", "check_delta2",
    "check_precedes", "check_inverse_product", "lemma12_transfer",
    "YoungValidation", "Delta2Report", "PrecedenceResult", "InverseProductResult",
]

REL_SLACK = 1e-9
BISECT_RTOL = 1e-12

PROBE_MIN_EXP = -20
PROBE_MAX_EXP = 20
PER_OCTAVE = 4

# bracket limits for numeric inversion
_R_CAP = 2.0 ** 1000
_R_FLOOR = 2.0 ** -1000


def probe_grid(lo_exp=PROBE_MIN_EXP, hi_exp=PROBE_MAX_EXP, per_octave=PER_OCTAVE):
    """Geometric grid ``2**(k/per_octave)`` for k spanning ``[lo_exp, hi_exp]`` octaves."""
    k = np.arange(lo_exp * per_octave, hi_exp * per_octave + 1)
    return np.exp2(k / per_octave)


GRID_DESCRIPTION = (
    f"geometric 2^{PROBE_MIN_EXP}..2^{PROBE_MAX_EXP}, {PER_OCTAVE} points per octave"
)


class YoungFunction:
    """Base class of the Young-function catalog.

    Subclasses implement ``_eval`` on a non-negative float array and, when a
    closed form exists, ``_closed_inverse``.
    """

    def _eval(self, t):
        raise NotImplementedError

    def _closed_inverse(self, s):
        return None

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(np.isnan(arr)) or np.any(arr < 0):
            raise DomainError(f"Young function evaluated at negative or NaN argument: {t!r}")
        with np.errstate(over="ignore", invalid="ignore"):
            out = self._eval(arr)
        if out.ndim == 0:
            return float(out)
        return out

    def inverse(self, s):
        """Generalized inverse ``inf{r >= 0 : phi(r) > s}``; vectorized over ``s``."""
        arr = np.asarray(s, dtype=float)
        if arr.ndim == 0:
            return generalized_inverse(self, float(arr))
        return np.array([generalized_inverse(self, float(v)) for v in arr.ravel()]).reshape(arr.shape)

    def to_config(self):
        raise NotImplementedError


def _check_exponent(p):
    if not (math.isfinite(p) and p >= 1):
        raise DomainError(f"exponent p must be a finite real >= 1, got {p!r}")


def _check_coefficient(c):
    if not (math.isfinite(c) and c > 0):
        raise DomainError(f"coefficient must be a finite real > 0, got {c!r}")


@dataclass(frozen=True)
class Power(YoungFunction):
    """``t**p`` with ``p >= 1``."""

    p: float

    def __post_init__(self):
        _check_exponent(self.p)

    def _eval(self, t):
        return np.power(t, self.p)

    def _closed_inverse(self, s):
        return s ** (1.0 / self.p)

    def to_config(self):
        return {"variant": "power", "p": self.p}


@dataclass(frozen=True)
class ScaledPower(YoungFunction):
    """``c * t**p``."""

    c: float
    p: float

    def __post_init__(self):
        _check_coefficient(self.c)
        _check_exponent(self.p)

    def _eval(self, t):
        return self.c * np.power(t, self.p)

    def _closed_inverse(self, s):
        return (s / self.c) ** (1.0 / self.p)

    def to_config(self):
        return {"variant": "scaled_power", "c": self.c, "p": self.p}


@dataclass(frozen=True)
class ExpMinusOne(YoungFunction):
    """``exp(t) - 1``. Fails the doubling condition."""

    def _eval(self, t):
        return np.expm1(t)

    def _closed_inverse(self, s):
        return math.log1p(s)

    def to_config(self):
        return {"variant": "exp_minus_one"}


@dataclass(frozen=True)
class PowerSum(YoungFunction):
    """``c1 * t**p1 + c2 * t**p2``; inverted numerically."""

    c1: float
    p1: float
    c2: float
    p2: float

    def __post_init__(self):
        for c in (self.c1, self.c2):
            _check_coefficient(c)
        for p in (self.p1, self.p2):
            _check_exponent(p)

    def _eval(self, t):
        return self.c1 * np.power(t, self.p1) + self.c2 * np.power(t, self.p2)

    def to_config(self):
        return {"variant": "power_sum", "c1": self.c1, "p1": self.p1, "c2": self.c2, "p2": self.p2}


@dataclass(frozen=True)
class Tabulated(YoungFunction):
    """Piecewise-linear function through ``nodes``; the last slope is extended to infinity.

    Structural requirements (first abscissa 0, strictly increasing abscissae,
    finite ordinates) are enforced here. Convexity, monotonicity and growth
    are left to :func:`validate_young` so a bad table can still be reported on.
    """

    nodes: tuple = field()

    def __post_init__(self):
        nodes = tuple((float(t), float(v)) for t, v in self.nodes)
        if len(nodes) < 2:
            raise DomainError("tabulated Young function needs at least two nodes")
        ts = [t for t, _ in nodes]
        if ts[0] != 0.0:
            raise DomainError("first node must sit at t = 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("node abscissae must be strictly increasing")
        if not all(math.isfinite(t) and math.isfinite(v) for t, v in nodes):
            raise DomainError("node coordinates must be finite")
        object.__setattr__(self, "nodes", nodes)

    @property
    def _arrays(self):
        ts = np.array([t for t, _ in self.nodes])
        vs = np.array([v for _, v in self.nodes])
        return ts, vs

    def _eval(self, t):
        ts, vs = self._arrays
        slope = (vs[-1] - vs[-2]) / (ts[-1] - ts[-2])
        inside = np.interp(t, ts, vs)
        return np.where(t > ts[-1], vs[-1] + slope * (t - ts[-1]), inside)

    def slopes(self):
        ts, vs = self._arrays
        return np.diff(vs) / np.diff(ts)

    def to_config(self):
        return {"variant": "tabulated", "nodes": [[t, v] for t, v in self.nodes]}


def evaluate(phi: YoungFunction, t: float) -> float:
    """Pointwise value ``phi(t)``; negative ``t`` raises :class:`DomainError`."""
    return phi(float(t))


def _bisect_inverse(phi, s):
    # Bracket [lo, hi] with phi(lo) <= s < phi(hi), starting from r = 1.
    hi = 1.0
    if phi(hi) > s:
        lo = 0.5
        while phi(lo) > s:
            hi = lo
            lo *= 0.5
            if lo < _R_FLOOR:
                return 0.0
    else:
        lo = hi
        hi = 2.0
        while not phi(hi) > s:
            lo = hi
            hi *= 2.0
            if hi > _R_CAP:
                raise DomainError(f"no r with phi(r) > {s}: function does not grow past it")
    for _ in range(200):
        if hi - lo <= BISECT_RTOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if phi(mid) > s:
            hi = mid
        else:
            lo = mid
    return lo


def generalized_inverse(phi: YoungFunction, s: float) -> float:
    """``inf{r >= 0 : phi(r) > s}``.

    Closed forms are used for the power and exponential variants. Otherwise the
    root is bracketed by doubling/halving from 1 and bisected to relative width
    1e-12; the lower endpoint is returned so ``phi(result) <= s`` always holds.
    """
    s = float(s)
    if not math.isfinite(s) or s < 0:
        raise DomainError(f"generalized inverse needs finite s >= 0, got {s!r}")
    if s == 0.0:
        # catalog functions are strictly increasing on (0, inf)
        return 0.0
    closed = phi._closed_inverse(s)
    if closed is not None:
        return float(closed)
    return _bisect_inverse(phi, s)


@dataclass(frozen=True)
class YoungValidation:
    passed: bool
    failed_check: Optional[str] = None
    witness_t: Optional[float] = None
    detail: str = ""
    grid: str = GRID_DESCRIPTION

    def to_dict(self):
        return {"passed": self.passed, "failed_check": self.failed_check,
                "witness_t": self.witness_t, "detail": self.detail, "grid": self.grid}


def validate_young(phi: YoungFunction) -> YoungValidation:
    """Check the Young-function axioms on the probe grid.

    Checks run in order and the first failure is reported: ``phi(0) = 0``,
    positivity at the smallest probe (rejects flat leading segments),
    monotonicity, convexity (node slopes for tabulated input, then midpoint
    convexity over all probe pairs), and growth ``phi(2**20) > 1``.
    """
    zero = phi(0.0)
    if zero != 0.0:
        return YoungValidation(False, "zero", 0.0, f"phi(0) = {zero}")

    t = probe_grid()
    vals = phi(t)
    if not vals[0] > 0:
        return YoungValidation(False, "strictly_increasing", float(t[0]),
                               "phi vanishes near 0; flat leading segments are not admitted")

    bad = np.nonzero(vals[1:] < vals[:-1])[0]
    if bad.size:
        i = bad[0] + 1
        return YoungValidation(False, "monotone", float(t[i]),
                               f"phi({t[i]:.6g}) = {vals[i]:.6g} < phi({t[i - 1]:.6g}) = {vals[i - 1]:.6g}")

    if isinstance(phi, Tabulated):
        slopes = phi.slopes()
        drop = np.nonzero(slopes[1:] < slopes[:-1])[0]
        if drop.size:
            k = drop[0] + 1
            node_t = phi.nodes[k][0]
            return YoungValidation(False, "convex", node_t,
                                   f"slope falls from {slopes[k - 1]:.6g} to {slopes[k]:.6g} at node t = {node_t:.6g}")

    pts = np.concatenate(([0.0], t))
    pv = np.concatenate(([0.0], vals))
    i, j = np.triu_indices(pts.size, k=1)
    mid = 0.5 * (pts[i] + pts[j])
    lhs = phi(mid)
    rhs = 0.5 * (pv[i] + pv[j])
    with np.errstate(invalid="ignore"):
        viol = np.isfinite(rhs) & (lhs > rhs * (1 + REL_SLACK))
    if np.any(viol):
        q = np.nonzero(viol)[0][0]
        return YoungValidation(False, "convex", float(mid[q]),
                               f"midpoint convexity fails for s = {pts[i[q]]:.6g}, t = {pts[j[q]]:.6g}")

    if not vals[-1] > 1:
        return YoungValidation(False, "growth", float(t[-1]), f"phi(2^{PROBE_MAX_EXP}) = {vals[-1]:.6g} <= 1")
    return YoungValidation(True, detail="all Young-function checks passed")


@dataclass(frozen=True)
class Delta2Report:
    holds: bool
    K: Optional[float]
    witness_t: float
    grid: str = GRID_DESCRIPTION

    def to_dict(self):
        return {"holds": self.holds, "K": self.K, "witness_t": self.witness_t, "grid": self.grid}


# one decade of the probe grid, in points
_DECADE = int(math.ceil(math.log2(10) * PER_OCTAVE))


def check_delta2(phi: YoungFunction) -> Delta2Report:
    """Estimate the doubling constant ``K = sup phi(2t)/phi(t)`` on the probe grid.

    The condition is declared to fail when the ratio overflows or when it is
    still strictly increasing (by more than 0.1 %) across the top decade.
    """
    t = probe_grid()
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        ratio = phi(2 * t) / phi(t)
    finite = np.isfinite(ratio)
    if not np.all(finite):
        k = int(np.nonzero(~finite)[0][0])
        return Delta2Report(False, None, float(t[k]))
    top = ratio[-_DECADE:]
    if np.all(np.diff(top) > 0) and top[-1] > top[0] * (1 + 1e-3):
        return Delta2Report(False, None, float(t[-1]))
    k = int(np.argmax(ratio))
    return Delta2Report(True, float(ratio[k]), float(t[k]))


@dataclass(frozen=True)
class PrecedenceResult:
    """Outcome of a ``phi1(t) <= phi2(C t)`` search.

    ``status`` is ``"holds"`` (``C`` set) or ``"undetermined"``; absence of a
    constant is never certified. ``frontier`` lists ``(t, C_needed)`` at the
    probes that drive the failure, ``C_needed = inf`` beyond the ladder cap.
    """

    C: Optional[float]
    status: str
    frontier: tuple = ()
    grid: str = GRID_DESCRIPTION

    @property
    def holds(self):
        return self.status == "holds"

    def to_dict(self):
        return {"C": self.C, "status": self.status,
                "frontier": [list(p) for p in self.frontier], "grid": self.grid}


# probes over which a required constant must stop growing toward a grid edge
_EDGE_WINDOW = 5 * PER_OCTAVE


def check_precedes(phi1: YoungFunction, phi2: YoungFunction) -> PrecedenceResult:
    """Smallest ladder ``C`` with ``phi1(t) <= phi2(C t)`` at every probe ``t``.

    For each probe the least sufficient ladder constant is found; the answer
    is their maximum. If some probe needs more than the cap 2**20, or the
    needed constant is still growing toward either end of the probe grid,
    the result is ``undetermined``.
    """
    t = probe_grid()
    ladder = probe_grid()
    lhs = phi1(t)[:, None]
    rhs = phi2(t[:, None] * ladder[None, :])
    ok = lhs <= rhs * (1 + REL_SLACK)
    # phi2 non-decreasing: ok is monotone along the ladder axis
    any_ok = ok.any(axis=1)
    first = np.where(any_ok, ok.argmax(axis=1), -1)
    needed = np.where(any_ok, ladder[np.maximum(first, 0)], np.inf)

    if not np.all(any_ok):
        bad = np.nonzero(~any_ok)[0]
        frontier = tuple((float(t[k]), math.inf) for k in bad)
        return PrecedenceResult(None, "undetermined", frontier)

    growing = []
    if needed[0] > needed[_EDGE_WINDOW]:
        growing.append(slice(0, _EDGE_WINDOW + 1))
    if needed[-1] > needed[-1 - _EDGE_WINDOW]:
        growing.append(slice(len(t) - 1 - _EDGE_WINDOW, len(t)))
    if growing:
        frontier = tuple((float(t[k]), float(needed[k]))
                         for sl in growing for k in range(len(t))[sl])
        return PrecedenceResult(None, "undetermined", frontier)
    k = int(np.argmax(needed))
    return PrecedenceResult(float(needed[k]), "holds", ((float(t[k]), float(needed[k])),))


@dataclass(frozen=True)
class InverseProductResult:
    holds: bool
    max_ratio: float
    argmax_s: float
    grid: str = GRID_DESCRIPTION

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {"holds": self.holds, "max_ratio": self.max_ratio, "argmax_s": self.argmax_s,
                "grid": self.grid}


def check_inverse_product(phi1: YoungFunction, phi2: YoungFunction,
                          phi3: YoungFunction) -> InverseProductResult:
    """Test ``phi1^-1(s) * phi2^-1(s) <= phi3^-1(s)`` on the probe grid."""
    s = probe_grid()
    ratio = phi1.inverse(s) * phi2.inverse(s) / phi3.inverse(s)
    k = int(np.argmax(ratio))
    return InverseProductResult(bool(np.all(ratio <= 1 + REL_SLACK)), float(ratio[k]), float(s[k]))


def lemma12_transfer(phi1: YoungFunction, phi2: YoungFunction, C1: float, C2: float,
                     s: float) -> bool:
    """From ``phi2^-1(s) <= C1 phi1^-1(C2 s)`` conclude ``phi1(t/C1) <= C2 phi2(t)`` at ``t = phi2^-1(s)``.

    Raises :class:`PreconditionError` when the hypothesis fails at ``s``; the
    return value is the truth of the conclusion.
    """
    if not (C1 > 0 and C2 > 0 and s > 0):
        raise DomainError("C1, C2 and s must be positive")
    t = generalized_inverse(phi2, s)
    premise_rhs = C1 * generalized_inverse(phi1, C2 * s)
    if t > premise_rhs * (1 + REL_SLACK):
        raise PreconditionError(
            f"phi2^-1({s}) = {t:.12g} exceeds C1 * phi1^-1(C2 s) = {premise_rhs:.12g}")
    return bool(phi1(t / C1) <= C2 * phi2(t) * (1 + REL_SLACK))
