"""Positive weights on R^n, the submultiplicative class and weight domination.

All comparisons are done on ``log u`` so that fast-growing weights such as
``exp(a |x|**2)`` do not overflow on the probe sets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from .errors import DimensionError, DomainError

__all__ = [
    "Weight", "One", "ExpNorm", "PolyNorm", "GaussExp", "Product", "Quotient",
    "evaluate_weight", "check_submultiplicative", "check_dominates", "dominance_probes",
    "SubmultiplicativeReport", "DominationResult",
]

REL_SLACK = 1e-9
SUBMULT_RADIUS = 16.0
ESCALATION = (1.0, 4.0, 16.0, 64.0)
STABLE_RTOL = 1e-3


def _as_points(x, n):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        if n != 1:
            raise DimensionError(f"scalar point given to a weight on R^{n}")
        arr = arr.reshape(1)
    if arr.shape[-1] != n:
        raise DimensionError(f"points have dimension {arr.shape[-1]}, weight lives on R^{n}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("weight evaluated at a non-finite point")
    return arr


def _check_dim(n):
    if n not in (1, 2, 3):
        raise DimensionError(f"dimension must be 1, 2 or 3, got {n!r}")


class Weight:
    """Base class; subclasses define ``n`` and ``_log`` on the Euclidean norm or on points."""

    n: int

    def _log(self, pts):
        raise NotImplementedError

    def log_value(self, x):
        """``log u(x)`` for points of shape ``(..., n)``."""
        return self._log(_as_points(x, self.n))

    def __call__(self, x):
        pts = _as_points(x, self.n)
        out = np.exp(self._log(pts))
        return float(out) if pts.ndim == 1 else out

    def to_config(self):
        raise NotImplementedError


def _norm(pts):
    return np.sqrt(np.sum(pts * pts, axis=-1))


@dataclass(frozen=True)
class One(Weight):
    n: int = 1

    def __post_init__(self):
        _check_dim(self.n)

    def _log(self, pts):
        return np.zeros(pts.shape[:-1])

    def to_config(self):
        return {"variant": "one", "n": self.n}


@dataclass(frozen=True)
class ExpNorm(Weight):
    """``exp(a |x|)``."""

    a: float
    n: int = 1

    def __post_init__(self):
        _check_dim(self.n)
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError(f"ExpNorm needs a >= 0, got {self.a!r}")

    def _log(self, pts):
        return self.a * _norm(pts)

    def to_config(self):
        return {"variant": "expnorm", "a": self.a, "n": self.n}


@dataclass(frozen=True)
class PolyNorm(Weight):
    """``(1 + |x|)**a``."""

    a: float
    n: int = 1

    def __post_init__(self):
        _check_dim(self.n)
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError(f"PolyNorm needs a >= 0, got {self.a!r}")

    def _log(self, pts):
        return self.a * np.log1p(_norm(pts))

    def to_config(self):
        return {"variant": "polynorm", "a": self.a, "n": self.n}


@dataclass(frozen=True)
class GaussExp(Weight):
    """``exp(a |x|**2)``; positive but not submultiplicative."""

    a: float
    n: int = 1

    def __post_init__(self):
        _check_dim(self.n)
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"GaussExp needs a > 0, got {self.a!r}")

    def _log(self, pts):
        return self.a * np.sum(pts * pts, axis=-1)

    def to_config(self):
        return {"variant": "gaussexp", "a": self.a, "n": self.n}


@dataclass(frozen=True)
class Product(Weight):
    first: Weight
    second: Weight

    def __post_init__(self):
        if self.first.n != self.second.n:
            raise DimensionError("product of weights on different dimensions")

    @property
    def n(self):
        return self.first.n

    def _log(self, pts):
        return self.first._log(pts) + self.second._log(pts)

    def to_config(self):
        return {"variant": "product", "factors": [self.first.to_config(), self.second.to_config()]}


@dataclass(frozen=True)
class Quotient(Weight):
    """``numerator / denominator``; used to derive the bridging weight of ball inclusions."""

    numerator: Weight
    denominator: Weight

    def __post_init__(self):
        if self.numerator.n != self.denominator.n:
            raise DimensionError("quotient of weights on different dimensions")

    @property
    def n(self):
        return self.numerator.n

    def _log(self, pts):
        return self.numerator._log(pts) - self.denominator._log(pts)

    def to_config(self):
        return {"variant": "quotient", "numerator": self.numerator.to_config(),
                "denominator": self.denominator.to_config()}


def evaluate_weight(u: Weight, x) -> float:
    """``u(x)`` at a single point."""
    pts = _as_points(x, u.n)
    if pts.ndim != 1:
        raise DimensionError("evaluate_weight takes a single point")
    return float(np.exp(u._log(pts)))


@dataclass(frozen=True)
class SubmultiplicativeReport:
    passed: bool
    counterexample: Optional[tuple]
    samples: int
    radius: float
    max_log_excess: float

    def to_dict(self):
        ce = None if self.counterexample is None else [list(v) for v in self.counterexample]
        return {"passed": self.passed, "counterexample": ce, "samples": self.samples,
                "radius": self.radius, "max_log_excess": self.max_log_excess}


def _anchor_pairs(n):
    e = np.zeros(n)
    e[0] = 1.0
    return [(c * e, c * e) for c in (0.0, 1.0, 2.0)] + [(e, -e)]


def check_submultiplicative(u: Weight, samples: int = 1024,
                            radius: float = SUBMULT_RADIUS) -> SubmultiplicativeReport:
    """Check ``u(x + y) <= u(x) u(y)`` on a fixed pair set in ``[-radius, radius]^n``.

    The pair set is a few axis anchors followed by an unscrambled Halton
    sequence in ``R^{2n}``; it is identical on every call.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    n = u.n
    anchors = _anchor_pairs(n)
    halton = qmc.Halton(d=2 * n, scramble=False).random(samples)
    halton = (2.0 * halton - 1.0) * radius
    xs = np.vstack([a for a, _ in anchors] + [halton[:, :n]])
    ys = np.vstack([b for _, b in anchors] + [halton[:, n:]])
    excess = u._log(xs + ys) - u._log(xs) - u._log(ys)
    bad = np.nonzero(excess > math.log1p(REL_SLACK))[0]
    ce = None
    if bad.size:
        k = bad[0]
        ce = (tuple(float(v) for v in xs[k]), tuple(float(v) for v in ys[k]))
    return SubmultiplicativeReport(not bad.size, ce, int(xs.shape[0]), radius, float(np.max(excess)))


def dominance_probes(n: int, radius: float) -> np.ndarray:
    """Radial rays plus a 17-point-per-axis lattice in ``[-radius, radius]^n``."""
    dirs = []
    for i in range(n):
        for sgn in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = sgn
            dirs.append(e)
    if n > 1:
        for signs in itertools.product((1.0, -1.0), repeat=n):
            dirs.append(np.array(signs) / math.sqrt(n))
    radii = np.linspace(0.0, radius, 257)
    rays = (radii[:, None, None] * np.array(dirs)[None, :, :]).reshape(-1, n)
    axis = np.linspace(-radius, radius, 17)
    lattice = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    return np.vstack([rays, lattice])


@dataclass(frozen=True)
class DominationResult:
    """``status`` is ``holds``, ``growth`` (ratio increasing across escalations) or ``undetermined``."""

    holds: bool
    status: str
    C: Optional[float]
    witness_x: tuple
    trace: tuple

    def to_dict(self):
        return {"holds": self.holds, "status": self.status, "C": self.C,
                "witness_x": list(self.witness_x),
                "trace": [{"R": r, "max_ratio": m} for r, m in self.trace],
                "probes": "rays (2n axis + 2^n diagonal, 257 radii) + 17^n lattice per R"}


def check_dominates(u1: Weight, u2: Weight) -> DominationResult:
    """Estimate ``C = sup u1/u2`` by sweeping probes with radius escalating through 1, 4, 16, 64."""
    if u1.n != u2.n:
        raise DimensionError("weights live on different dimensions")
    running = -math.inf
    witness = None
    trace = []
    logs = []
    for radius in ESCALATION:
        pts = dominance_probes(u1.n, radius)
        lr = u1._log(pts) - u2._log(pts)
        k = int(np.argmax(lr))
        if lr[k] > running:
            running = float(lr[k])
            witness = tuple(float(v) for v in pts[k])
        logs.append(running)
        with np.errstate(over="ignore"):
            trace.append((radius, float(np.exp(running))))
    trace = tuple(trace)
    # relative change of the running max across the last escalation
    if logs[-1] - logs[-2] < math.log1p(STABLE_RTOL):
        return DominationResult(True, "holds", float(np.exp(logs[-1])), witness, trace)
    if all(b > a for a, b in zip(logs, logs[1:])):
        return DominationResult(False, "growth", None, witness, trace)
    return DominationResult(False, "undetermined", None, witness, trace)
