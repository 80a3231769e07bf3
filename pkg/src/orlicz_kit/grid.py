"""Regular-grid functions on the box [-R, R]^n and their distribution functions.

A grid function is piecewise constant on cells, taking the value sampled at
the cell center. Superlevel measures are cell counts times the cell volume.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, SupportOverflowError
from .weights import Weight

__all__ = [
    "GridSpec", "Ball", "ball_volume", "GridFunction", "DistributionProfile",
    "Indicator", "PowerDecay", "Gaussian", "Sum", "Scale",
    "sample", "apply_weight", "translate", "lattice_cells", "distribution_profile",
    "superlevel_measure", "random_grid_function",
]


def ball_volume(n: int, r: float) -> float:
    """Lebesgue measure of a radius-``r`` ball in R^n, ``pi^(n/2) r^n / Gamma(n/2 + 1)``."""
    if n not in (1, 2, 3):
        raise DimensionError(f"ball volume supported for n in (1, 2, 3), got {n!r}")
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r!r}")
    return math.pi ** (n / 2) * r ** n / math.gamma(n / 2 + 1)


@dataclass(frozen=True)
class GridSpec:
    n: int
    R: float
    m: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise DimensionError(f"grid dimension must be 1, 2 or 3, got {self.n!r}")
        if not (math.isfinite(self.R) and self.R > 0):
            raise DomainError(f"half width R must be positive, got {self.R!r}")
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 2 and self.m % 2 == 0):
            raise DomainError(f"cells per axis m must be an even integer >= 2, got {self.m!r}")

    @property
    def h(self):
        return 2.0 * self.R / self.m

    @property
    def cell_volume(self):
        return self.h ** self.n

    @property
    def shape(self):
        return (self.m,) * self.n

    @property
    def axis_centers(self):
        return -self.R + (np.arange(self.m) + 0.5) * self.h

    def points(self):
        """Cell centers, shape ``shape + (n,)``."""
        axes = [self.axis_centers] * self.n
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def to_config(self):
        return {"n": self.n, "R": self.R, "m": self.m}


@dataclass(frozen=True)
class Ball:
    """Open ball ``{x : |x - center| < r}``."""

    center: tuple
    r: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        _ = self.n
        if not (math.isfinite(self.r) and self.r > 0):
            raise DomainError(f"ball radius must be positive, got {self.r!r}")

    @property
    def n(self):
        n = len(self.center)
        if n not in (1, 2, 3):
            raise DimensionError(f"ball center must have 1..3 coordinates, got {n}")
        return n

    @property
    def volume(self):
        return ball_volume(self.n, self.r)

    def contains(self, pts):
        d = np.asarray(pts) - np.asarray(self.center)
        return np.sum(d * d, axis=-1) < self.r * self.r

    def inside_box(self, spec: GridSpec):
        return all(abs(c) + self.r <= spec.R for c in self.center)

    def to_config(self):
        return {"a": list(self.center), "r": self.r, "n": self.n}


class GridFunction:
    """Cell values of a real function; ``values`` has shape ``spec.shape`` and is read-only."""

    __slots__ = ("spec", "values")

    def __init__(self, spec: GridSpec, values):
        vals = np.array(values, dtype=float)
        if vals.size != spec.m ** spec.n:
            raise DimensionError(f"expected {spec.m ** spec.n} values, got {vals.size}")
        vals = vals.reshape(spec.shape)
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("GridFunction is immutable")

    def __repr__(self):
        return f"GridFunction({self.spec!r}, nonzero={int(np.count_nonzero(self.values))})"

    @property
    def flat(self):
        """Values in lexicographic cell order."""
        return self.values.ravel()

    def _same_grid(self, other):
        if other.spec != self.spec:
            raise DimensionError("grid functions live on different grids")

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._same_grid(other)
            return GridFunction(self.spec, self.values * other.values)
        return GridFunction(self.spec, self.values * float(other))

    __rmul__ = __mul__

    def __add__(self, other):
        self._same_grid(other)
        return GridFunction(self.spec, self.values + other.values)

    def __abs__(self):
        return GridFunction(self.spec, np.abs(self.values))

    def restrict(self, ball: Ball):
        """Zero every cell whose center is outside ``ball``."""
        if ball.n != self.spec.n:
            raise DimensionError("ball and grid dimensions differ")
        mask = ball.contains(self.spec.points())
        return GridFunction(self.spec, np.where(mask, self.values, 0.0))


# -- expression catalog -------------------------------------------------------

@dataclass(frozen=True)
class Indicator:
    ball: Ball

    def evaluate(self, spec):
        return self.ball.contains(spec.points()).astype(float)

    def to_config(self):
        return {"kind": "indicator", "ball": self.ball.to_config()}


@dataclass(frozen=True)
class PowerDecay:
    """``|x|**-alpha`` with the value capped at radius ``h/2`` near the origin."""

    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"PowerDecay needs alpha > 0, got {self.alpha!r}")

    def clamp_level(self, spec):
        return (spec.h / 2) ** -self.alpha

    def evaluate(self, spec):
        r = np.sqrt(np.sum(spec.points() ** 2, axis=-1))
        return np.maximum(r, spec.h / 2) ** -self.alpha

    def to_config(self):
        return {"kind": "power_decay", "alpha": self.alpha}


@dataclass(frozen=True)
class Gaussian:
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"Gaussian needs sigma > 0, got {self.sigma!r}")

    def evaluate(self, spec):
        r2 = np.sum(spec.points() ** 2, axis=-1)
        return np.exp(-r2 / (2 * self.sigma ** 2))

    def to_config(self):
        return {"kind": "gaussian", "sigma": self.sigma}


@dataclass(frozen=True)
class Sum:
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise DomainError("Sum needs at least one term")

    def evaluate(self, spec):
        return sum(t.evaluate(spec) for t in self.terms)

    def to_config(self):
        return {"kind": "sum", "terms": [t.to_config() for t in self.terms]}


@dataclass(frozen=True)
class Scale:
    c: float
    expr: object

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise DomainError("scale factor must be finite")

    def evaluate(self, spec):
        return self.c * self.expr.evaluate(spec)

    def to_config(self):
        return {"kind": "scale", "c": self.c, "expr": self.expr.to_config()}


def sample(expr, spec: GridSpec) -> GridFunction:
    """Evaluate a catalog expression at every cell center."""
    ball = getattr(expr, "ball", None)
    if ball is not None and ball.n != spec.n:
        raise DimensionError("indicator ball and grid dimensions differ")
    return GridFunction(spec, expr.evaluate(spec))


def apply_weight(f: GridFunction, u: Weight, inverse: bool = False) -> GridFunction:
    """Pointwise ``u * f`` at cell centers, or ``f / u`` with ``inverse=True``."""
    if u.n != f.spec.n:
        raise DimensionError(f"weight on R^{u.n} applied to a grid on R^{f.spec.n}")
    logu = u._log(f.spec.points())
    with np.errstate(over="ignore"):
        factor = np.exp(-logu if inverse else logu)
    vals = np.where(f.values == 0, 0.0, f.values * factor)
    return GridFunction(f.spec, vals)


def lattice_cells(spec: GridSpec, x) -> tuple:
    """Convert a physical shift vector into whole cells; it must be a lattice vector."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.n,):
        raise DimensionError(f"shift must have {spec.n} components")
    k = np.rint(x / spec.h)
    if not np.allclose(k * spec.h, x, rtol=1e-9, atol=1e-12 * spec.h):
        raise DomainError(f"shift {x.tolist()} is not a multiple of the cell width {spec.h}")
    return tuple(int(v) for v in k)


def translate(f: GridFunction, cells: Sequence[int]) -> GridFunction:
    """``g(y) = f(y - x)`` for the lattice vector ``x = cells * h``.

    Raises :class:`SupportOverflowError` if nonzero cells would leave the box.
    """
    spec = f.spec
    cells = tuple(int(c) for c in np.atleast_1d(cells))
    if len(cells) != spec.n:
        raise DimensionError(f"shift must have {spec.n} components")
    out = np.zeros(spec.shape)
    src, dst = [], []
    for k in cells:
        if abs(k) >= spec.m:
            src.append(slice(0, 0))
            dst.append(slice(0, 0))
        elif k >= 0:
            src.append(slice(0, spec.m - k))
            dst.append(slice(k, spec.m))
        else:
            src.append(slice(-k, spec.m))
            dst.append(slice(0, spec.m + k))
    out[tuple(dst)] = f.values[tuple(src)]
    dropped = np.ones(spec.shape, dtype=bool)
    dropped[tuple(src)] = False
    clipped = float(np.sum(np.abs(f.values[dropped]))) * spec.cell_volume
    if clipped > 0:
        raise SupportOverflowError(
            f"shift {cells} moves support outside the box; clipped mass {clipped:.6g}", clipped)
    return GridFunction(spec, out)


@dataclass(frozen=True, eq=False)
class DistributionProfile:
    """Levels ``v_k`` (increasing) with ``M_k = |{|g| >= v_k}|`` (decreasing)."""

    levels: np.ndarray
    measures: np.ndarray

    def __len__(self):
        return int(self.levels.size)

    def __eq__(self, other):
        if not isinstance(other, DistributionProfile):
            return NotImplemented
        return (np.array_equal(self.levels, other.levels)
                and np.array_equal(self.measures, other.measures))

    def measure_above(self, t):
        """Strict superlevel measure ``|{|g| > t}|`` implied by the profile."""
        k = np.searchsorted(self.levels, t, side="right")
        return float(self.measures[k]) if k < len(self) else 0.0

    def rows(self):
        return list(zip(self.levels.tolist(), self.measures.tolist()))

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["value", "measure"])
        for v, mu in self.rows():
            w.writerow([repr(v), repr(mu)])


def distribution_profile(g: GridFunction) -> DistributionProfile:
    a = np.abs(g.values).ravel()
    a = a[a > 0]
    levels, counts = np.unique(a, return_counts=True)
    at_or_above = np.cumsum(counts[::-1])[::-1]
    return DistributionProfile(levels, at_or_above * g.spec.cell_volume)


def superlevel_measure(g: GridFunction, t: float) -> float:
    """``|{|g| > t}|`` by direct cell counting."""
    if not t >= 0:
        raise DomainError(f"level must be >= 0, got {t!r}")
    return int(np.count_nonzero(np.abs(g.values) > t)) * g.spec.cell_volume


def random_grid_function(spec: GridSpec, rng: np.random.Generator,
                         support: Ball | None = None) -> GridFunction:
    """A seeded random test function.

    Draws one of three families: sparse log-normal cell noise, a sum of a few
    scaled ball indicators, or a scaled radial bump with noise.
    """
    kind = rng.integers(3)
    pts = spec.points()
    if kind == 0:
        density = rng.uniform(0.05, 0.6)
        vals = rng.lognormal(0.0, 1.0, spec.shape) * (rng.random(spec.shape) < density)
    elif kind == 1:
        vals = np.zeros(spec.shape)
        for _ in range(rng.integers(1, 5)):
            c = rng.uniform(-0.6, 0.6, spec.n) * spec.R
            r = rng.uniform(0.05, 0.5) * spec.R
            vals += rng.uniform(0.2, 5.0) * Ball(tuple(c), r).contains(pts)
    else:
        sigma = rng.uniform(0.1, 0.5) * spec.R
        r2 = np.sum(pts ** 2, axis=-1)
        vals = rng.uniform(0.5, 3.0) * np.exp(-r2 / (2 * sigma ** 2))
        vals = vals * (1 + 0.3 * rng.standard_normal(spec.shape))
    vals = vals * rng.choice((-1.0, 1.0), spec.shape)
    f = GridFunction(spec, vals)
    return f.restrict(support) if support is not None else f
