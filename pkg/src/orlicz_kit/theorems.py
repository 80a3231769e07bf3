"""Executable checks of the inclusion, Hölder, translation and ball-norm results.

Each verifier returns a :class:`VerificationReport`. Unmet hypotheses give a
``precondition-unmet`` report rather than an exception, so batch runs can
record them next to passing and failing checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .grid import Ball, GridFunction, GridSpec, Indicator, apply_weight, sample, translate
from .norms import weak_lebesgue_norm, weak_orlicz_norm
from .weights import Product, Quotient, Weight, check_dominates, check_submultiplicative
from .young import (
    Power, YoungFunction, check_delta2, check_inverse_product, check_precedes,
    generalized_inverse,
)

__all__ = [
    "VerificationReport", "Witness", "PASS_SLACK",
    "char_norm_oracle", "verify_char_norm", "verify_inclusion_lebesgue",
    "verify_inclusion_orlicz", "verify_ball_ratio", "verify_translation_bounds",
    "verify_holder", "verify_ball_inclusion", "verify_ball_inclusion_lebesgue",
    "probe_no_global_inclusion",
]

PASS_SLACK = 1e-6


@dataclass(frozen=True)
class Witness:
    descriptor: str
    lhs: float
    rhs: float

    @property
    def ratio(self):
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    def to_dict(self):
        return {"input": self.descriptor, "lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio}


@dataclass(frozen=True)
class VerificationReport:
    """Pass/fail record of one claim.

    ``max_violation_ratio`` is the largest ``lhs/rhs`` over the witnesses, with
    the claimed constant folded into ``rhs``; a claim passes when it is at
    most ``1 + 1e-6``.
    """

    claim: str
    constant_used: Optional[float]
    max_violation_ratio: float
    witnesses: tuple
    passed: bool
    status: str
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "claim": self.claim,
            "status": self.status,
            "passed": self.passed,
            "constant_used": self.constant_used,
            "max_violation_ratio": self.max_violation_ratio,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "notes": self.notes,
        }


def _report(claim, constant, witnesses, notes=None):
    witnesses = tuple(witnesses)
    worst = max((w.ratio for w in witnesses), default=0.0)
    passed = worst <= 1 + PASS_SLACK
    return VerificationReport(claim, constant, worst, witnesses, passed,
                              "passed" if passed else "failed", dict(notes or {}))


def _unmet(claim, reason, notes=None):
    notes = dict(notes or {})
    notes["reason"] = reason
    return VerificationReport(claim, None, math.nan, (), False, "precondition-unmet", notes)


def _describe(k, f):
    return f"test[{k}] nonzero_cells={int(np.count_nonzero(f.values))}"


def _box_ratio(u1, u2, spec, mask=None):
    """``max u1/u2`` over the cell centers (optionally restricted by ``mask``)."""
    pts = spec.points()
    lr = u1._log(pts) - u2._log(pts)
    if mask is not None:
        if not np.any(mask):
            return 0.0
        lr = lr[mask]
    return float(np.exp(np.max(lr)))


def _domination_constant(u1, u2, spec):
    """Constant for ``u1 <= C u2``: probe sweep, raised to cover the cell centers."""
    if u1 == u2:
        return 1.0, {"weights": "identical, C = 1"}
    dom = check_dominates(u1, u2)
    if not dom.holds:
        return None, {"domination": dom.to_dict()}
    c = dom.C if spec is None else max(dom.C, _box_ratio(u1, u2, spec))
    return c, {"domination": dom.to_dict()}


# -- characteristic functions of balls ---------------------------------------

def char_norm_oracle(phi: YoungFunction, ball: Ball) -> float:
    """Closed-form quasi-norm of a ball indicator, ``1 / phi^-1(1/|B|)``."""
    return 1.0 / generalized_inverse(phi, 1.0 / ball.volume)


def verify_char_norm(phi: YoungFunction, u: Weight, ball: Ball, spec: GridSpec) -> VerificationReport:
    """Grid norm of ``chi_B / u`` under weight ``u`` against the closed form.

    Passes when the relative error is at most ``max(2%, 4n/m)``.
    """
    if ball.n != spec.n or u.n != spec.n:
        raise DimensionError("ball, weight and grid dimensions differ")
    if not ball.inside_box(spec):
        raise DomainError(f"ball {ball} is not contained in the box [-{spec.R}, {spec.R}]^{spec.n}")
    chi = sample(Indicator(ball), spec)
    f = apply_weight(chi, u, inverse=True)
    grid = weak_orlicz_norm(phi, u, f).value
    oracle = char_norm_oracle(phi, ball)
    tol = max(0.02, 4 * spec.n / spec.m)
    rel = abs(grid - oracle) / oracle
    w = Witness(f"indicator {ball.to_config()} on {spec.to_config()}", rel, tol)
    return _report("ball-indicator-norm", tol, [w],
                   {"grid_norm": grid, "oracle": oracle, "relative_error": rel})


# -- inclusion criteria --------------------------------------------------------

def verify_inclusion_lebesgue(p: float, u1: Weight, u2: Weight,
                              tests: Sequence[GridFunction]) -> VerificationReport:
    """``||f||_{p,u1} <= C ||f||_{p,u2}`` with ``C`` the domination constant of ``u1`` by ``u2``."""
    claim = "weighted-lebesgue-inclusion"
    spec = tests[0].spec if tests else None
    C, notes = _domination_constant(u1, u2, spec)
    notes["set_inclusion"] = "implied by the norm inequality; not checked separately"
    if C is None:
        return _unmet(claim, "u1 is not dominated by u2 on the probes", notes)
    witnesses = []
    for k, f in enumerate(tests):
        lhs = weak_lebesgue_norm(p, u1, f).value
        rhs = C * weak_lebesgue_norm(p, u2, f).value
        witnesses.append(Witness(_describe(k, f), lhs, rhs))
    return _report(claim, C, witnesses, notes)


def verify_inclusion_orlicz(phi1: YoungFunction, phi2: YoungFunction, u1: Weight, u2: Weight,
                            tests: Sequence[GridFunction]) -> VerificationReport:
    """``||f||_{phi1,u1} <= C1 C2 ||f||_{phi2,u2}``.

    ``C1`` comes from ``phi1(t) <= phi2(C1 t)``, ``C2`` from ``u1 <= C2 u2``.
    Equal weights give ``C2 = 1`` (the single-weight case).
    """
    claim = "weighted-orlicz-inclusion"
    notes = {"set_inclusion": "implied by the norm inequality; not checked separately"}
    prec = check_precedes(phi1, phi2)
    notes["precedence"] = prec.to_dict()
    if not prec.holds:
        return _unmet(claim, "no ladder constant C1 with phi1(t) <= phi2(C1 t)", notes)
    spec = tests[0].spec if tests else None
    C2, dnotes = _domination_constant(u1, u2, spec)
    notes.update(dnotes)
    if C2 is None:
        return _unmet(claim, "u1 is not dominated by u2 on the probes", notes)
    notes["C1"] = prec.C
    notes["C2"] = C2
    C = prec.C * C2
    witnesses = []
    for k, f in enumerate(tests):
        lhs = weak_orlicz_norm(phi1, u1, f).value
        rhs = C * weak_orlicz_norm(phi2, u2, f).value
        witnesses.append(Witness(_describe(k, f), lhs, rhs))
    return _report(claim, C, witnesses, notes)


def verify_ball_ratio(phi1: YoungFunction, phi2: YoungFunction,
                      balls: Sequence[Ball]) -> VerificationReport:
    """Necessity-side inequality on indicators: ``phi2^-1(1/|B|) <= C1 phi1^-1(1/|B|)``."""
    claim = "ball-ratio-bound"
    prec = check_precedes(phi1, phi2)
    if not prec.holds:
        return _unmet(claim, "no ladder constant C1", {"precedence": prec.to_dict()})
    witnesses = []
    for ball in balls:
        s = 1.0 / ball.volume
        witnesses.append(Witness(f"ball {ball.to_config()}",
                                 generalized_inverse(phi2, s), prec.C * generalized_inverse(phi1, s)))
    return _report(claim, prec.C, witnesses, {"precedence": prec.to_dict()})


# -- translations ----------------------------------------------------------

def verify_translation_bounds(phi, u: Weight, f: GridFunction,
                              shifts: Sequence) -> VerificationReport:
    """``||L_x f|| <= u(x) ||f||`` for each lattice shift (given in cells).

    ``phi`` is a Young function, or a number ``p`` for the weak Lebesgue case.
    The two-sided sandwich constant is measured and reported, not asserted.
    """
    claim = "translation-bound"
    notes = {}
    sub = check_submultiplicative(u)
    notes["submultiplicative"] = sub.to_dict()
    if not sub.passed:
        return _unmet(claim, "weight is not submultiplicative", notes)
    if isinstance(phi, YoungFunction):
        d2 = check_delta2(phi)
        notes["delta2"] = d2.to_dict()
        if not d2.holds:
            return _unmet(claim, "Young function fails the doubling condition", notes)

        def norm(g):
            return weak_orlicz_norm(phi, u, g).value
    else:
        p = float(phi)
        notes["space"] = f"weak Lebesgue p = {p}"

        def norm(g):
            return weak_lebesgue_norm(p, u, g).value

    base = norm(f)
    spec = f.spec
    witnesses = []
    sandwich = 0.0
    for cells in shifts:
        cells = tuple(int(c) for c in np.atleast_1d(cells))
        x = np.array(cells, dtype=float) * spec.h
        ux = float(np.exp(u._log(x)))
        shifted = norm(translate(f, cells))
        witnesses.append(Witness(f"shift {x.tolist()}", shifted, ux * base))
        if shifted > 0:
            sandwich = max(sandwich, ux / shifted, shifted / ux)
    notes["empirical_sandwich_constant"] = sandwich
    notes["base_norm"] = base
    return _report(claim, 1.0, witnesses, notes)


# -- finite balls: Hölder and inclusion ---------------------------------------

def _mask(spec, X):
    if X.n != spec.n:
        raise DimensionError("ball and grid dimensions differ")
    return X.contains(spec.points())


def verify_holder(phi1: YoungFunction, phi2: YoungFunction, phi3: YoungFunction,
                  u1: Weight, u2: Weight, u3: Weight,
                  pairs: Sequence[tuple], X: Ball) -> VerificationReport:
    """``||f1 f2||_{phi3,u3,X} <= 2 ||f1||_{phi1,u1,X} ||f2||_{phi2,u2,X}`` for each pair."""
    claim = "holder"
    notes = {}
    inv = check_inverse_product(phi1, phi2, phi3)
    notes["inverse_product"] = inv.to_dict()
    if not inv.holds:
        return _unmet(claim, "phi1^-1 phi2^-1 <= phi3^-1 fails", notes)
    if not pairs:
        return _report(claim, 2.0, [], notes)
    spec = pairs[0][0].spec
    mask = _mask(spec, X)
    excess = _box_ratio(u3, Product(u1, u2), spec, mask)
    notes["max_u3_over_u1u2_on_X"] = excess
    if excess > 1 + 1e-9:
        return _unmet(claim, "u3 <= u1 u2 fails on X", notes)
    witnesses = []
    for k, (f1, f2) in enumerate(pairs):
        g1, g2 = f1.restrict(X), f2.restrict(X)
        lhs = weak_orlicz_norm(phi3, u3, g1 * g2).value
        rhs = 2.0 * weak_orlicz_norm(phi1, u1, g1).value * weak_orlicz_norm(phi2, u2, g2).value
        witnesses.append(Witness(f"pair[{k}]", lhs, rhs))
    return _report(claim, 2.0, witnesses, notes)


def verify_ball_inclusion(phi1: YoungFunction, phi2: YoungFunction, phiH: YoungFunction,
                          u1: Weight, u2: Weight, uQ: Weight, X: Ball, spec: GridSpec,
                          tests: Sequence[GridFunction]) -> VerificationReport:
    """``||f||_{phi2,u2,X} <= (2 / phiH^-1(1/|X|)) ||f||_{phi1,u1,X}`` on a ball ``X``.

    Hypotheses: ``phi1^-1 phiH^-1 <= phi2^-1``, ``uQ <= 1`` and
    ``u1 <= uQ u2`` at the cell centers inside ``X``.
    """
    claim = "ball-inclusion"
    notes = {"X": X.to_config(), "grid": spec.to_config()}
    if not X.inside_box(spec):
        return _unmet(claim, "X is not contained in the grid box", notes)
    inv = check_inverse_product(phi1, phiH, phi2)
    notes["inverse_product"] = inv.to_dict()
    if not inv.holds:
        return _unmet(claim, "phi1^-1 phiH^-1 <= phi2^-1 fails", notes)
    mask = _mask(spec, X)
    uq_max = float(np.exp(np.max(uQ._log(spec.points())[mask])))
    notes["max_uQ_on_X"] = uq_max
    if uq_max > 1 + 1e-9:
        return _unmet(claim, "uQ exceeds 1 on X", notes)
    bridge = _box_ratio(u1, Product(uQ, u2), spec, mask)
    notes["max_u1_over_uQ_u2_on_X"] = bridge
    if bridge > 1 + 1e-9:
        return _unmet(claim, "u1 <= uQ u2 fails on X", notes)
    C = 2.0 / generalized_inverse(phiH, 1.0 / X.volume)
    notes["measure_X_exact"] = X.volume
    notes["measure_X_grid"] = float(np.count_nonzero(mask)) * spec.cell_volume
    witnesses = []
    for k, f in enumerate(tests):
        g = f.restrict(X)
        lhs = weak_orlicz_norm(phi2, u2, g).value
        rhs = C * weak_orlicz_norm(phi1, u1, g).value
        witnesses.append(Witness(_describe(k, g), lhs, rhs))
    return _report(claim, C, witnesses, notes)


def verify_ball_inclusion_lebesgue(p1: float, p2: float, u1: Weight, u2: Weight, X: Ball,
                                   spec: GridSpec, tests: Sequence[GridFunction]) -> VerificationReport:
    """Exponent form: ``p1 > p2 >= 1`` and ``u1 <= u2`` on ``X``.

    Uses ``phiH = t**(p1 p2 / (p1 - p2))`` and ``uQ = u1/u2``.
    """
    if not (p1 > p2 >= 1):
        raise DomainError(f"need p1 > p2 >= 1, got p1={p1}, p2={p2}")
    phiH = Power(p1 * p2 / (p1 - p2))
    report = verify_ball_inclusion(Power(p1), Power(p2), phiH, u1, u2, Quotient(u1, u2), X, spec, tests)
    report.notes["bridging_exponent"] = phiH.p
    return report


def probe_no_global_inclusion(p1: float, p2: float, u: Weight | None = None,
                              n: int | None = None) -> VerificationReport:
    """Ratio ``||chi_B||_{p2} / ||chi_B||_{p1} = |B|^(1/p2 - 1/p1)`` over radii ``2**-10 .. 2**10``.

    The indicator norm of ``chi_B / u`` does not depend on ``u``, so the ratio
    table is weight free. Passes when the ratio exceeds 10 at one end and
    falls below 0.1 at the other, so no single constant bounds either
    direction across the table.
    """
    if p1 == p2:
        raise DomainError("exponents must differ")
    if n is None:
        n = u.n if u is not None else 1
    phi1, phi2 = Power(p1), Power(p2)
    rows = []
    for k in range(-10, 11):
        r = 2.0 ** k
        ball = Ball((0.0,) * n, r)
        rows.append((r, char_norm_oracle(phi2, ball) / char_norm_oracle(phi1, ball)))
    ratios = np.array([q for _, q in rows])
    hi, lo = float(ratios.max()), float(ratios.min())
    notes = {
        "ratios": [{"r": r, "ratio": q} for r, q in rows],
        "max_ratio": hi,
        "min_ratio": lo,
        "span_decades": math.log10(hi / lo),
        "exponent_in_volume": 1.0 / p2 - 1.0 / p1,
    }
    witnesses = [Witness("max ratio must exceed 10", 10.0, hi),
                 Witness("min ratio must fall below 0.1", lo, 0.1)]
    return _report("no-global-inclusion", None, witnesses, notes)
