import math

import numpy as np
import pytest

from orlicz_kit.errors import DomainError
from orlicz_kit.grid import (
    Ball, GridFunction, GridSpec, Indicator, PowerDecay, random_grid_function, sample,
)
from orlicz_kit.theorems import (
    char_norm_oracle, probe_no_global_inclusion, verify_ball_inclusion,
    verify_ball_inclusion_lebesgue, verify_ball_ratio, verify_char_norm, verify_holder,
    verify_inclusion_lebesgue, verify_inclusion_orlicz, verify_translation_bounds,
)
from orlicz_kit.weights import ExpNorm, GaussExp, One, PolyNorm, Quotient
from orlicz_kit.young import ExpMinusOne, Power, PowerSum, ScaledPower

from conftest import YOUNG_CATALOG

LINE = GridSpec(1, 2.0, 4096)
UNIT1 = Ball((0.0,), 1.0)
UNIT2 = Ball((0.0, 0.0), 1.0)
CHI = sample(Indicator(UNIT1), LINE)


def indicator_tests(spec, radii=(0.25, 0.5, 1.0)):
    return [sample(Indicator(Ball((0.0,) * spec.n, r)), spec) for r in radii]


class TestOracle:
    def test_square(self):
        assert char_norm_oracle(Power(2), UNIT1) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_linear(self):
        assert char_norm_oracle(Power(1), UNIT1) == pytest.approx(2.0, rel=1e-15)

    def test_center_independent(self):
        assert char_norm_oracle(Power(2), Ball((3.7,), 1.0)) == char_norm_oracle(Power(2), UNIT1)

    def test_power_formula(self):
        # |B|^(1/p) for t^p
        for p in (1, 1.5, 3):
            for n, r in ((1, 0.3), (2, 2.0), (3, 0.7)):
                ball = Ball((0.0,) * n, r)
                assert char_norm_oracle(Power(p), ball) == pytest.approx(ball.volume ** (1 / p), rel=1e-12)


class TestCharNorm:
    def test_weighted_line(self):
        rep = verify_char_norm(Power(2), ExpNorm(1.0), UNIT1, LINE)
        assert rep.passed
        assert rep.notes["grid_norm"] == pytest.approx(math.sqrt(2), rel=0.02)

    def test_plane(self):
        rep = verify_char_norm(Power(1), One(2), UNIT2, GridSpec(2, 1.5, 1024))
        assert rep.passed
        assert rep.notes["oracle"] == pytest.approx(math.pi, rel=1e-15)

    def test_weight_cancels(self):
        spec = GridSpec(1, 2.0, 512)
        a = verify_char_norm(Power(2), One(1), UNIT1, spec).notes["grid_norm"]
        b = verify_char_norm(Power(2), PolyNorm(3.0), UNIT1, spec).notes["grid_norm"]
        assert a == pytest.approx(b, rel=1e-12)

    def test_ball_outside_box(self):
        with pytest.raises(DomainError):
            verify_char_norm(Power(2), One(1), Ball((1.5,), 1.0), LINE)

    @pytest.mark.parametrize("phi", [Power(1), Power(2), Power(3), ExpMinusOne()], ids=repr)
    @pytest.mark.parametrize("u", [One(1), ExpNorm(1.0), PolyNorm(2.0)], ids=repr)
    @pytest.mark.parametrize("ball", [UNIT1, Ball((0.5,), 1.0)], ids=lambda b: f"a={b.center[0]}")
    def test_cross_product(self, phi, u, ball):
        assert verify_char_norm(phi, u, ball, LINE).passed


class TestInclusionLebesgue:
    def test_identical_weights(self, rng):
        tests = [random_grid_function(GridSpec(1, 2.0, 128), rng) for _ in range(5)]
        rep = verify_inclusion_lebesgue(1.5, One(1), One(1), tests)
        assert rep.passed and rep.constant_used == 1
        assert all(w.ratio == 1.0 for w in rep.witnesses if w.rhs > 0)

    def test_poly_below_exp(self):
        rep = verify_inclusion_lebesgue(2, PolyNorm(1.0), ExpNorm(1.0), indicator_tests(LINE))
        assert rep.passed and rep.constant_used == pytest.approx(1.0, rel=1e-9)

    def test_unmet(self):
        rep = verify_inclusion_lebesgue(2, ExpNorm(1.0), One(1), indicator_tests(LINE))
        assert rep.status == "precondition-unmet" and not rep.passed


class TestInclusionOrlicz:
    def test_identity(self):
        rep = verify_inclusion_orlicz(Power(2), Power(2), One(1), One(1), indicator_tests(LINE))
        assert rep.passed
        assert [w.ratio for w in rep.witnesses] == pytest.approx([1.0] * 3, rel=1e-11)

    def test_scaled_power_ratio_two(self):
        rep = verify_inclusion_orlicz(Power(2), ScaledPower(0.25, 2), One(1), One(1), indicator_tests(LINE))
        assert rep.passed and rep.constant_used == 2
        for w in rep.witnesses:
            # lhs / (C1 rhs) = 1 means the unscaled quotient is exactly 2
            assert w.ratio == pytest.approx(1.0, rel=1e-11)

    def test_weighted(self):
        rep = verify_inclusion_orlicz(Power(2), Power(2), PolyNorm(1.0), ExpNorm(1.0), indicator_tests(LINE))
        assert rep.passed and rep.notes["C2"] == pytest.approx(1.0, rel=1e-9)

    def test_reduction_shows_c2_one(self):
        rep = verify_inclusion_orlicz(Power(2), ExpMinusOne(), One(1), One(1), indicator_tests(LINE))
        assert rep.passed and rep.notes["C2"] == 1.0

    def test_no_precedence(self):
        rep = verify_inclusion_orlicz(Power(1), Power(2), One(1), One(1), indicator_tests(LINE))
        assert rep.status == "precondition-unmet"

    def test_random_tests(self):
        rng = np.random.default_rng(5)
        spec = GridSpec(1, 4.0, 512)
        tests = [random_grid_function(spec, rng) for _ in range(20)]
        # t + t^2 <= (Ct)^2 fails as t -> 0, so no constant exists
        rep = verify_inclusion_orlicz(PowerSum(1, 1, 1, 2), Power(2), One(1), One(1), tests)
        assert rep.status == "precondition-unmet"
        rep = verify_inclusion_orlicz(Power(2), PowerSum(1, 1, 1, 2), One(1), One(1), tests)
        assert rep.passed and rep.constant_used == 1.0
        rep = verify_inclusion_orlicz(Power(2), ScaledPower(0.25, 2), PolyNorm(1.0), ExpNorm(1.0), tests)
        assert rep.passed


class TestBallRatio:
    BALLS = [Ball((0.0,) * n, r) for n in (1, 2, 3) for r in (2.0 ** -6, 0.5, 1.0, 3.0, 2.0 ** 6)]

    def test_catalog(self):
        checked = 0
        for phi1 in YOUNG_CATALOG:
            for phi2 in YOUNG_CATALOG:
                rep = verify_ball_ratio(phi1, phi2, self.BALLS)
                if rep.status == "precondition-unmet":
                    continue
                checked += 1
                assert rep.passed, (phi1, phi2, rep.max_violation_ratio)
        assert checked >= len(YOUNG_CATALOG)


class TestTranslation:
    def test_shift_zero(self):
        rep = verify_translation_bounds(Power(2), ExpNorm(1.0), CHI, [(0,)])
        assert rep.passed
        assert rep.witnesses[0].lhs == rep.witnesses[0].rhs

    def test_one_is_invariant(self):
        rep = verify_translation_bounds(Power(2), One(1), CHI, [(k,) for k in (-512, -1, 0, 7, 300)])
        assert rep.passed
        assert {w.lhs for w in rep.witnesses} == {rep.notes["base_norm"]}

    def test_expnorm_unit_shift(self):
        spec = GridSpec(1, 4.0, 4096)
        f = sample(Indicator(UNIT1), spec)
        rep = verify_translation_bounds(Power(2), ExpNorm(1.0), f, [(512,)])
        w = rep.witnesses[0]
        assert rep.passed and w.rhs == pytest.approx(math.e * rep.notes["base_norm"], rel=1e-12)
        assert rep.notes["empirical_sandwich_constant"] >= 1.0

    def test_lebesgue_exponent(self):
        rep = verify_translation_bounds(2.0, PolyNorm(1.0), CHI, [(100,), (-50,)])
        assert rep.passed

    def test_not_submultiplicative(self):
        rep = verify_translation_bounds(Power(2), GaussExp(1.0), CHI, [(1,)])
        assert rep.status == "precondition-unmet"

    def test_no_doubling(self):
        rep = verify_translation_bounds(ExpMinusOne(), One(1), CHI, [(1,)])
        assert rep.status == "precondition-unmet"


class TestHolder:
    X = UNIT1

    def test_indicators(self):
        rep = verify_holder(Power(2), Power(2), Power(1), One(1), One(1), One(1), [(CHI, CHI)], self.X)
        w = rep.witnesses[0]
        assert rep.passed
        assert w.lhs == pytest.approx(2.0, rel=1e-9) and w.rhs == pytest.approx(4.0, rel=1e-9)

    def test_zero_factor(self):
        zero = GridFunction(LINE, np.zeros(LINE.m))
        rep = verify_holder(Power(2), Power(2), Power(1), One(1), One(1), One(1), [(CHI, zero)], self.X)
        assert rep.passed and rep.witnesses[0].lhs == 0.0

    def test_power_decay(self):
        f = sample(PowerDecay(0.25), LINE)
        rep = verify_holder(Power(2), Power(2), Power(1), One(1), One(1), One(1), [(f, f)], self.X)
        assert rep.passed

    def test_random_weighted(self):
        rng = np.random.default_rng(31)
        pairs = [(random_grid_function(LINE, rng), random_grid_function(LINE, rng)) for _ in range(50)]
        rep = verify_holder(Power(2), Power(2), Power(1), ExpNorm(0.5), PolyNorm(1.0), ExpNorm(0.5),
                            pairs, self.X)
        assert rep.passed and rep.max_violation_ratio <= 1.0

    def test_bad_inverse_product(self):
        rep = verify_holder(Power(2), Power(2), Power(2), One(1), One(1), One(1), [(CHI, CHI)], self.X)
        assert rep.status == "precondition-unmet"

    def test_bad_weights(self):
        rep = verify_holder(Power(2), Power(2), Power(1), One(1), One(1), ExpNorm(1.0), [(CHI, CHI)], self.X)
        assert rep.status == "precondition-unmet"


class TestBallInclusion:
    def test_lebesgue_line(self):
        rep = verify_ball_inclusion_lebesgue(2, 1, One(1), One(1), UNIT1, LINE, [CHI])
        assert rep.passed
        assert rep.constant_used == pytest.approx(2 * math.sqrt(2), rel=1e-12)
        w = rep.witnesses[0]
        assert w.lhs == pytest.approx(2.0, rel=1e-9) and w.rhs == pytest.approx(4.0, rel=1e-9)

    def test_zero(self):
        zero = GridFunction(LINE, np.zeros(LINE.m))
        assert verify_ball_inclusion_lebesgue(2, 1, One(1), One(1), UNIT1, LINE, [zero]).passed

    def test_plane(self):
        spec = GridSpec(2, 1.5, 1024)
        f = sample(Indicator(Ball((0.0, 0.0), 0.5)), spec)
        rep = verify_ball_inclusion_lebesgue(3, 2, One(2), One(2), UNIT2, spec, [f])
        assert rep.passed
        assert rep.notes["bridging_exponent"] == pytest.approx(6.0)
        assert rep.constant_used == pytest.approx(2 * math.pi ** (1 / 6), rel=1e-12)

    def test_weighted(self):
        rng = np.random.default_rng(12)
        tests = [random_grid_function(LINE, rng) for _ in range(5)]
        rep = verify_ball_inclusion_lebesgue(2, 1, PolyNorm(1.0), ExpNorm(1.0), UNIT1, LINE, tests)
        assert rep.passed

    def test_rejects_order(self):
        with pytest.raises(DomainError):
            verify_ball_inclusion_lebesgue(1, 2, One(1), One(1), UNIT1, LINE, [CHI])

    def test_uq_above_one(self):
        rep = verify_ball_inclusion(Power(2), Power(1), Power(2), ExpNorm(1.0), One(1), ExpNorm(1.0),
                                    UNIT1, LINE, [CHI])
        assert rep.status == "precondition-unmet"

    def test_general_form(self):
        u1, u2 = PolyNorm(1.0), ExpNorm(1.0)
        rep = verify_ball_inclusion(Power(3), Power(1.5), Power(3), u1, u2, Quotient(u1, u2),
                                    UNIT1, LINE, [CHI, sample(PowerDecay(0.25), LINE)])
        assert rep.passed


class TestProbe:
    def test_closed_form(self):
        rep = probe_no_global_inclusion(1, 2)
        table = {row["r"]: row["ratio"] for row in rep.notes["ratios"]}
        for r, q in table.items():
            assert q == pytest.approx((2 * r) ** -0.5, rel=1e-12)
        assert table[2.0 ** -10] > 20 and table[2.0 ** 10] < 0.05
        assert rep.passed and rep.notes["span_decades"] >= 2.5

    def test_symmetry(self):
        a = probe_no_global_inclusion(1, 2).notes["ratios"]
        b = probe_no_global_inclusion(2, 1).notes["ratios"]
        for x, y in zip(a, b):
            assert x["ratio"] * y["ratio"] == pytest.approx(1.0, rel=1e-12)

    def test_equal_rejected(self):
        with pytest.raises(DomainError):
            probe_no_global_inclusion(2, 2)

    def test_plane(self):
        rep = probe_no_global_inclusion(1, 3, n=2)
        assert rep.passed
