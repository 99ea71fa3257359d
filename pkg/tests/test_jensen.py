from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from depthkit import (
    AxisParallel,
    BallComplements,
    ConeOrder,
    HalfspaceAll,
    IntervalComplements,
    OrderInterval,
    ParameterError,
    PreconditionError,
    WeightedSample,
    center_jensen,
    jensen_check,
    make_builtin,
    median_jensen,
)
from depthkit.jensen import BUILTIN_FUNCTIONS, ExpLine, GaugeBox

from support import dyadic_points, dyadic_weights


class TestBuiltins:
    def test_exp_line_defaults(self):
        fn = make_builtin("paper-exp-line")
        assert (fn.a, fn.b, fn.c) == (1.0, -1.0, 1.0)
        assert fn.name == "paper-exp-line"
        got = fn.evaluate([(1.0, 0.0)])
        assert got[0] == pytest.approx(math.exp(math.sqrt(2)), abs=1e-12)

    def test_exp_line_params(self):
        fn = make_builtin("paper-exp-line", params={"a": 0.0, "b": 2.0, "c": -4.0})
        # exp((2*y - 4) / 2) = exp(y - 2)
        assert fn.evaluate([(7.0, 2.0)])[0] == pytest.approx(1.0)
        assert fn.evaluate([(0.0, 3.0)])[0] == pytest.approx(math.e)

    def test_exp_line_rejects_zero_normal(self):
        with pytest.raises(ParameterError):
            make_builtin("paper-exp-line", params={"a": 0.0, "b": 0.0})
        with pytest.raises(ParameterError):
            ExpLine(1.0, math.inf, 0.0)

    def test_gauge_box_needs_order(self):
        with pytest.raises(ParameterError):
            make_builtin("gauge-box")

    def test_gauge_box_validation(self):
        order = ConeOrder.identity(2)
        with pytest.raises(ParameterError):
            make_builtin("gauge-box", order=order, params={"anchor": (1.0,)})
        with pytest.raises(ParameterError):
            make_builtin("gauge-box", order=order, params={"scales": (1.0, 0.0)})
        with pytest.raises(ParameterError):
            make_builtin("gauge-box", order=order,
                         params={"anchor": (math.nan, 0.0)})

    def test_unknown_name_and_unused_params(self):
        with pytest.raises(ParameterError) as err:
            make_builtin("mystery")
        for name in BUILTIN_FUNCTIONS:
            assert name in str(err.value)
        with pytest.raises(ParameterError):
            make_builtin("paper-exp-line", params={"radius": 2.0})

    def test_gauge_box_evaluate(self):
        fn = GaugeBox(ConeOrder.identity(2), anchor=(1.0, 1.0), scales=(2.0, 3.0))
        assert fn.evaluate([(2.0, 0.0)])[0] == pytest.approx(3.0)
        assert fn.evaluate([(1.0, 1.0)])[0] == 0.0

    def test_gauge_box_min_clamps_to_box(self):
        fn = GaugeBox(ConeOrder.identity(2), anchor=(0.0, 0.0))
        order = ConeOrder.identity(2)
        inside = OrderInterval(order, (-1.0, -1.0), (1.0, 1.0))
        value, witness = fn.min_over_interval(inside)
        assert value == 0.0 and witness == (0.0, 0.0)
        shifted = OrderInterval(order, (2.0, -1.0), (5.0, 1.0))
        value, witness = fn.min_over_interval(shifted)
        assert value == pytest.approx(2.0)
        assert witness == pytest.approx((2.0, 0.0))

    def test_empty_and_unbounded_regions_rejected(self):
        fn = make_builtin("paper-exp-line")
        with pytest.raises(PreconditionError):
            fn.min_over_vertices([])
        with pytest.raises(PreconditionError):
            fn.max_over_vertices([])
        order = ConeOrder.identity(2)
        with pytest.raises(PreconditionError):
            fn.min_over_interval(OrderInterval(order, (1.0, 1.0), (0.0, 0.0)))
        with pytest.raises(PreconditionError):
            fn.min_over_interval(
                OrderInterval(order, (0.0, 0.0), (math.inf, 1.0)))


class TestMedianMode:
    def test_triangle_gauge_values(self, triangle):
        order = ConeOrder.identity(2)
        fn = GaugeBox(order)
        report = median_jensen(triangle, fn, order)
        # the median box collapses to the origin, where the gauge is 0;
        # every atom has gauge value 1, so the pushforward median is 1
        assert report.holds
        assert report.lhs == 0.0
        assert report.rhs == 1.0
        assert report.gap == 1.0
        assert report.witness == (0.0, 0.0)
        assert report.alpha == Fraction(1, 2)
        assert report.mode == "median"

    def test_random_gauge_median_always_holds(self):
        rng = np.random.default_rng(61)
        for _ in range(30):
            n = int(rng.integers(1, 25))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            order = (ConeOrder.identity(2) if rng.integers(2)
                     else ConeOrder.rotation(float(rng.uniform(0, math.pi))))
            fn = GaugeBox(order,
                          anchor=tuple(rng.normal(size=2)),
                          scales=tuple(rng.uniform(0.2, 3.0, size=2)))
            report = median_jensen(s, fn, order)
            assert report.holds, report
            assert report.lhs <= report.rhs + 1e-12

    def test_payload_round_trip(self, triangle):
        order = ConeOrder.identity(2)
        report = median_jensen(triangle, GaugeBox(order), order)
        payload = report.to_payload()
        assert payload["mode"] == "median"
        assert payload["holds"] is True
        assert payload["alpha"] == 0.5
        assert payload["function"]["fn"] == "gauge-box"
        assert payload["witness"] == [0.0, 0.0]


class TestCenterMode:
    def test_triangle_exp_line_closes_the_gap(self, triangle):
        report = center_jensen(triangle, make_builtin("paper-exp-line"),
                               HalfspaceAll())
        assert report.holds
        assert report.lhs == pytest.approx(math.exp(math.sqrt(2)), abs=1e-9)
        assert report.rhs == report.lhs
        assert report.gap == 0.0
        assert report.alpha == Fraction(1, 3)
        assert report.witness == (1.0, 0.0)

    def test_random_exp_line_center_always_holds(self):
        rng = np.random.default_rng(67)
        for _ in range(30):
            n = int(rng.integers(3, 18))
            s = WeightedSample(dyadic_points(rng, n),
                               dyadic_weights(rng, n) if rng.integers(2) else None)
            a, b = rng.normal(size=2)
            if a == 0.0 and b == 0.0:
                a = 1.0
            fn = ExpLine(float(a), float(b), float(rng.normal()))
            report = center_jensen(s, fn, HalfspaceAll())
            assert report.holds, report
            assert report.mode == "center"

    def test_random_gauge_axis_center_always_holds(self):
        rng = np.random.default_rng(71)
        for _ in range(25):
            n = int(rng.integers(1, 20))
            s = WeightedSample(dyadic_points(rng, n))
            order = (ConeOrder.identity(2) if rng.integers(2)
                     else ConeOrder.rotation(float(rng.uniform(0, math.pi))))
            fn = GaugeBox(order, anchor=tuple(rng.normal(size=2)),
                          scales=tuple(rng.uniform(0.2, 3.0, size=2)))
            report = center_jensen(s, fn, AxisParallel(order))
            assert report.holds, report


class TestDispatch:
    def test_median_mode_needs_box_like_family(self, triangle):
        order = ConeOrder.identity(2)
        fn = GaugeBox(order)
        report = jensen_check(triangle, fn, "median", AxisParallel(order))
        assert report.mode == "median"
        report = jensen_check(triangle, fn, "median", IntervalComplements(order))
        assert report.mode == "median"
        with pytest.raises(ParameterError):
            jensen_check(triangle, fn, "median", HalfspaceAll())

    def test_center_mode_families(self, triangle):
        order = ConeOrder.identity(2)
        report = jensen_check(triangle, make_builtin("paper-exp-line"),
                              "center", HalfspaceAll())
        assert report.mode == "center"
        report = jensen_check(triangle, GaugeBox(order), "center",
                              AxisParallel(order))
        assert report.mode == "center"
        with pytest.raises(ParameterError):
            jensen_check(triangle, GaugeBox(order), "center",
                         BallComplements(radius_cap=2.0))

    def test_unknown_mode(self, triangle):
        with pytest.raises(ParameterError):
            jensen_check(triangle, make_builtin("paper-exp-line"), "extreme",
                         HalfspaceAll())
