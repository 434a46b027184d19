import math

import numpy as np
import pytest

from causevo.curves import CausalCurve
from causevo.curves.generators import random_causal_curve
from causevo.spacetime import BoostTime, Cylinder, Event, FLRW1p1, FLRWScale, Minkowski1p1, ShearedTime
from causevo.spacetime.model import TWO_PI
from causevo.testfns import (
    IDENTITY,
    PRODUCT,
    SINE,
    SQUARE,
    BumpFunction,
    ComposedFunction,
    NullCoordinateArctan,
    PhiOfCausal,
    SetTimeFunction,
    TestFunctionSupportError,
    TimeArctan,
    TimePartition,
    causal_battery,
    check_interior_support,
    interior_bump_battery,
    is_causal_along,
    phi_n,
    uniform_time_partition,
)

SMOOTH_FUNCTIONS = [
    BumpFunction(1.0, 0.2, 0.8, 1.0),
    BumpFunction(1.0, 0.2, 0.8, None),
    BumpFunction(1.0, 6.0, 0.8, 0.5, period=TWO_PI),
    NullCoordinateArctan(-1),
    NullCoordinateArctan(1),
    TimeArctan(),
    TimeArctan(BoostTime(0.4)),
    BoostTime(0.6),
    ShearedTime(0.5),
    PhiOfCausal(4, TimeArctan()),
    ComposedFunction(SQUARE, [BumpFunction(1.0, 0.2, 0.8, 1.0)]),
    ComposedFunction(PRODUCT, [BumpFunction(1.0, 0.2, 0.8, 1.0), TimeArctan()]),
    BumpFunction(1.0, 0.2, 0.8, 1.0) * NullCoordinateArctan(1),
    uniform_time_partition((0.0, 2.0), 0.5).members()[2],
]

POINTS = [Event(0.9, 0.3), Event(1.3, -0.2), Event(1.1, 0.45)]


class TestValues:

    def test_bump_peak(self):
        phi = BumpFunction(1.0, 0.5, 0.8, 1.0)
        assert phi.at(Event(1.0, 0.5)) == pytest.approx(math.exp(-2.0))
        assert phi.at(Event(1.9, 0.5)) == 0.0
        assert phi.at(Event(1.0, 1.6)) == 0.0

    def test_periodic_bump_wraps(self):
        phi = BumpFunction(1.0, 0.1, 1.0, 0.5, period=TWO_PI)
        assert phi.at(Event(1.0, TWO_PI - 0.1)) == pytest.approx(phi.at(Event(1.0, 0.3)))
        assert phi.at(Event(1.0, TWO_PI - 0.1)) > 0.0

    def test_null_coordinate_values(self):
        assert NullCoordinateArctan(-1).at(Event(1.0, 0.0)) == pytest.approx(math.pi / 4.0)
        assert NullCoordinateArctan(1).at(Event(0.0, -1.0)) == pytest.approx(-math.pi / 4.0)

    def test_tolerance_scale(self):
        assert BumpFunction(0.0, 0.0, 0.5, 1.0).tolerance_scale == pytest.approx(4.0)
        assert BumpFunction(0.0, 0.0, 2.0, None).tolerance_scale == pytest.approx(0.25)
        assert (BumpFunction(0.0, 0.0, 0.5, 1.0) * BumpFunction(0.0, 0.0, 1.0, 0.5)).tolerance_scale == pytest.approx(16.0)

    @pytest.mark.parametrize("f", SMOOTH_FUNCTIONS, ids=lambda f: f.function_id)
    def test_gradient_matches_finite_differences(self, f):
        h = 1e-6
        for p in POINTS:
            dt, dx = f.gradient_at(p)
            fd_t = (f.at(Event(p.t + h, p.x)) - f.at(Event(p.t - h, p.x))) / (2.0 * h)
            fd_x = (f.at(Event(p.t, p.x + h)) - f.at(Event(p.t, p.x - h))) / (2.0 * h)
            assert dt == pytest.approx(fd_t, abs=1e-6), p
            assert dx == pytest.approx(fd_x, abs=1e-6), p


class TestCausalFunctions:

    def test_battery_sizes(self):
        assert len(causal_battery(Minkowski1p1())) == 6
        assert len(causal_battery(Cylinder())) == 4
        assert len(causal_battery(Minkowski1p1(), n_values=(2,))) == 4

    def test_set_time_function(self):
        model = Minkowski1p1()
        f = SetTimeFunction(model, [Event(0.0, 0.0), Event(0.0, 4.0)])
        assert f.at(Event(1.0, 0.5)) == pytest.approx(0.5)
        assert f.at(Event(1.0, 3.0)) == pytest.approx(0.0)
        assert f.at(Event(1.0, 2.0)) == pytest.approx(-1.0)
        with pytest.raises(ValueError):
            SetTimeFunction(model, [])

    @pytest.mark.parametrize("model", [Minkowski1p1(), Cylinder(), FLRW1p1(FLRWScale(eps=0.2))])
    def test_battery_is_monotone_along_causal_curves(self, model):
        rng = np.random.default_rng(23)
        times = np.linspace(0.0, 2.0, 33)
        battery = causal_battery(model, K=[Event(0.0, 0.5)])
        for _ in range(200):
            curve = random_causal_curve(model, rng, times)
            for f in battery:
                assert is_causal_along(f, curve), f.function_id

    def test_superluminal_curve_is_caught(self):
        times = np.linspace(0.0, 1.0, 11)
        curve = CausalCurve.from_path(times, 2.0 * times)
        assert not is_causal_along(NullCoordinateArctan(-1), curve)
        assert is_causal_along(NullCoordinateArctan(1), curve)

    def test_phi_n(self):
        s = np.array([-1.0, 0.0, 0.1, 1.0, 10.0])
        values = [phi_n(n, s) for n in (1, 4, 16)]
        for v in values:
            assert v[0] == 0.0 and v[1] == 0.0
            assert np.all(np.diff(v) >= 0.0)
        assert np.all(values[0][2:] < values[1][2:])
        assert np.all(values[1][2:] < values[2][2:])
        assert values[2][-1] == pytest.approx(1.0, abs=1e-2)

    def test_constructor_errors(self):
        with pytest.raises(ValueError):
            NullCoordinateArctan(0)
        with pytest.raises(ValueError):
            PhiOfCausal(0, TimeArctan())


class TestSupport:

    def test_bump_radii(self):
        with pytest.raises(TestFunctionSupportError):
            BumpFunction(0.0, 0.0, 0.0, 1.0)
        with pytest.raises(TestFunctionSupportError):
            BumpFunction(0.0, 0.0, 1.0, -1.0)
        with pytest.raises(TestFunctionSupportError):
            BumpFunction(0.0, 0.0, 1.0, 3.5, period=TWO_PI)

    def test_interior_support(self):
        times = np.linspace(0.0, 2.0, 21)
        check_interior_support(BumpFunction(1.0, 0.0, 0.5, None), times)
        with pytest.raises(TestFunctionSupportError):
            check_interior_support(BumpFunction(1.0, 0.0, 0.85, None), times)
        with pytest.raises(TestFunctionSupportError):
            check_interior_support(NullCoordinateArctan(), times)
        with pytest.raises(TestFunctionSupportError):
            check_interior_support(BumpFunction(1.0, 0.0, 0.1, None), [0.0, 1.0, 2.0])

    def test_interior_battery(self):
        times = np.linspace(0.0, 4.0, 41)
        battery = interior_bump_battery(times, [1.0, 2.0, 3.0], 0.5)
        assert len(battery) == 3
        with pytest.raises(TestFunctionSupportError):
            interior_bump_battery(times, [1.0, 3.9], 0.5)


class TestOuterFunctionsAndPartitions:

    def test_arity_is_checked(self):
        phi = BumpFunction(1.0, 0.0, 0.5, None)
        with pytest.raises(ValueError):
            ComposedFunction(PRODUCT, [phi])
        assert ComposedFunction(PRODUCT, [phi, phi]).function_id == f"product({phi.function_id},{phi.function_id})"

    def test_vanishing_at_zero(self):
        for theta in (IDENTITY, PRODUCT, SQUARE, SINE):
            theta.require_vanishing_at_zero()

    def test_composed_support(self):
        a = BumpFunction(1.0, 0.0, 0.5, None)
        b = BumpFunction(1.5, 0.0, 0.25, None)
        assert ComposedFunction(PRODUCT, [a, b]).time_support == (0.5, 1.75)
        assert (a * b).time_support == (1.25, 1.5)

    def test_partition_sums_to_one(self):
        partition = uniform_time_partition((0.0, 2.0), 0.5)
        t = np.linspace(0.0, 2.0, 101)
        x = np.zeros_like(t)
        total = np.sum([m(t, x) for m in partition.members()], axis=0)
        assert np.max(np.abs(total - 1.0)) < 1e-12
        assert np.all(partition.total(t) > 0.0)

    def test_partition_radius(self):
        with pytest.raises(ValueError):
            TimePartition([0.0, 1.0], 0.0)
