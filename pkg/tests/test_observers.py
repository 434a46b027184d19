import numpy as np
import pytest

from causevo.curves import CausalCurve
from causevo.curves.generators import random_causal_curve
from causevo.demos import dirac_evolution, example1, example1_sigma, example2
from causevo.field import FieldBuilder
from causevo.measures.generators import random_weights
from causevo.observers import (
    NonPositiveClockRateError,
    ObserverFrame,
    ObserverTransformer,
    deparametrize,
    disintegrate_eta,
    frame_battery,
    relative_discrepancy,
    transform_sigma,
    uniform_frame_grid,
)
from causevo.paths import CurveMeasure, pushforward_eval
from causevo.spacetime import CANONICAL, BoostTime, Cylinder, FrameNotSupportedError, Minkowski1p1, ShearedTime
from causevo.testfns import NullCoordinateArctan, TimeArctan


def straight_line(slope: float = 0.5, steps: int = 10) -> CurveMeasure:
    times = np.linspace(0.0, 1.0, steps + 1)
    return CurveMeasure.dirac(CausalCurve.from_path(times, slope * times))


class TestFrames:

    def test_battery_per_model(self):
        assert [f.frame_id for f in frame_battery(Minkowski1p1())] == [
            "canonical", "boost(0.3)", "boost(0.6)", "sheared(0.5)"
        ]
        assert [f.frame_id for f in frame_battery(Cylinder())] == ["canonical"]

    def test_boost_is_rejected_on_the_cylinder(self):
        frame = ObserverFrame(BoostTime(0.5))
        with pytest.raises(FrameNotSupportedError):
            frame.validate(Cylinder())
        with pytest.raises(FrameNotSupportedError):
            transform_sigma(Cylinder(), example2(1.0, 16).sigma, frame)

    def test_disjoint_windows(self):
        times = [0.0, 1.0]
        sigma = CurveMeasure.from_atoms([
            (CausalCurve.from_path(times, [0.0, 0.0]), 0.5),
            (CausalCurve.from_path(times, [5.0, 5.0]), 0.5),
        ])
        with pytest.raises(ValueError):
            uniform_frame_grid(sigma, BoostTime(0.6))

    def test_relative_discrepancy(self):
        assert relative_discrepancy(1.0, 1.0) == 0.0
        assert relative_discrepancy(1.0, 0.0, eps=0.0) == 1.0


class TestTransformSigma:

    @pytest.fixture
    def transformer(self):
        return ObserverTransformer(Minkowski1p1())

    def test_canonical_frame_is_the_identity(self, transformer):
        sigma = example1(64).sigma
        assert transformer.frame_data(sigma, ObserverFrame(CANONICAL)).sigma is sigma
        same = transformer.transform_sigma(sigma, ObserverFrame(CANONICAL), sigma.grid)
        assert np.array_equal(same.curves[0].coords, sigma.curves[0].coords)

    def test_boosted_rest_curve(self, transformer):
        times = np.linspace(0.0, 2.0, 21)
        sigma = CurveMeasure.dirac(CausalCurve.from_path(times, np.full(21, 0.25)))
        boost = BoostTime(0.5)
        boosted = transformer.transform_sigma(sigma, ObserverFrame(boost))
        curve = boosted.curves[0]
        assert curve.temporal is boost
        assert np.allclose(curve.xs, 0.25)
        assert curve.interval == pytest.approx((boost.gamma * -0.125, boost.gamma * 1.875))

    def test_round_trip(self, transformer):
        sigma = straight_line()
        boosted = transformer.transform_sigma(sigma, ObserverFrame(BoostTime(0.6)))
        back = transformer.transform_sigma(boosted, ObserverFrame(CANONICAL), sigma.grid)
        assert np.max(np.abs(back.curves[0].coords - sigma.curves[0].coords)) < 1e-9

    def test_disintegration_matches_the_stored_slice(self):
        case = example2(1.0, 16)
        tau = case.ev.times[5]
        slice_ = disintegrate_eta(case.model, case.sigma, ObserverFrame(CANONICAL), tau)
        assert slice_.same_atoms(case.ev.slices[5])

    def test_disintegration_matches_the_transformed_measure(self, transformer):
        model = transformer.model
        rng = np.random.default_rng(12)
        times = np.linspace(0.0, 2.0, 9)
        curves = [random_causal_curve(model, rng, times, x0=0.0) for _ in range(3)]
        sigma = CurveMeasure.from_atoms(zip(curves, random_weights(rng, 3)))
        frame = ObserverFrame(BoostTime(0.3))
        boosted = transformer.transform_sigma(sigma, frame)
        for k in (0, 3, 8):
            tau = float(boosted.grid[k])
            assert transformer.disintegrate_eta(sigma, frame, tau).same_atoms(pushforward_eval(boosted, tau))


class TestClockRate:

    def test_rest_curve_rate_is_gamma(self):
        model = Minkowski1p1()
        times = np.linspace(0.0, 2.0, 41)
        curve = CausalCurve.from_path(times, np.zeros(41))
        builder = FieldBuilder(CurveMeasure.dirac(curve), dirac_evolution(curve))
        frame = ObserverFrame(BoostTime(0.6))
        transformer = ObserverTransformer(model)
        assert np.allclose(transformer.clock_rate(builder, frame).values, 1.25)

        field = builder.build(TimeArctan())
        eta_b, (field_b,) = transformer.transform_eta_and_field(builder, [field], frame)
        assert np.allclose(eta_b, 1.25 * builder.atoms.eta_weight)
        assert np.allclose(field_b.values, field.values / 1.25)

    def test_backwards_clock_is_rejected(self):
        """Along x = 2t the boosted time runs backwards."""
        times = np.linspace(0.0, 1.0, 21)
        curve = CausalCurve.from_path(times, 2.0 * times)
        builder = FieldBuilder(CurveMeasure.dirac(curve), dirac_evolution(curve))
        with pytest.raises(NonPositiveClockRateError):
            ObserverTransformer(Minkowski1p1()).transform_eta_and_field(builder, [], ObserverFrame(BoostTime(0.6)))

    def test_sheared_rate_is_positive_along_example1(self):
        case = example1(640)
        builder = FieldBuilder(case.sigma, case.ev)
        rate = ObserverTransformer(case.model).clock_rate(builder, ObserverFrame(ShearedTime(0.5))).values
        assert np.all(rate > 0.0)


class TestInvariantCurrent:

    def test_same_frame_has_no_discrepancy(self):
        case = example1(64)
        transformer = ObserverTransformer(case.model)
        data = transformer.frame_data(case.sigma, ObserverFrame(CANONICAL))
        check = transformer.invariant_current_check(data, data, case.bumps, [TimeArctan()])
        assert check.worst == 0.0
        assert len(check.records) == len(case.bumps)

    @pytest.mark.parametrize("temporal", [BoostTime(0.3), BoostTime(0.6), ShearedTime(0.5)])
    def test_example1_current_is_frame_independent(self, temporal):
        case = example1(640)
        transformer = ObserverTransformer(case.model)
        first = transformer.frame_data(case.sigma, ObserverFrame(CANONICAL))
        second = transformer.frame_data(case.sigma, ObserverFrame(temporal))
        check = transformer.invariant_current_check(first, second, case.bumps, [TimeArctan(), NullCoordinateArctan(1)])
        assert check.worst <= 1e-2
        assert check.worst_record().frame_b == temporal.function_id

    def test_discrepancy_decays_at_least_first_order(self):
        worst = []
        for steps in (320, 1280):
            case = example1(steps)
            transformer = ObserverTransformer(case.model)
            first = transformer.frame_data(case.sigma, ObserverFrame(CANONICAL))
            second = transformer.frame_data(case.sigma, ObserverFrame(BoostTime(0.6)))
            worst.append(transformer.invariant_current_check(first, second, case.bumps, [TimeArctan()]).worst)
        assert worst[0] / worst[1] >= 3.0

    @pytest.mark.parametrize("temporal", [BoostTime(0.3), BoostTime(0.6)])
    def test_boosted_clock_is_normalized(self, temporal):
        case = example1(640)
        data = ObserverTransformer(case.model).frame_data(case.sigma, ObserverFrame(temporal))
        assert np.max(np.abs(data.builder.build(temporal).values - 1.0)) <= 1e-5


class TestWorldlines:

    def test_nearby_images_merge(self):
        model = Minkowski1p1()
        times = np.linspace(0.0, 1.0, 11)
        xs = 0.3 * np.sin(times)
        sigma = CurveMeasure(
            (CausalCurve.from_path(times, xs), CausalCurve.from_path(times, xs + 1e-13)),
            (0.5, 0.5),
        )
        assert len(deparametrize(model, sigma, tol=1e-12)) == 1
        assert len(deparametrize(model, sigma, tol=1e-14)) == 2

    def test_boost_keeps_the_worldline(self):
        model = Minkowski1p1()
        sigma = straight_line(0.25, 16)
        boosted = transform_sigma(model, sigma, ObserverFrame(BoostTime(0.6)))
        assert deparametrize(model, sigma, 16).equals(deparametrize(model, boosted, 16), 1e-9)

    def test_example1_worldline_in_its_own_frame(self):
        model = Minkowski1p1()
        sigma = example1(64).sigma
        same = transform_sigma(model, sigma, ObserverFrame(CANONICAL))
        assert deparametrize(model, sigma).equals(deparametrize(model, same), 1e-9)

    def test_boosted_example1_worldline_is_second_order_close(self):
        """The boosted samples lie on chords of the original polyline."""
        model = Minkowski1p1()
        gaps = []
        for steps in (640, 1280):
            sigma = example1_sigma(steps)
            own = deparametrize(model, sigma)
            boosted = deparametrize(model, transform_sigma(model, sigma, ObserverFrame(BoostTime(0.3))))
            dt = 2.0 * np.pi / steps
            gap = float(np.max(np.abs(own.atoms[0][0].coords - boosted.atoms[0][0].coords)))
            assert gap <= 0.1 * dt ** 2
            assert own.equals(boosted, 10.0 * dt ** 2)
            gaps.append(gap)
        assert 2.5 <= gaps[0] / gaps[1] <= 6.0

    def test_drifts_have_different_worldlines(self):
        model = Cylinder()
        still = deparametrize(model, example2(0.0, 16).sigma)
        moving = deparametrize(model, example2(1.0, 16).sigma)
        assert still.equals(still)
        assert not still.equals(moving)
