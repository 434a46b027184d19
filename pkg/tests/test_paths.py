import math
from fractions import Fraction

import numpy as np
import pytest

from causevo.curves import CausalCurve, validate_curve
from causevo.curves.generators import random_causal_curve
from causevo.demos import dirac_evolution, example1_curve, example2_evolution, example2_sigma
from causevo.measures.generators import random_causal_evolution, random_weights
from causevo.measures.model import Evolution, MarginalMismatchError, SliceMeasure
from causevo.paths import (
    CurveMeasure,
    DyadicConstructor,
    DyadicStepError,
    concatenate_curve_measures,
    construct_sigma_on_grid,
    dyadic_construct_sigma,
    dyadic_times,
    induced_evolution,
    joint_pushforward,
    pad_with_rest_curves,
    pushforward_eval,
    resample_curve_measure,
    wasserstein_curve_distance,
)
from causevo.spacetime import Cylinder, Event, GridMismatchError, Minkowski1p1, NotCausallyRelatedError

HALF = Fraction(1, 2)


def segment(p: Event, q: Event) -> CausalCurve:
    return CausalCurve.from_events([p.t, q.t], [p, q])


def branching_measures():
    """Two curves merge at (1, 0) and split again."""
    first = CurveMeasure.from_atoms([
        (segment(Event(0.0, -0.5), Event(1.0, 0.0)), HALF),
        (segment(Event(0.0, 0.5), Event(1.0, 0.0)), HALF),
    ])
    second = CurveMeasure.from_atoms([
        (segment(Event(1.0, 0.0), Event(2.0, -0.5)), HALF),
        (segment(Event(1.0, 0.0), Event(2.0, 0.5)), HALF),
    ])
    return first, second


class TestPushforwards:

    def test_crossing_curves_merge(self):
        times = [0.0, 0.5, 1.0]
        up = CausalCurve.from_path(times, [-0.5, 0.0, 0.5])
        down = CausalCurve.from_path(times, [0.5, 0.0, -0.5])
        sigma = CurveMeasure.from_atoms([(up, HALF), (down, HALF)])
        assert len(pushforward_eval(sigma, 0.0)) == 2
        middle = pushforward_eval(sigma, 0.5)
        assert middle.events == (Event(0.5, 0.0),)
        assert middle.weights == (Fraction(1),)

    def test_rotating_curves_induce_the_uniform_evolution(self):
        """Every drift reproduces the constant uniform measure on the circle."""
        expected = example2_evolution(16)
        for drift in (0.0, 0.5, 1.0):
            ev = induced_evolution(example2_sigma(drift, 16))
            assert np.array_equal(ev.grid, expected.grid)
            for ours, theirs in zip(ev.slices, expected.slices):
                assert ours.same_atoms(theirs)

    def test_joint_pushforward_is_a_causal_coupling(self):
        model = Minkowski1p1()
        rng = np.random.default_rng(4)
        times = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        for _ in range(100):
            n = int(rng.integers(1, 6))
            curves = [
                random_causal_curve(model, rng, times, max_speed=1.0, x0=float(rng.integers(-8, 9)) / 8.0, quantum=1.0 / 16.0)
                for _ in range(n)
            ]
            sigma = CurveMeasure.from_atoms(zip(curves, random_weights(rng, n)))
            i, j = sorted(int(k) for k in rng.integers(0, times.size, size=2))
            coupling = joint_pushforward(sigma, times[i], times[j], model)
            assert coupling.is_valid(model)
            assert coupling.has_exact_marginals()

    def test_joint_pushforward_needs_ordered_times(self):
        sigma = CurveMeasure.dirac(CausalCurve.from_path([0.0, 1.0], [0.0, 0.0]))
        with pytest.raises(ValueError):
            joint_pushforward(sigma, 1.0, 0.0)

    def test_acausal_curve_is_detected(self):
        sigma = CurveMeasure.dirac(CausalCurve.from_path([0.0, 1.0], [0.0, 3.0]))
        joint_pushforward(sigma, 0.0, 1.0)
        with pytest.raises(NotCausallyRelatedError):
            joint_pushforward(sigma, 0.0, 1.0, Minkowski1p1())


class TestCurveMeasure:

    def test_curves_share_the_grid(self):
        with pytest.raises(GridMismatchError):
            CurveMeasure(
                (CausalCurve.from_path([0.0, 1.0], [0.0, 0.0]), CausalCurve.from_path([0.0, 2.0], [0.0, 0.0])),
                (HALF, HALF),
            )

    def test_identical_curves_merge(self):
        curve = CausalCurve.from_path([0.0, 1.0], [0.0, 0.5])
        sigma = CurveMeasure.from_atoms([(curve, HALF), (CausalCurve.from_path([0.0, 1.0], [0.0, 0.5]), HALF)])
        assert len(sigma) == 1
        assert sigma.weights == (Fraction(1),)

    def test_validate(self):
        model = Minkowski1p1()
        curve = CausalCurve.from_path([0.0, 1.0], [0.0, 0.5])
        CurveMeasure.dirac(curve).validate(model)
        with pytest.raises(MarginalMismatchError):
            CurveMeasure((curve,), (HALF,)).validate(model)
        with pytest.raises(ValueError):
            CurveMeasure.dirac(CausalCurve.from_path([0.0, 1.0], [0.0, 3.0])).validate(model)


class TestConcatenation:

    def test_branching_pairs_every_incoming_with_every_outgoing(self):
        first, second = branching_measures()
        joined = concatenate_curve_measures(first, second)
        assert len(joined) == 4
        assert set(joined.weights) == {Fraction(1, 4)}
        assert list(joined.grid) == [0.0, 1.0, 2.0]
        assert pushforward_eval(joined, 0.0).same_atoms(pushforward_eval(first, 0.0))
        assert pushforward_eval(joined, 2.0).same_atoms(pushforward_eval(second, 2.0))

    def test_junction_slices_must_agree(self):
        first, _ = branching_measures()
        moved = CurveMeasure.dirac(segment(Event(1.0, 0.25), Event(2.0, 0.25)))
        with pytest.raises(MarginalMismatchError):
            concatenate_curve_measures(first, moved)

    def test_intervals_must_meet(self):
        first, _ = branching_measures()
        later = CurveMeasure.dirac(segment(Event(1.5, 0.0), Event(2.0, 0.0)))
        with pytest.raises(GridMismatchError):
            concatenate_curve_measures(first, later)

    def test_associative(self):
        first, second = branching_measures()
        third = CurveMeasure.from_atoms([
            (segment(Event(2.0, -0.5), Event(3.0, -0.5)), HALF),
            (segment(Event(2.0, 0.5), Event(3.0, 0.0)), HALF),
        ])
        left = concatenate_curve_measures(concatenate_curve_measures(first, second), third)
        right = concatenate_curve_measures(first, concatenate_curve_measures(second, third))
        assert left.same_atoms(right)


class TestDyadicConstruction:

    def test_dyadic_times(self):
        assert dyadic_times((0.0, 1.0), 2) == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert dyadic_times((0.0, 1.0), 0) == [0.0, 1.0]
        with pytest.raises(ValueError):
            dyadic_times((0.0, 1.0), -1)

    def test_dirac_evolution_gives_one_curve(self):
        model = Minkowski1p1()
        curve = example1_curve(64)
        ev = dirac_evolution(curve)
        sigma = DyadicConstructor(model).construct(ev, 3, ev.times)
        assert len(sigma) == 1
        assert np.array_equal(sigma.grid, curve.times)
        for k in range(0, 65, 8):
            assert sigma.curves[0].point(k) == curve.point(k)
        sigma.validate(model)

    def test_cylinder_constant_evolution_stays_at_rest(self):
        model = Cylinder()
        angles = [0.0, math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0]
        ev = Evolution.from_slices([
            SliceMeasure.uniform(t, [Event(t, a) for a in angles]) for t in (0.0, 1.0, 2.0)
        ])
        sigma = dyadic_construct_sigma(model, ev, 1)
        assert len(sigma) == 4
        for curve in sigma.curves:
            assert np.all(curve.xs == curve.xs[0])
        assert sorted(c.xs[0] for c in sigma.curves) == angles

    def test_marginals_are_exact_at_partition_times(self):
        model = Minkowski1p1()
        rng = np.random.default_rng(42)
        for n in range(50):
            ev = random_causal_evolution(model, rng)
            sigma = DyadicConstructor(model).construct(ev, 2)
            induced = induced_evolution(sigma)
            for ours, theirs in zip(induced.slices, ev.slices):
                assert ours.same_atoms(theirs), f"Instance {n} at time {theirs.time}"
            sigma.validate(model)

    def test_grid_partition(self):
        model = Minkowski1p1()
        rng = np.random.default_rng(6)
        ev = random_causal_evolution(model, rng, times=(0.0, 0.125, 0.5, 0.625, 1.0))
        sigma = construct_sigma_on_grid(model, ev)
        assert np.array_equal(sigma.grid, ev.grid)
        assert all(s.same_atoms(e) for s, e in zip(induced_evolution(sigma).slices, ev.slices))

    def test_teleport_fails_on_the_bad_step(self):
        ev = Evolution.from_slices([
            SliceMeasure.dirac(Event(0.0, 0.0)),
            SliceMeasure.dirac(Event(1.0, 0.5)),
            SliceMeasure.dirac(Event(2.0, 3.0)),
        ])
        with pytest.raises(DyadicStepError) as raised:
            dyadic_construct_sigma(Minkowski1p1(), ev, 1)
        assert raised.value.step == 1
        assert raised.value.interval == (1.0, 2.0)
        assert raised.value.certificate == [Event(1.0, 0.5)]

    def test_sample_grid_must_contain_the_partition(self):
        ev = dirac_evolution(CausalCurve.from_path([0.0, 0.5, 1.0], [0.0, 0.0, 0.0]))
        with pytest.raises(GridMismatchError):
            DyadicConstructor(Minkowski1p1()).construct(ev, 1, [0.0, 1.0])


class TestCurveSpace:

    def test_wasserstein_of_rest_curves(self):
        model = Minkowski1p1()
        a = CurveMeasure.dirac(CausalCurve.from_path([0.0, 1.0], [0.0, 0.0]))
        b = CurveMeasure.dirac(CausalCurve.from_path([0.0, 1.0], [0.75, 0.75]))
        assert wasserstein_curve_distance(model, a, a) == pytest.approx(0.0, abs=1e-12)
        assert wasserstein_curve_distance(model, a, b) == pytest.approx(0.75)

    def test_wasserstein_splits_mass(self):
        model = Minkowski1p1()
        times = [0.0, 1.0]
        a = CurveMeasure.from_atoms([
            (CausalCurve.from_path(times, [0.0, 0.0]), HALF),
            (CausalCurve.from_path(times, [1.0, 1.0]), HALF),
        ])
        b = CurveMeasure.from_atoms([
            (CausalCurve.from_path(times, [0.25, 0.25]), HALF),
            (CausalCurve.from_path(times, [1.0, 1.0]), HALF),
        ])
        assert wasserstein_curve_distance(model, a, b) == pytest.approx(0.125)

    def test_dyadic_measures_approach_the_worldline(self):
        """The polygon through 2^n points of t -> 0.3 sin t converges uniformly."""
        model = Minkowski1p1()
        curve = example1_curve(256)
        ev = dirac_evolution(curve)
        truth = CurveMeasure.dirac(curve)
        constructor = DyadicConstructor(model)
        distances = [
            wasserstein_curve_distance(model, truth, constructor.construct(ev, level, ev.times))
            for level in (1, 2, 3, 4)
        ]
        assert distances[0] == pytest.approx(0.3, abs=1e-3)
        assert all(b < a for a, b in zip(distances, distances[1:]))
        assert distances[-1] < 0.01

    def test_pad_with_rest_curves(self):
        model = Minkowski1p1()
        sigma = CurveMeasure.dirac(CausalCurve.from_path([1.0, 1.5, 2.0], [0.0, 0.25, 0.5]))
        padded = pad_with_rest_curves(model, sigma, [0.0, 0.5, 1.0, 1.5, 2.0, 2.5])
        curve = padded.curves[0]
        assert list(curve.xs) == [0.0, 0.0, 0.0, 0.25, 0.5, 0.5]
        assert validate_curve(model, curve).valid
        with pytest.raises(GridMismatchError):
            pad_with_rest_curves(model, sigma, [0.0, 1.0, 2.0])

    def test_resample_merges_curves_that_agree_on_the_new_grid(self):
        model = Minkowski1p1()
        times = [0.0, 0.5, 1.0]
        a = CausalCurve.from_path(times, [0.0, 0.25, 0.0])
        b = CausalCurve.from_path(times, [0.0, -0.25, 0.0])
        sigma = CurveMeasure.from_atoms([(a, HALF), (b, HALF)])
        coarse = resample_curve_measure(model, sigma, [0.0, 1.0])
        assert len(coarse) == 1
        assert coarse.weights == (Fraction(1),)
