import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from causevo.curves import CausalCurve
from causevo.demos import dirac_evolution, example1, example2
from causevo.field import (
    FieldBuilder,
    PartitionOfUnityError,
    ResidualRecord,
    ResidualSuite,
    ToleranceSchedule,
    causality_residual,
    chain_rule_residual,
    clock_normalization_residual,
    continuity_residual,
    coordinate_velocity,
    extend_field,
    four_velocity,
    lambda_derivative_check,
    refinement_ratios,
    three_velocity,
    worst_offender,
)
from causevo.io import load_curve_measure
from causevo.measures.model import MarginalMismatchError
from causevo.paths import CurveMeasure, induced_evolution, resample_curve_measure
from causevo.spacetime import CANONICAL, Event, GridMismatchError, Minkowski1p1
from causevo.spacetime.functions import SpacetimeFunction
from causevo.testfns import (
    SINE,
    SQUARE,
    BumpFunction,
    NullCoordinateArctan,
    OuterFunction,
    TestFunctionSupportError,
    causal_battery,
)
from causevo.utils.numerics import central_difference

DATASETS = Path(__file__).parent / "datasets"


class Constant(SpacetimeFunction):
    function_id = "one"

    def __call__(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.ones(t.shape)

    def gradient(self, t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        return np.zeros(t.shape), np.zeros(t.shape)


class TestFieldBuilder:

    def test_dirac_field_is_the_derivative_along_the_curve(self):
        case = example1(640)
        curve = case.sigma.curves[0]
        phi = case.bumps[2]
        field = FieldBuilder(case.sigma, case.ev).build(phi)
        expected = central_difference(phi(curve.ts, curve.xs), curve.times)
        assert np.allclose(field.values, expected, rtol=0.0, atol=1e-14)

    def test_crossing_curves_average_their_derivatives(self):
        """At the crossing event the field is the mass-weighted mean over both curves."""
        times = [0.0, 0.5, 1.0]
        up = CausalCurve.from_path(times, [-0.5, 0.0, 0.5])
        down = CausalCurve.from_path(times, [0.5, 0.0, -0.5])
        sigma = CurveMeasure.from_atoms([(up, Fraction(1, 2)), (down, Fraction(1, 2))])
        field = FieldBuilder(sigma, induced_evolution(sigma)).build(NullCoordinateArctan(-1))
        expected = 0.5 * (math.atan(1.5) - math.atan(-0.5))
        assert field.value_at(1, Event(0.5, 0.0)) == pytest.approx(expected)
        with pytest.raises(KeyError):
            field.value_at(1, Event(0.5, 0.5))

    def test_zero_samples_give_zero_field(self):
        case = example1(64)
        field = FieldBuilder(case.sigma, case.ev).build_from_samples("zero", [np.zeros(65)])
        assert np.all(field.values == 0.0)

    def test_grid_must_match(self):
        case = example1(64)
        other = dirac_evolution(CausalCurve.from_path(np.linspace(0.0, 1.0, 65), np.zeros(65)))
        with pytest.raises(GridMismatchError):
            FieldBuilder(case.sigma, other)

    def test_marginals_must_match(self):
        case = example1(64)
        rest = dirac_evolution(CausalCurve.from_path(case.ev.grid, np.zeros(65)))
        with pytest.raises(MarginalMismatchError):
            FieldBuilder(case.sigma, rest)

    def test_slice_constant_on_the_cylinder(self):
        """An angle-independent bump gives one value per slice, whatever the drift."""
        case = example2(1.0, 16)
        builder = FieldBuilder(case.sigma, case.ev)
        field = builder.build(BumpFunction(2.0 * math.pi, 0.0, 1.5, None))
        for k in range(len(case.ev)):
            values = field.values[field.atoms.slice_index == k]
            assert np.all(values == values[0])
        assert continuity_residual(field, case.ev) < 1e-12


class TestResiduals:

    def test_example1_continuity_and_clock(self):
        case = example1()
        builder = FieldBuilder(case.sigma, case.ev)
        for phi in case.bumps:
            assert continuity_residual(builder.build(phi), case.ev, phi) <= 1e-9, phi.function_id
            assert clock_normalization_residual(builder, None, phi) <= 1e-5, phi.function_id

    def test_clock_residual_is_second_order(self):
        residuals = []
        for steps in (3140, 6280):
            case = example1(steps)
            residuals.append(clock_normalization_residual(case.sigma, case.ev, case.bumps[0]))
        (ratio,) = refinement_ratios(residuals)
        assert 3.0 <= ratio <= 5.0

    def test_support_near_the_boundary_is_rejected(self):
        case = example1(64)
        phi = BumpFunction(0.1, 0.0, 0.5, None)
        field = FieldBuilder(case.sigma, case.ev).build(phi)
        with pytest.raises(TestFunctionSupportError):
            continuity_residual(field, case.ev, phi)

    def test_chain_rule(self):
        case = example1(640)
        builder = FieldBuilder(case.sigma, case.ev)
        phi = case.bumps[1]
        dt = builder.grid_step
        assert chain_rule_residual(builder, None, SQUARE, [phi]) <= 10.0 * dt ** 2 * phi.tolerance_scale ** 2
        assert chain_rule_residual(builder, None, SINE, [phi]) <= 10.0 * dt ** 2 * phi.tolerance_scale

    def test_chain_rule_needs_theta_vanishing_at_zero(self):
        case = example1(64)
        cosine = OuterFunction("cos", 1, np.cos, (lambda a: -np.sin(a),))
        with pytest.raises(TestFunctionSupportError):
            chain_rule_residual(case.sigma, case.ev, cosine, [BumpFunction(3.0, 0.0, 1.0, None)])

    def test_causal_functions_along_a_causal_curve(self):
        case = example1(640)
        builder = FieldBuilder(case.sigma, case.ev)
        for f in causal_battery(Minkowski1p1(), K=[case.sigma.curves[0].start]):
            for phi in case.bumps:
                assert causality_residual(builder, None, f, phi) >= -1e-12, (f.function_id, phi.function_id)

    def test_superluminal_curve_breaks_causality(self):
        """x = 2 sin t moves faster than light where the bump sits."""
        times = np.linspace(0.0, 2.0, 401)
        curve = CausalCurve.from_path(times, 2.0 * np.sin(times))
        sigma = CurveMeasure.dirac(curve)
        phi = BumpFunction(0.5, 2.0 * math.sin(0.5), 0.4, 1.0)
        residual = causality_residual(sigma, dirac_evolution(curve), NullCoordinateArctan(-1), phi)
        assert residual < -0.05

    def test_lambda_derivative_for_a_dirac(self):
        case = example1(640)
        for phi in case.bumps:
            assert lambda_derivative_check(case.sigma, case.ev, phi) <= 1e-12

    def test_tolerance_schedule(self):
        schedule = ToleranceSchedule(2.0, 3.0)
        assert schedule.continuity(0.1, 2.0) == pytest.approx(0.4)
        assert schedule.quadratic(0.1) == pytest.approx(0.03)

    def test_refinement_ratios(self):
        assert refinement_ratios([4.0, 1.0, 0.0]) == [4.0, float("inf")]


class TestExtension:

    @pytest.fixture
    def builder(self):
        case = example1(640)
        return FieldBuilder(case.sigma, case.ev)

    def test_constant_has_zero_derivative(self, builder):
        field = extend_field(builder, Constant())
        assert np.max(np.abs(field.values)) < 1e-9

    def test_time_has_unit_derivative(self, builder):
        field = extend_field(builder, CANONICAL)
        assert np.allclose(field.values, 1.0, rtol=0.0, atol=1e-9)

    def test_agrees_with_the_field_on_a_bump(self, builder):
        phi = BumpFunction(3.0, 0.0, 1.0, 1.0)
        assert np.allclose(extend_field(builder, phi).values, builder.build(phi).values, rtol=0.0, atol=1e-9)

    def test_partition_must_sum_to_one(self, builder):
        with pytest.raises(PartitionOfUnityError):
            extend_field(builder, Constant(), [BumpFunction(3.0, 0.0, 1.0, None)])
        with pytest.raises(PartitionOfUnityError):
            extend_field(builder, Constant(), [])


class TestVelocities:

    def test_rest_observer_velocities(self):
        case = example1(640)
        model = Minkowski1p1()
        builder = FieldBuilder(case.sigma, case.ev)
        curve = case.sigma.curves[0]
        expected_dx = central_difference(curve.xs, curve.times)

        velocity = coordinate_velocity(model, builder)
        assert np.allclose(velocity[:, 0], 1.0)
        assert np.allclose(velocity[:, 1], expected_dx)
        assert np.allclose(four_velocity(model, builder), velocity)
        v = three_velocity(model, builder)
        assert np.allclose(v[:, 0], 0.0)
        assert np.allclose(v[:, 1], expected_dx)


class TestResidualSuite:

    def test_example1_passes(self):
        case = example1(640)
        causal = causal_battery(case.model, K=[case.sigma.curves[0].start])
        records = ResidualSuite().run(case.sigma, case.ev, case.bumps, causal)
        kinds = {r.residual_kind for r in records}
        assert kinds == {"continuity", "clock", "chain_product", "chain_square", "lambda", "causality"}
        assert all(r.passed for r in records), [r.as_row() for r in records if not r.passed]
        assert worst_offender(records) is None
        assert all(r.tolerance < 1e-6 for r in records if r.residual_kind == "causality")

    def test_acausal_measure_fails_under_the_default_schedule(self):
        """The first leg moves at speed 3, so arctan(t - x) decreases along it."""
        model, sigma = load_curve_measure(DATASETS / "acausal_curve_measure.json")
        sigma = resample_curve_measure(model, sigma, np.linspace(0.0, 2.0, 81))
        phi = BumpFunction(0.6, 0.0, 0.4, None)
        records = ResidualSuite().run(sigma, induced_evolution(sigma), [phi], causal_battery(model))
        breaches = [r for r in records if r.residual_kind == "causality" and not r.passed]
        assert [r.phi_id for r in breaches] == [f"{phi.function_id}*arctan(t-x)"]
        assert breaches[0].value < -0.1
        assert worst_offender(records).residual_kind == "causality"

    def test_worst_offender(self):
        records = [
            ResidualRecord("a", "clock", 0.1, 2.0, 1.0),
            ResidualRecord("b", "clock", 0.1, 5.0, 1.0),
            ResidualRecord("c", "causality", 0.1, -3.0, 1.0, lower_bound=True),
            ResidualRecord("d", "clock", 0.1, 0.5, 1.0),
        ]
        assert worst_offender(records).phi_id == "b"
        assert not records[2].passed
        assert records[3].passed
