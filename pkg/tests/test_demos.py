import math
from fractions import Fraction

import numpy as np
import pytest

from causevo.demos import (
    EXAMPLE1_CENTERS,
    dirac_evolution,
    example1,
    example1_bumps,
    example1_curve,
    example1_min_steps,
    example2,
    example2_evolution,
    example2_sigma,
    example2_times,
)
from causevo.paths import induced_evolution
from causevo.spacetime import Cylinder, Minkowski1p1
from causevo.testfns import TestFunctionSupportError


class TestExample1:

    def test_case(self):
        case = example1(64)
        assert isinstance(case.model, Minkowski1p1)
        assert len(case.sigma) == 1
        assert len(case.ev) == 65
        assert [phi.t0 for phi in case.bumps] == list(EXAMPLE1_CENTERS)
        case.sigma.validate(case.model)
        case.ev.validate(case.model)

    def test_evolution_is_the_pushforward(self):
        case = example1(64)
        induced = induced_evolution(case.sigma)
        assert all(a.same_atoms(b) for a, b in zip(induced.slices, case.ev.slices))

    def test_bumps_need_a_long_enough_window(self):
        with pytest.raises(TestFunctionSupportError):
            example1_bumps(np.linspace(0.0, 4.0, 41))

    def test_coarse_grids_are_rejected_up_front(self):
        assert example1_min_steps() == 45
        with pytest.raises(TestFunctionSupportError, match="at least 45 steps"):
            example1(8)
        assert len(example1(45).bumps) == len(EXAMPLE1_CENTERS)

    def test_dirac_evolution_weights(self):
        curve = example1_curve(8)
        assert all(s.weights == (Fraction(1),) for s in dirac_evolution(curve).slices)
        assert all(s.weights == (1.0,) for s in dirac_evolution(curve, rational=False).slices)


class TestExample2:

    def test_grid(self):
        times = example2_times(16)
        assert times.size == 17
        assert times[-1] == pytest.approx(4.0 * math.pi)

    def test_uniform_slices(self):
        ev = example2_evolution(16)
        ev.validate(Cylinder())
        assert all(len(s) == 16 for s in ev.slices)
        assert all(s.weights == (Fraction(1, 16),) * 16 for s in ev.slices)

    @pytest.mark.parametrize("drift", [-1.0, -0.5])
    def test_negative_drifts_carry_the_same_evolution(self, drift):
        case = example2(drift, 16)
        case.sigma.validate(case.model)
        induced = induced_evolution(case.sigma)
        assert all(a.same_atoms(b) for a, b in zip(induced.slices, case.ev.slices))

    def test_drifts_give_different_curves(self):
        still = example2_sigma(0.0, 16).curves[0]
        moving = example2_sigma(1.0, 16).curves[0]
        assert np.array_equal(still.ts, moving.ts)
        assert not np.array_equal(still.xs, moving.xs)
        assert np.allclose(still.xs, 0.0)

    def test_unsupported_drift(self):
        with pytest.raises(ValueError):
            example2_sigma(0.3, 16)
        with pytest.raises(ValueError):
            example2_sigma(1.5, 16)

    def test_bumps(self):
        case = example2(1.0, 16)
        assert len(case.bumps) == 6
        assert case.name == "example2(a=1)"
