from fractions import Fraction

import numpy as np
import pytest

from causevo.measures.coupling import (
    CouplingSolver,
    InfeasibleCouplingError,
    all_subsets_family,
    causal_coupling_feasible,
    compose_couplings,
    default_upset_family,
    find_causal_coupling,
    lp_coupling_feasible,
    sampled_upset_family,
    upset_characterization_check,
)
from causevo.measures.evolution import causal_evolution_report, chain_coupling, check_step, is_causal_evolution
from causevo.measures.generators import random_causal_evolution, random_measure_pair, random_slice_measure
from causevo.measures.model import Evolution, MarginalMismatchError, SliceMeasure, eta_integral
from causevo.spacetime import Cylinder, Event, Minkowski1p1
from causevo.spacetime.functions import SpacetimeFunction


def half(x: float, t: float) -> tuple:
    return (Event(t, x), Fraction(1, 2))


class TestSliceMeasures:

    def test_merges_coincident_atoms(self):
        mu = SliceMeasure.from_atoms(0.0, [half(0.0, 0.0), half(0.0, 0.0)])
        assert len(mu) == 1
        assert mu.weights == (Fraction(1),)

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(ValueError):
            SliceMeasure(0.0, (Event(0.0, 0.0),), (Fraction(0),))

    def test_validate_checks_slice_and_mass(self):
        model = Minkowski1p1()
        SliceMeasure.dirac(Event(1.0, 0.0)).validate(model)
        with pytest.raises(MarginalMismatchError):
            SliceMeasure(1.0, (Event(1.0, 0.0),), (Fraction(1, 2),)).validate(model)
        with pytest.raises(ValueError):
            SliceMeasure(1.0, (Event(0.5, 0.0),), (Fraction(1),)).validate(model)

    def test_evolution_needs_increasing_times(self):
        with pytest.raises(ValueError):
            Evolution.from_slices([SliceMeasure.dirac(Event(1.0, 0.0)), SliceMeasure.dirac(Event(0.0, 0.0))])

    def test_eta_integral_of_one(self):
        ev = Evolution.from_slices([SliceMeasure.dirac(Event(t, 0.0)) for t in (0.0, 0.5, 1.0)])
        assert eta_integral(ev, lambda e: 1.0) == pytest.approx(1.0)

    def test_eta_integral_of_time(self):
        """The trapezoid rule is exact for t on [0, 1]."""

        class ChartTime(SpacetimeFunction):
            function_id = "t"

            def __call__(self, t, x):
                return np.asarray(t, dtype=float) + 0.0 * np.asarray(x, dtype=float)

            def gradient(self, t, x):
                return np.ones(np.shape(t)), np.zeros(np.shape(t))

        ev = Evolution.from_slices([SliceMeasure.dirac(Event(float(t), 0.25)) for t in np.linspace(0.0, 1.0, 11)])
        assert eta_integral(ev, ChartTime()) == pytest.approx(0.5)


class TestCouplingSolver:

    @pytest.fixture
    def solver(self):
        return CouplingSolver(Minkowski1p1(), "rational")

    def test_identity_pairing(self, solver):
        """Two atoms moving straight up are coupled to themselves."""
        mu = SliceMeasure.from_atoms(0.0, [half(-1.0, 0.0), half(1.0, 0.0)])
        nu = SliceMeasure.from_atoms(1.0, [half(-1.0, 1.0), half(1.0, 1.0)])
        coupling = solver.find(mu, nu)
        assert coupling.mass == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}
        assert coupling.is_valid(Minkowski1p1())
        assert coupling.transport_cost(Minkowski1p1()) == pytest.approx(1.0)

    def test_min_cost_prefers_short_moves(self, solver):
        """Both pairings are causal; the straight one is cheaper."""
        mu = SliceMeasure.from_atoms(0.0, [half(-0.25, 0.0), half(0.25, 0.0)])
        nu = SliceMeasure.from_atoms(1.0, [half(-0.25, 1.0), half(0.25, 1.0)])
        coupling = solver.find(mu, nu)
        assert coupling.mass == {(0, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)}

    def test_infeasible_with_certificate(self, solver):
        """Half the mass would have to travel faster than light."""
        mu = SliceMeasure.dirac(Event(0.0, 0.0))
        nu = SliceMeasure.from_atoms(1.0, [half(0.5, 1.0), half(2.0, 1.0)])
        flow = solver.max_flow(mu, nu)
        assert not flow.feasible
        assert flow.value == Fraction(1, 2)
        assert flow.certificate == [Event(0.0, 0.0)]

        with pytest.raises(InfeasibleCouplingError) as raised:
            solver.find(mu, nu)
        assert raised.value.certificate == [Event(0.0, 0.0)]
        assert raised.value.margin == Fraction(-1, 2)

    def test_upset_check_on_rest_motion(self, solver):
        rng = np.random.default_rng(5)
        mu = random_slice_measure(rng, 0.0, 5)
        nu = SliceMeasure.from_atoms(1.0, [(Event(1.0, e.x), w) for e, w in zip(mu.events, mu.weights)])
        check = solver.upset_check(mu, nu, [tuple(mu.events)])
        assert check.passed
        assert check.margin == 0

    def test_source_must_precede_target(self, solver):
        mu = SliceMeasure.dirac(Event(1.0, 0.0))
        nu = SliceMeasure.dirac(Event(0.0, 0.0))
        with pytest.raises(ValueError):
            solver.max_flow(mu, nu)

    def test_mass_mismatch(self, solver):
        mu = SliceMeasure.dirac(Event(0.0, 0.0))
        nu = SliceMeasure(1.0, (Event(1.0, 0.0),), (Fraction(1, 2),))
        with pytest.raises(MarginalMismatchError):
            solver.max_flow(mu, nu)

    def test_scaling_preserves_feasibility(self, solver):
        rng = np.random.default_rng(17)
        for _ in range(30):
            mu, nu = random_measure_pair(rng, 4)
            scaled = solver.feasible(mu.scaled(Fraction(3)), nu.scaled(Fraction(3)))
            assert scaled == solver.feasible(mu, nu)

    def test_float_mode(self):
        solver = CouplingSolver(Minkowski1p1(), "float")
        mu = SliceMeasure.from_atoms(0.0, [(Event(0.0, -1.0), 0.5), (Event(0.0, 1.0), 0.5)])
        nu = SliceMeasure.from_atoms(1.0, [(Event(1.0, -1.0), 0.5), (Event(1.0, 1.0), 0.5)])
        coupling = solver.find(mu, nu)
        assert coupling.marginal_violation() < 1e-9
        assert coupling.is_valid(Minkowski1p1())

    def test_cylinder_coupling_across_the_seam(self):
        model = Cylinder()
        mu = SliceMeasure.dirac(Event(0.0, 6.2))
        nu = SliceMeasure.dirac(Event(0.5, 0.1))
        assert causal_coupling_feasible(model, mu, nu)
        assert find_causal_coupling(model, mu, nu).is_valid(model)


class TestUpsetCharacterization:

    def test_flow_matches_exhaustive_upset_check(self):
        """Max-flow feasibility equals mu(J+(K)) <= nu(J+(K)) over every subset K."""
        model = Minkowski1p1()
        solver = CouplingSolver(model, "rational")
        rng = np.random.default_rng(2024)
        outcomes = set()
        for n in range(200):
            mu, nu = random_measure_pair(rng, 6)
            feasible = solver.feasible(mu, nu)
            check = solver.upset_check(mu, nu, all_subsets_family(mu))
            assert feasible == check.passed, f"Instance {n}: flow says {feasible}, up-sets say {check.passed}"
            outcomes.add(feasible)
        assert outcomes == {True, False}

    def test_flow_matches_lp(self):
        model = Minkowski1p1()
        rng = np.random.default_rng(99)
        for n in range(60):
            mu, nu = random_measure_pair(rng, 5)
            assert causal_coupling_feasible(model, mu, nu) == lp_coupling_feasible(model, mu, nu), f"Instance {n}"

    def test_certificate_violates_the_upset_condition(self):
        model = Minkowski1p1()
        solver = CouplingSolver(model, "rational")
        rng = np.random.default_rng(31)
        seen = 0
        for _ in range(100):
            mu, nu = random_measure_pair(rng, 5)
            flow = solver.max_flow(mu, nu)
            if flow.feasible:
                continue
            seen += 1
            check = upset_characterization_check(model, mu, nu, [tuple(flow.certificate)])
            assert check.margin < 0
        assert seen > 0

    def test_families(self):
        rng = np.random.default_rng(1)
        mu = random_slice_measure(rng, 0.0, 6)
        family = default_upset_family(mu)
        assert len(family) == 6 + 15 + 20 + 1
        assert len(all_subsets_family(mu)) == 2 ** 6 - 1
        sampled = sampled_upset_family(mu, rng, count=8)
        assert len(sampled) == len(family) + 8
        assert all(3 < len(K) < 6 for K in sampled[len(family):])

    def test_empty_family_rejected(self):
        solver = CouplingSolver(Minkowski1p1())
        mu = SliceMeasure.dirac(Event(0.0, 0.0))
        nu = SliceMeasure.dirac(Event(1.0, 0.0))
        with pytest.raises(ValueError):
            solver.upset_check(mu, nu, [])


class TestCausalEvolutions:

    def test_random_evolutions_are_causal(self):
        model = Minkowski1p1()
        rng = np.random.default_rng(8)
        for _ in range(20):
            ev = random_causal_evolution(model, rng)
            assert is_causal_evolution(model, ev)

    def test_teleport_is_reported(self):
        model = Minkowski1p1()
        slices = [
            SliceMeasure.dirac(Event(0.0, 0.0)),
            SliceMeasure.dirac(Event(1.0, 0.5)),
            SliceMeasure.dirac(Event(2.0, 3.0)),
        ]
        report = causal_evolution_report(model, Evolution.from_slices(slices))
        assert not report.causal
        assert report.first_failure.step == 1
        assert report.first_failure.interval == (1.0, 2.0)
        assert report.first_failure.certificate == [Event(1.0, 0.5)]
        assert not report.first_failure.upset.passed

    def test_step_check_covers_pairs_by_default(self):
        """Two neighbouring atoms together lose all their slack; either alone keeps some."""
        xs = (-10.0, -9.0, 9.0, 10.0)
        quarter = Fraction(1, 4)
        ev = Evolution.from_slices([
            SliceMeasure.from_atoms(t, [(Event(t, x), quarter) for x in xs]) for t in (0.0, 1.0)
        ])
        step = check_step(CouplingSolver(Minkowski1p1()), ev, 0)
        assert step.feasible
        assert step.upset.margin == 0
        assert step.upset.worst_set == (Event(0.0, -10.0), Event(0.0, -9.0))

    def test_chain_coupling_is_causal(self):
        """Gluing adjacent couplings gives a causal coupling of the end slices."""
        model = Minkowski1p1()
        rng = np.random.default_rng(21)
        for _ in range(20):
            ev = random_causal_evolution(model, rng)
            glued = chain_coupling(model, ev)
            assert glued.is_valid(model)
            assert glued.source.same_atoms(ev.slices[0])
            assert glued.target.same_atoms(ev.slices[-1])

    def test_composition_checks_the_middle(self):
        model = Minkowski1p1()
        a = SliceMeasure.dirac(Event(0.0, 0.0))
        b = SliceMeasure.dirac(Event(1.0, 0.0))
        c = SliceMeasure.dirac(Event(1.0, 0.5))
        d = SliceMeasure.dirac(Event(2.0, 0.5))
        first = find_causal_coupling(model, a, b)
        second = find_causal_coupling(model, c, d)
        with pytest.raises(MarginalMismatchError):
            compose_couplings(first, second)
