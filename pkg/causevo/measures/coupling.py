import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import linprog

from causevo.config import CONFIG
from causevo.logging_config import create_logger
from causevo.measures.model import Coupling, MarginalMismatchError, SliceMeasure
from causevo.spacetime.model import Event, SpacetimeModel
from causevo.utils.numerics import Weight

# Squared embedding distances are rounded to this resolution for the integer min-cost flow.
COST_SCALE = 10 ** 9

SOURCE, SINK = "source", "sink"


class InfeasibleCouplingError(ValueError):
    """No causal coupling exists; `certificate` is a set K with mu(J+(K)) > nu(J+(K))."""

    def __init__(self, message: str, certificate: Optional[List[Event]] = None, margin: Optional[Weight] = None):
        super().__init__(message)
        self.certificate = certificate
        self.margin = margin


@dataclass(frozen=True)
class FlowResult:
    value: Weight
    total: Weight
    feasible: bool
    certificate: Optional[List[Event]] = None


@dataclass(frozen=True)
class UpsetCheckResult:
    passed: bool
    margin: Weight
    worst_set: Tuple[Event, ...]

    def __bool__(self) -> bool:
        return self.passed


def default_upset_family(mu: SliceMeasure, max_size: int = 3) -> List[Tuple[Event, ...]]:
    """Singletons and all subsets up to max_size of mu's atoms, plus the full support."""
    family: List[Tuple[Event, ...]] = []
    for size in range(1, min(max_size, len(mu)) + 1):
        family.extend(combinations(mu.events, size))
    if len(mu) > max_size:
        family.append(tuple(mu.events))
    return family


def all_subsets_family(mu: SliceMeasure) -> List[Tuple[Event, ...]]:
    return default_upset_family(mu, max_size=len(mu))


def sampled_upset_family(
    mu: SliceMeasure,
    rng: np.random.Generator,
    count: int = 32,
    max_size: int = 3,
) -> List[Tuple[Event, ...]]:
    """The default family plus `count` random subsets larger than max_size."""
    family = default_upset_family(mu, max_size)
    if len(mu) <= max_size + 1:
        return family
    for _ in range(count):
        size = int(rng.integers(max_size + 1, len(mu)))
        picks = sorted(rng.choice(len(mu), size=size, replace=False))
        family.append(tuple(mu.events[i] for i in picks))
    return family


def _as_fraction(w: Weight) -> Fraction:
    return w if isinstance(w, Fraction) else Fraction(w)


class CouplingSolver:
    """
    Decides and constructs causal couplings between two atomic slice measures.

    Feasibility is a max-flow on the bipartite graph of causally related atom pairs.
    In rational mode the weights are scaled by the least common denominator so the
    flow is computed on integers and the answer is exact; in float mode a flow within
    FLOAT_FEASIBILITY_TOL of the total mass is accepted.
    """

    def __init__(
        self,
        model: SpacetimeModel,
        arithmetic: Optional[str] = None,
        slack: float = 0.0,
        tol: Optional[float] = None,
    ):
        self.model = model
        self.arithmetic = (arithmetic or CONFIG.ARITHMETIC_MODE).lower()
        if self.arithmetic not in ("rational", "float"):
            raise ValueError(f"Unknown arithmetic mode: {self.arithmetic}")
        self.slack = slack
        self.tol = CONFIG.FLOAT_FEASIBILITY_TOL if tol is None else tol
        self.logger = create_logger("CouplingSolver")

    @property
    def rational(self) -> bool:
        return self.arithmetic == "rational"

    def _check_order(self, mu: SliceMeasure, nu: SliceMeasure) -> None:
        if mu.time > nu.time:
            raise ValueError(f"Source slice time {mu.time} is later than target slice time {nu.time}")

    def _reach(self, events: Sequence[Event], target: SliceMeasure) -> np.ndarray:
        """Boolean (len(events), len(target)) matrix: atom j of target lies in J+(events[i])."""
        t, x = target.coords[:, 0], target.coords[:, 1]
        return np.array(
            [np.atleast_1d(self.model.causal_gap(p, t, x)) >= -self.slack for p in events],
            dtype=bool,
        ).reshape(len(events), len(target))

    def causal_edges(self, mu: SliceMeasure, nu: SliceMeasure) -> np.ndarray:
        """Boolean (len(mu), len(nu)) matrix of the pairs p <= q."""
        return self._reach(mu.events, nu)

    def _capacities(self, mu: SliceMeasure, nu: SliceMeasure):
        if self.rational:
            fractions_mu = [_as_fraction(w) for w in mu.weights]
            fractions_nu = [_as_fraction(w) for w in nu.weights]
            scale = math.lcm(*(w.denominator for w in fractions_mu + fractions_nu))
            caps_mu = [int(w * scale) for w in fractions_mu]
            caps_nu = [int(w * scale) for w in fractions_nu]
            return caps_mu, caps_nu, scale
        return [float(w) for w in mu.weights], [float(w) for w in nu.weights], 1

    def _unit_weights(self, mu: SliceMeasure, nu: SliceMeasure) -> Tuple[np.ndarray, np.ndarray, int]:
        """Weights as arrays; integers over a common denominator in rational mode."""
        caps_mu, caps_nu, scale = self._capacities(mu, nu)
        if not self.rational:
            return np.asarray(caps_mu, dtype=float), np.asarray(caps_nu, dtype=float), scale
        fits = max(sum(caps_mu), sum(caps_nu)) < 2 ** 62
        dtype = np.int64 if fits else object
        return np.array(caps_mu, dtype=dtype), np.array(caps_nu, dtype=dtype), scale

    def _check_masses(self, caps_mu, caps_nu) -> None:
        total_mu, total_nu = sum(caps_mu), sum(caps_nu)
        if self.rational and total_mu != total_nu:
            raise MarginalMismatchError(f"Measures have different total mass ({total_mu} vs {total_nu} units)")
        if not self.rational and abs(total_mu - total_nu) > self.tol:
            raise MarginalMismatchError(f"Measures have different total mass ({total_mu} vs {total_nu})")

    def max_flow(self, mu: SliceMeasure, nu: SliceMeasure) -> FlowResult:
        self._check_order(mu, nu)
        edges = self.causal_edges(mu, nu)
        caps_mu, caps_nu, scale = self._capacities(mu, nu)
        self._check_masses(caps_mu, caps_nu)

        graph = nx.DiGraph()
        for i, c in enumerate(caps_mu):
            graph.add_edge(SOURCE, ("mu", i), capacity=c)
        for j, c in enumerate(caps_nu):
            graph.add_edge(("nu", j), SINK, capacity=c)
        for i, j in zip(*np.nonzero(edges)):
            graph.add_edge(("mu", int(i)), ("nu", int(j)))

        cut_value, (reachable, _) = nx.minimum_cut(graph, SOURCE, SINK)
        total = sum(caps_mu)
        feasible = cut_value == total if self.rational else cut_value >= total - self.tol

        certificate = None
        if not feasible:
            # mu-atoms on the source side of a minimum cut violate Hall's condition.
            certificate = [mu.events[i] for i in range(len(mu)) if ("mu", i) in reachable]

        value: Weight = Fraction(int(cut_value), scale) if self.rational else float(cut_value)
        self.logger.debug(f"Max flow {value} of {len(mu)}x{len(nu)} atoms, {int(edges.sum())} causal pairs")
        return FlowResult(value, Fraction(total, scale) if self.rational else float(total), feasible, certificate)

    def feasible(self, mu: SliceMeasure, nu: SliceMeasure) -> bool:
        return self.max_flow(mu, nu).feasible

    def find(self, mu: SliceMeasure, nu: SliceMeasure) -> Coupling:
        """
        The min-cost causal coupling for the squared embedding distance; ties are
        resolved by a secondary cost on the flattened pair index.
        """
        flow = self.max_flow(mu, nu)
        if not flow.feasible:
            check = self.upset_check(mu, nu, [tuple(flow.certificate or ())]) if flow.certificate else None
            raise InfeasibleCouplingError(
                f"No causal coupling between slices at {mu.time} and {nu.time}: max flow {flow.value}",
                certificate=flow.certificate,
                margin=check.margin if check is not None else None,
            )

        edges = self.causal_edges(mu, nu)
        cost = self._cost_matrix(mu, nu)
        mass = self._min_cost_flow(mu, nu, edges, cost) if self.rational else self._min_cost_lp(mu, nu, edges, cost)
        return Coupling(mu, nu, mass)

    def _cost_matrix(self, mu: SliceMeasure, nu: SliceMeasure) -> np.ndarray:
        src = self.model.embed_coords(mu.coords[:, 0], mu.coords[:, 1])
        dst = self.model.embed_coords(nu.coords[:, 0], nu.coords[:, 1])
        return np.sum((src[:, None, :] - dst[None, :, :]) ** 2, axis=-1)

    def _min_cost_flow(self, mu, nu, edges, cost) -> Dict[Tuple[int, int], Weight]:
        caps_mu, caps_nu, scale = self._capacities(mu, nu)
        n, m = len(mu), len(nu)
        # The secondary key sums to at most scale * n * m over any flow.
        primary = scale * n * m + 1

        graph = nx.DiGraph()
        for i, c in enumerate(caps_mu):
            graph.add_node(("mu", i), demand=-c)
        for j, c in enumerate(caps_nu):
            graph.add_node(("nu", j), demand=c)
        for i, j in zip(*np.nonzero(edges)):
            i, j = int(i), int(j)
            weight = int(round(cost[i, j] * COST_SCALE)) * primary + i * m + j
            graph.add_edge(("mu", i), ("nu", j), weight=weight)

        _, flow = nx.network_simplex(graph)
        mass: Dict[Tuple[int, int], Weight] = {}
        for i in range(n):
            for (_, j), f in flow[("mu", i)].items():
                if f > 0:
                    mass[(i, j)] = Fraction(f, scale)
        return mass

    def _min_cost_lp(self, mu, nu, edges, cost) -> Dict[Tuple[int, int], Weight]:
        pairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(edges))]
        n, m = len(mu), len(nu)
        a_eq = np.zeros((n + m, len(pairs)))
        for col, (i, j) in enumerate(pairs):
            a_eq[i, col] = 1.0
            a_eq[n + j, col] = 1.0
        b_eq = np.concatenate([mu.float_weights(), nu.float_weights()])
        c = np.array([cost[i, j] for i, j in pairs])
        res = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status != 0:
            raise InfeasibleCouplingError(f"LP coupling failed: {res.message}")
        return {pair: float(v) for pair, v in zip(pairs, res.x) if v > self.tol}

    def upset_check(
        self,
        mu: SliceMeasure,
        nu: SliceMeasure,
        family: Optional[Sequence[Sequence[Event]]] = None,
    ) -> UpsetCheckResult:
        """min over K of nu(J+(K)) - mu(J+(K)); passes iff it is nonnegative."""
        self._check_order(mu, nu)
        family = default_upset_family(mu) if family is None else family
        if not family:
            raise ValueError("The family of sets K must be nonempty")
        if any(len(K) == 0 for K in family):
            raise ValueError("Sets K must be nonempty")

        members = list(dict.fromkeys(k for K in family for k in K))
        index = {k: n for n, k in enumerate(members)}
        reach_mu, reach_nu = self._reach(members, mu), self._reach(members, nu)
        w_mu, w_nu, scale = self._unit_weights(mu, nu)

        # Sets of equal size are scored together as rows of an index matrix.
        margins = np.empty(len(family), dtype=w_mu.dtype)
        sizes = np.array([len(K) for K in family])
        for size in np.unique(sizes):
            rows = np.flatnonzero(sizes == size)
            idx = np.array([[index[k] for k in family[r]] for r in rows], dtype=int)
            on_mu = reach_mu[idx].any(axis=1).astype(w_mu.dtype)
            on_nu = reach_nu[idx].any(axis=1).astype(w_nu.dtype)
            margins[rows] = on_nu @ w_nu - on_mu @ w_mu

        worst = min(range(len(family)), key=margins.__getitem__)
        worst_margin: Weight = Fraction(int(margins[worst]), scale) if self.rational else float(margins[worst])
        passed = worst_margin >= 0 if self.rational else worst_margin >= -self.tol
        self.logger.debug(f"Up-set check over {len(family)} sets: worst margin {worst_margin}")
        return UpsetCheckResult(bool(passed), worst_margin, tuple(family[worst]))


def causal_coupling_feasible(
    model: SpacetimeModel,
    mu: SliceMeasure,
    nu: SliceMeasure,
    arithmetic: Optional[str] = None,
    slack: float = 0.0,
) -> bool:
    return CouplingSolver(model, arithmetic, slack).feasible(mu, nu)


def find_causal_coupling(
    model: SpacetimeModel,
    mu: SliceMeasure,
    nu: SliceMeasure,
    arithmetic: Optional[str] = None,
    slack: float = 0.0,
) -> Coupling:
    return CouplingSolver(model, arithmetic, slack).find(mu, nu)


def upset_characterization_check(
    model: SpacetimeModel,
    mu: SliceMeasure,
    nu: SliceMeasure,
    K_family: Optional[Sequence[Sequence[Event]]] = None,
    slack: float = 0.0,
) -> UpsetCheckResult:
    return CouplingSolver(model, slack=slack).upset_check(mu, nu, K_family)


def lp_coupling_feasible(model: SpacetimeModel, mu: SliceMeasure, nu: SliceMeasure, slack: float = 0.0) -> bool:
    """Brute-force feasibility: an LP over the transport polytope restricted to causal pairs."""
    solver = CouplingSolver(model, "float", slack)
    solver._check_order(mu, nu)
    edges = solver.causal_edges(mu, nu)
    pairs = list(zip(*np.nonzero(edges)))
    if not pairs:
        return False
    n, m = len(mu), len(nu)
    a_eq = np.zeros((n + m, len(pairs)))
    for col, (i, j) in enumerate(pairs):
        a_eq[i, col] = 1.0
        a_eq[n + j, col] = 1.0
    b_eq = np.concatenate([mu.float_weights(), nu.float_weights()])
    res = linprog(np.zeros(len(pairs)), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 0


def compose_couplings(first: Coupling, second: Coupling) -> Coupling:
    """
    Glue a coupling of (mu, nu) with one of (nu, rho) through nu's atoms:
    omega(i, k) = sum_j first(i, j) * second(j, k) / nu_j.
    """
    middle = first.target
    if not middle.same_atoms(second.source, tol=0.0 if middle.is_rational else 1e-12):
        raise MarginalMismatchError("Couplings do not share their middle measure")

    index = {e: j for j, e in enumerate(second.source.events)}
    outgoing: Dict[int, List[Tuple[int, Weight]]] = {}
    for (j, k), w in second.mass.items():
        outgoing.setdefault(j, []).append((k, w))

    mass: Dict[Tuple[int, int], Weight] = {}
    for (i, j), w in sorted(first.mass.items()):
        nu_j = middle.weights[j]
        for k, v in outgoing.get(index[middle.events[j]], []):
            mass[(i, k)] = mass.get((i, k), 0) + w * v / nu_j
    return Coupling(first.source, second.target, mass)
