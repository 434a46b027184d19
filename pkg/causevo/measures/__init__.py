from .model import (
    Coupling,
    EtaAtoms,
    Evolution,
    MarginalMismatchError,
    SliceMeasure,
    eta_atoms,
    eta_integral,
    merge_atoms,
)
from .coupling import (
    CouplingSolver,
    InfeasibleCouplingError,
    UpsetCheckResult,
    all_subsets_family,
    sampled_upset_family,
    causal_coupling_feasible,
    compose_couplings,
    default_upset_family,
    find_causal_coupling,
    lp_coupling_feasible,
    upset_characterization_check,
)
from .evolution import (
    EvolutionCausality,
    StepCausality,
    causal_evolution_report,
    chain_coupling,
    is_causal_evolution,
)

__all__ = [
    "Coupling",
    "EtaAtoms",
    "Evolution",
    "MarginalMismatchError",
    "SliceMeasure",
    "eta_atoms",
    "eta_integral",
    "merge_atoms",
    "CouplingSolver",
    "InfeasibleCouplingError",
    "UpsetCheckResult",
    "all_subsets_family",
    "sampled_upset_family",
    "causal_coupling_feasible",
    "compose_couplings",
    "default_upset_family",
    "find_causal_coupling",
    "lp_coupling_feasible",
    "upset_characterization_check",
    "EvolutionCausality",
    "StepCausality",
    "causal_evolution_report",
    "chain_coupling",
    "is_causal_evolution",
]
