"""Entanglement-formation time bounds for quantum-oracle operations.

The input and output registers evolve under a nondemolition Hamiltonian
``H_I + H_O + C A_I x B_O`` that is diagonal in a product basis.  The package
computes the overlaps of the conditional output states exactly, the
minimum-time bound for those overlaps to vanish, reference speed limits,
a brute-force evolution oracle and parameter sweeps.
"""

from .amplitude import (
    GeneralizedPhaseModel,
    PhaseSchedule,
    branch_components,
    conditional_output_state,
    correlation_amplitude,
    generalized_amplitude,
    overlap,
    overlap_trace,
    reduced_offdiagonal,
)
from .bounds import (
    BoundReport,
    PairBound,
    bound_report,
    check_branch_inequality,
    entanglement_bound,
    interaction_average,
    mandelstam_tamm,
    margolus_levitin,
    pair_bound,
)
from .errors import (
    DegeneratePair,
    EntboundError,
    NoApplicablePair,
    ScenarioError,
    ZeroMeanEnergy,
    ZeroSpread,
)
from .oracle import (
    FirstZeroResult,
    first_zero_search,
    full_state,
    overlap_via_oracle,
    simultaneous_orthogonality_time,
)
from .spectral import (
    PLANCK,
    InputRegisterSpec,
    OutputRegisterSpec,
    Scenario,
    branch_split,
    composite_energies,
    load_scenario,
    random_scenario,
    validate_scenario,
)
from .sweep import SweepSpec, build_kappa_family, run_sweep, verify_monotonicity

__version__ = "0.1.0"
