"""Fault-tolerant resource estimation for Hubbard-model dynamics on a
biplanar honeycomb-code photonic architecture."""

from .errors import (
    ConvergenceError,
    FitError,
    InvalidParameterError,
    NoDistanceFoundError,
    NoProtocolError,
)
from .noise import (
    AttemptCaps,
    CycleOutcomeDistribution,
    HeraldedOutcomeDistribution,
    PauliChannel,
    PhysicalNoiseParams,
    cycle_outcome_distribution,
    derive_noise_params,
    heralded_cz_distribution,
    heralded_mzz_distribution,
    idle_channel,
    init_measure_outcomes,
    loss_channel,
    mc_rus_oracle,
    single_qubit_gate_channel,
)
from .pipeline import (
    ErrorBudget,
    EstimateReport,
    FloorplanCounts,
    SolveOptions,
    allocate_budget,
    corridor_capacity_check,
    floorplan,
    msf_sizing,
    runtime_seconds,
    solve_estimate,
)
from .surgery import (
    ErrorDataPoint,
    FitParams,
    MsfProtocol,
    PatchGeometry,
    combined_error,
    extrapolate_error,
    fit_error_curve,
    load_error_data,
    load_msf_table,
    msf_convert,
    msf_qubit_conversion_rate,
    patch_geometry,
    select_distance,
    transversal_cnot_overhead,
)
from .synthesis import (
    RotationCost,
    SynthesisPlan,
    SynthesisStrategy,
    crossover_L,
    direct_plan,
    fallback_plan,
    synthesis_cost,
    t_count,
)
from .timing import TimingModel, logical_cycle_time, reaction_ratio
from .trotter import (
    CostLedger,
    ProblemSpec,
    golden_cost,
    interaction_cost,
    kappa,
    pink_cost,
    trotter_step_cost,
    trotter_steps,
)

__version__ = "0.1.0"
