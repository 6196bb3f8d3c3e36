"""Error budgeting, floorplan, factory sizing, and the fixed-point estimate.

The full estimate is self-referential: the code distance sets the logical
cycle time, which sets the synthesis cost, which sets the total cube count,
which sets the logical error target, which sets the code distance.  The
solver iterates this loop over the discrete geometry ladder until the
selected geometry stops changing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ConvergenceError, InvalidParameterError, NoProtocolError
from .noise import PhysicalNoiseParams
from .surgery import (
    LADDER_WIDTHS,
    FitParams,
    MsfProtocol,
    PatchGeometry,
    fit_error_curve,
    load_error_data,
    load_msf_table,
    patch_geometry,
    select_distance,
)
from .synthesis import (
    FALLBACK_BRANCH,
    RotationCost,
    SynthesisPlan,
    direct_plan,
    fallback_plan,
    synthesis_cost,
)
from .timing import DEFAULT_TIMING, TimingModel
from .trotter import (
    ProblemSpec,
    single_plane_step_timesteps,
    trotter_step_cost,
    trotter_steps,
)


@dataclass(frozen=True)
class ErrorBudget:
    """Split of the total diamond-norm budget across error sources."""

    total_diamond: float
    eps_alg: float
    eps_rot: float
    eps_log: float
    eps_msf: float

    def __post_init__(self):
        consumed = 2 * self.eps_alg + self.eps_rot + self.eps_log + self.eps_msf
        if consumed > self.total_diamond + 1e-15:
            raise InvalidParameterError(
                f"budget overcommitted: {consumed} > {self.total_diamond}"
            )


def allocate_budget(total: float, policy: str = "default") -> ErrorBudget:
    """Default split: half algorithmic (2 eps_alg + eps_rot, with
    eps_rot = 0.01 eps_alg), half hardware (eps_log = eps_msf = total/4)."""
    if total < 0:
        raise InvalidParameterError("total budget must be nonnegative")
    if policy != "default":
        raise InvalidParameterError(f"unknown budget policy {policy!r}")
    eps_alg = (total / 2.0) / 2.01
    return ErrorBudget(
        total_diamond=total,
        eps_alg=eps_alg,
        eps_rot=0.01 * eps_alg,
        eps_log=total / 4.0,
        eps_msf=total / 4.0,
    )


@dataclass(frozen=True)
class FloorplanCounts:
    total_patches: int
    msf_patches: int

    @property
    def data_workspace_patches(self) -> int:
        return self.total_patches - self.msf_patches

    def __post_init__(self):
        if not 0 <= self.msf_patches <= self.total_patches:
            raise InvalidParameterError("msf_patches must not exceed total_patches")


def render_floorplan(lattice_l: int, w_msf: int) -> list[str]:
    """One plane of the patch layout as rows of cell characters.

    'D' data patch column positions, '.' workspace, 'V' vertical shuttle
    corridor (kept free for the golden-layer column shift), 'M' magic state
    factory aisle.  Grid rule (the published material fixes only the L=4
    drawing and one calibration point, so the generalization is an
    assumption): each plaquette column pair contributes site/workspace
    columns 'D.D', inter-pair gaps add one workspace column plus a
    w_msf-wide shuttle corridor; each plaquette row pair contributes rows
    data/workspace/data followed by a w_msf-tall factory aisle (the last
    aisle serves the periodic-boundary plaquettes), with one trailing
    workspace row.
    """
    if lattice_l < 2 or lattice_l % 2 != 0:
        raise InvalidParameterError("lattice_l must be an even integer >= 2")
    if w_msf < 1:
        raise InvalidParameterError("w_msf must be >= 1")
    pairs = lattice_l // 2
    col_blocks = []
    for p in range(pairs):
        col_blocks.append("D.D")
        if p < pairs - 1:
            col_blocks.append("." + "V" * w_msf)
    cols = "".join(col_blocks)
    data_row = cols
    workspace_row = "".join("." if c != "V" else "V" for c in cols)
    aisle_row = "M" * len(cols)
    rows: list[str] = []
    for _ in range(pairs):
        rows += [data_row, workspace_row, data_row]
        rows += [aisle_row] * w_msf
    rows.append(workspace_row)
    return rows


def floorplan(
    lattice_l: int,
    w_msf: int,
    override_total: Optional[int] = None,
    override_msf: Optional[int] = None,
) -> FloorplanCounts:
    """Patch counts over both planes, or an explicit override."""
    if (override_total is None) != (override_msf is None):
        raise InvalidParameterError("floorplan overrides must be given together")
    if override_total is not None:
        return FloorplanCounts(override_total, override_msf)
    plane = render_floorplan(lattice_l, w_msf)
    cells = sum(len(r) for r in plane)
    msf = sum(r.count("M") for r in plane)
    return FloorplanCounts(2 * cells, 2 * msf)


def msf_sizing(
    n_t_total: float,
    eps_msf: float,
    lattice_l: int,
    rounds_per_cycle: int,
    reaction_rounds: int,
    protocols: Sequence[MsfProtocol],
):
    """Choose a factory protocol and count parallel instances.

    The fidelity target spreads the budget linearly over all consumed T
    states; demand peaks at L^2 states per logical-cycle-plus-reaction
    window, counted in syndrome rounds, against each factory's 1/rounds
    output rate.
    """
    if n_t_total <= 0:
        raise InvalidParameterError("n_t_total must be positive")
    target = eps_msf / n_t_total
    feasible = [p for p in protocols if p.p_out < target]
    if not feasible:
        raise NoProtocolError(f"no protocol with p_out below target {target:g}")
    chosen = min(feasible, key=lambda p: p.hh_qubits)
    demand = lattice_l**2 / (rounds_per_cycle + reaction_rounds)
    factories = math.ceil(demand * chosen.hh_rounds)
    return chosen, factories, factories * chosen.hh_qubits


def runtime_seconds(r: int, timesteps_per_step: float, logical_cycle_ns: float) -> float:
    return r * timesteps_per_step * logical_cycle_ns * 1e-9


def corridor_capacity_check(plan: FloorplanCounts, geometry: PatchGeometry,
                            msf_qubits_required: float) -> float:
    """Ratio of physical qubits in the factory aisles to the sized requirement."""
    if msf_qubits_required <= 0:
        return math.inf
    return plan.msf_patches * geometry.qubits / msf_qubits_required


@dataclass(frozen=True)
class SolveOptions:
    strategy: str = "mixed_fallback"
    p_succ: float = 0.99
    mode: str = "worst"
    precision: str = "headline"  # "headline" snaps counts to the integers
    timing: TimingModel = DEFAULT_TIMING
    fit: Optional[FitParams] = None
    protocols: Optional[Sequence[MsfProtocol]] = None
    floorplan_override: Optional[tuple[int, int]] = None
    initial_rounds: Optional[int] = None
    max_iterations: int = 10
    allow_off_table: bool = False


@dataclass(frozen=True)
class EstimateReport:
    """Converged output of the fixed-point pipeline."""

    trotter_steps: int
    eps_synth: float
    n_t_per_rotation: float
    n_t_fallback: float
    t_synth_timesteps: float
    cubes_per_rotation: float
    timesteps_per_step: float
    cubes_per_step: float
    t_states_per_step: float
    transversal_cnots_per_step: float
    n_l_total: float
    n_t_total: float
    p_l_target: float
    p_msf_target: float
    geometry: PatchGeometry
    logical_cycle_ns: float
    floorplan: FloorplanCounts
    physical_qubits: int
    msf_protocol: str
    msf_factories: int
    msf_qubits_required: float
    msf_qubits_available: int
    runtime_seconds: float
    iterations: int
    budget: Optional[ErrorBudget] = field(repr=False, compare=False, default=None)

    def key_values(self) -> dict:
        """The machine-readable report, exactly the documented keys."""
        return {
            "trotter_steps": self.trotter_steps,
            "eps_synth": self.eps_synth,
            "n_t_per_rotation": self.n_t_per_rotation,
            "n_t_fallback": self.n_t_fallback,
            "t_synth_timesteps": self.t_synth_timesteps,
            "timesteps_per_step": self.timesteps_per_step,
            "cubes_per_step": self.cubes_per_step,
            "transversal_cnots_per_step": self.transversal_cnots_per_step,
            "n_l_total": self.n_l_total,
            "n_t_total": self.n_t_total,
            "p_l_target": self.p_l_target,
            "p_msf_target": self.p_msf_target,
            "code_width": self.geometry.width,
            "code_height": self.geometry.height,
            "rounds_per_cycle": self.geometry.rounds,
            "logical_cycle_ns": self.logical_cycle_ns,
            "total_patches": self.floorplan.total_patches,
            "msf_patches": self.floorplan.msf_patches,
            "physical_qubits": self.physical_qubits,
            "msf_factories": self.msf_factories,
            "msf_qubits_required": self.msf_qubits_required,
            "runtime_seconds": self.runtime_seconds,
            "iterations": self.iterations,
        }

    def single_plane_comparison(self) -> tuple[float, float]:
        """(timesteps per step, runtime seconds) of the single-plane reference."""
        ts = single_plane_step_timesteps(self.t_synth_timesteps)
        return ts, runtime_seconds(self.trotter_steps, ts, self.logical_cycle_ns)


def _rotation_for(spec: ProblemSpec, eps_synth: float, tau: float,
                  options: SolveOptions) -> tuple[SynthesisPlan, RotationCost]:
    rounding = "integer" if options.precision == "headline" else "none"
    if options.strategy in FALLBACK_BRANCH:
        plan = fallback_plan(eps_synth, options.p_succ, spec.lattice_l,
                             strategy=options.strategy, mode=options.mode,
                             rounding=rounding)
        cost = synthesis_cost(plan, "fallback", tau)
    else:
        plan = direct_plan(eps_synth, options.strategy, mode=options.mode,
                           rounding=rounding)
        cost = synthesis_cost(plan, "direct", tau)
    return plan, cost


def solve_estimate(
    spec: ProblemSpec,
    noise: PhysicalNoiseParams,
    budget: ErrorBudget,
    options: SolveOptions = SolveOptions(),
) -> EstimateReport:
    """Run the self-consistent resource estimate to its geometry fixed point.

    ``noise`` selects the error-rate dataset regime; the bundled cube data
    is for overall intensity 0.01, and no rescaling with ``noise.p`` is
    attempted (the caller supplies matching data otherwise).

    In "headline" precision the per-rotation T counts, timesteps, and cubes
    are snapped to whole numbers at the plan boundary; "real" carries full
    precision throughout.
    """
    if options.precision not in ("headline", "real"):
        raise InvalidParameterError("precision must be 'headline' or 'real'")
    fit = options.fit or fit_error_curve(load_error_data())
    protocols = options.protocols or load_msf_table()
    timing = options.timing

    r = trotter_steps(spec, budget.eps_alg)
    n_rotations = 4 * spec.lattice_l**2 * r
    eps_synth = budget.eps_rot / n_rotations

    headline = options.precision == "headline"

    def evaluate(rounds: int):
        tau = timing.reaction_ratio(rounds)
        plan, rotation = _rotation_for(spec, eps_synth, tau, options)
        if headline:
            rotation = RotationCost(
                t_states=rotation.t_states,
                logical_timesteps=round(rotation.logical_timesteps),
                active_cubes=round(rotation.active_cubes),
            )
        step = trotter_step_cost(spec, rotation)
        n_l = step.active_cubes * r
        p_l = budget.eps_log / n_l
        geo = select_distance(fit, p_l, allow_off_table=options.allow_off_table)
        return plan, rotation, step, n_l, p_l, geo

    rounds = options.initial_rounds or (102 if spec.lattice_l == 8 else 60)
    trace: list[int] = [rounds]
    geometry = None
    for _ in range(options.max_iterations):
        plan, rotation, step, n_l, p_l, geometry = evaluate(rounds)
        if geometry.rounds == rounds:
            break
        if len(trace) >= 2 and trace[-2] == geometry.rounds:
            # 2-cycle between adjacent ladder entries; settle on the larger
            wider = patch_geometry(max(geometry.width, _width_for_rounds(rounds)))
            plan, rotation, step, n_l, p_l, _ = evaluate(wider.rounds)
            geometry = wider
            break
        rounds = geometry.rounds
        trace.append(rounds)
    else:
        raise ConvergenceError(
            f"geometry did not settle in {options.max_iterations} iterations", trace
        )
    iterations = len(trace)

    n_t_total = step.t_states * r
    p_msf = budget.eps_msf / n_t_total
    chosen, factories, msf_qubits = msf_sizing(
        n_t_total, budget.eps_msf, spec.lattice_l,
        geometry.rounds, timing.reaction_rounds, protocols,
    )
    plan_counts = floorplan(
        spec.lattice_l, spec.w_msf,
        *(options.floorplan_override or (None, None)),
    )
    physical_qubits = plan_counts.total_patches * geometry.qubits
    cycle_ns = timing.logical_cycle_ns(geometry.rounds)
    return EstimateReport(
        trotter_steps=r,
        eps_synth=eps_synth,
        n_t_per_rotation=plan.n_t,
        n_t_fallback=plan.n_t_fallback,
        t_synth_timesteps=rotation.logical_timesteps,
        cubes_per_rotation=rotation.active_cubes,
        timesteps_per_step=step.logical_timesteps,
        cubes_per_step=step.active_cubes,
        t_states_per_step=step.t_states,
        transversal_cnots_per_step=step.transversal_cnots,
        n_l_total=n_l,
        n_t_total=n_t_total,
        p_l_target=p_l,
        p_msf_target=p_msf,
        geometry=geometry,
        logical_cycle_ns=cycle_ns,
        floorplan=plan_counts,
        physical_qubits=physical_qubits,
        msf_protocol=chosen.label,
        msf_factories=factories,
        msf_qubits_required=msf_qubits,
        msf_qubits_available=plan_counts.msf_patches * geometry.qubits,
        runtime_seconds=runtime_seconds(r, step.logical_timesteps, cycle_ns),
        iterations=iterations,
        budget=budget,
    )


def _width_for_rounds(rounds: int) -> int:
    for w in LADDER_WIDTHS:
        if patch_geometry(w).rounds == rounds:
            return w
    raise InvalidParameterError(f"no ladder width with {rounds} rounds")
