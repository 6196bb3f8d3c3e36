"""T-count models and fault-tolerant cost ledgers for Z-rotation synthesis.

Four Clifford+T synthesis strategies are modeled by linear T-count laws
c1*log2(1/eps) + c2.  The fallback strategies add a probabilistic accept
branch; when L^2 rotations run in parallel, the whole layer waits for the
slowest branch, which the cost formulas account for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import InvalidParameterError

#: Fractional cube coefficients (averages over X/Y/Z measurement axes) kept
#: as exact thirds.
_DIRECT_CUBE_SLOPE = 16.0 / 3.0      # printed 5.33
_FALLBACK_CUBE_SLOPE = 19.0 / 3.0    # printed 6.33


@dataclass(frozen=True)
class SynthesisStrategy:
    """T-count law coefficients for one synthesis strategy."""

    name: str
    mean_slope: float
    mean_offset: float
    worst_slope: float
    worst_offset: float

    def coefficients(self, mode: str) -> tuple[float, float]:
        if mode == "mean":
            return self.mean_slope, self.mean_offset
        if mode == "worst":
            return self.worst_slope, self.worst_offset
        raise InvalidParameterError(f"mode must be 'mean' or 'worst', got {mode!r}")


STRATEGIES = {
    "diagonal": SynthesisStrategy("diagonal", 3.02, 1.77, 3.02, 9.19),
    "mixed_diagonal": SynthesisStrategy("mixed_diagonal", 1.52, -0.01, 1.54, 6.85),
    "fallback": SynthesisStrategy("fallback", 1.03, 5.75, 1.05, 11.83),
    "mixed_fallback": SynthesisStrategy("mixed_fallback", 0.53, 4.86, 0.57, 8.83),
}

#: Which strategy synthesizes the reject branch of each fallback scheme.
FALLBACK_BRANCH = {"fallback": "diagonal", "mixed_fallback": "mixed_diagonal"}


def _strategy(s: Union[str, SynthesisStrategy]) -> SynthesisStrategy:
    if isinstance(s, SynthesisStrategy):
        return s
    try:
        return STRATEGIES[s]
    except KeyError:
        raise InvalidParameterError(
            f"unknown strategy {s!r}; choose from {sorted(STRATEGIES)}"
        ) from None


def t_count(strategy: Union[str, SynthesisStrategy], epsilon_synth: float,
            mode: str = "worst") -> float:
    """Expected T-count of one rotation at the given synthesis accuracy."""
    if not 0.0 < epsilon_synth < 1.0:
        raise InvalidParameterError(f"epsilon_synth={epsilon_synth} must lie in (0, 1)")
    c1, c2 = _strategy(strategy).coefficients(mode)
    return c1 * math.log2(1.0 / epsilon_synth) + c2


@dataclass(frozen=True)
class SynthesisPlan:
    """Resolved per-rotation counts for one layer of L^2 parallel syntheses.

    With ``rounding="none"`` the identity n_t = n_t_success +
    (1 - p_succ) * n_t_fallback holds exactly; ``rounding="integer"`` snaps
    n_t, n_t_fallback, and n_t_success to whole T gates, the form used when
    reproducing headline figures.
    """

    epsilon_synth: float
    n_t: float
    n_t_fallback: float
    n_t_success: float
    p_succ: float
    p_all: float
    ptilde_fail: float
    ptilde_succ: float
    lattice_l: int


def fallback_plan(
    epsilon_synth: float,
    p_succ: float,
    lattice_l: int,
    strategy: Union[str, SynthesisStrategy] = "mixed_fallback",
    mode: str = "worst",
    rounding: str = "none",
) -> SynthesisPlan:
    """Build the synchronization-aware plan for a fallback synthesis layer."""
    if not 0.0 < p_succ <= 1.0:
        raise InvalidParameterError(f"p_succ={p_succ} must lie in (0, 1]")
    if lattice_l < 1:
        raise InvalidParameterError("lattice_l must be >= 1")
    strategy = _strategy(strategy)
    if strategy.name not in FALLBACK_BRANCH:
        raise InvalidParameterError(f"{strategy.name!r} is not a fallback strategy")
    n_t = t_count(strategy, epsilon_synth, mode)
    n_fb = t_count(FALLBACK_BRANCH[strategy.name], epsilon_synth, mode)
    if rounding == "integer":
        n_t, n_fb = float(round(n_t)), float(round(n_fb))
    elif rounding != "none":
        raise InvalidParameterError(f"rounding must be 'none' or 'integer', got {rounding!r}")
    p_fail = 1.0 - p_succ
    # accept-branch T-count; clamped at zero where the model breaks down
    # (very low p_succ makes the decomposition unphysical)
    n_succ = max(n_t - p_fail * n_fb, 0.0)
    if rounding == "integer":
        n_succ = float(round(n_succ))
    p_all = p_succ ** (lattice_l**2)
    if p_all < 1.0:
        ptilde_fail = p_fail / (1.0 - p_all)
    else:
        ptilde_fail = 0.0
    return SynthesisPlan(
        epsilon_synth=epsilon_synth,
        n_t=n_t,
        n_t_fallback=n_fb,
        n_t_success=n_succ,
        p_succ=p_succ,
        p_all=p_all,
        ptilde_fail=ptilde_fail,
        ptilde_succ=1.0 - ptilde_fail,
        lattice_l=lattice_l,
    )


def direct_plan(
    epsilon_synth: float,
    strategy: Union[str, SynthesisStrategy] = "mixed_diagonal",
    mode: str = "worst",
    rounding: str = "none",
) -> SynthesisPlan:
    """Plan for a direct (no-fallback) synthesis layer."""
    n_t = t_count(strategy, epsilon_synth, mode)
    if rounding == "integer":
        n_t = float(round(n_t))
    return SynthesisPlan(
        epsilon_synth=epsilon_synth,
        n_t=n_t,
        n_t_fallback=0.0,
        n_t_success=n_t,
        p_succ=1.0,
        p_all=1.0,
        ptilde_fail=0.0,
        ptilde_succ=1.0,
        lattice_l=1,
    )


@dataclass(frozen=True)
class RotationCost:
    """Fault-tolerant cost of one synthesized Z-rotation."""

    t_states: float
    logical_timesteps: float
    active_cubes: float
    transversal_cnots: float = 0.0

    def __post_init__(self):
        if min(self.t_states, self.logical_timesteps,
               self.active_cubes, self.transversal_cnots) < 0:
            raise InvalidParameterError("rotation cost entries must be nonnegative")


def synthesis_cost(plan: SynthesisPlan, strategy_kind: str, tau_ratio: float) -> RotationCost:
    """Per-rotation ledger from the fault-tolerant synthesis cost table.

    ``tau_ratio`` is the reaction time in units of the logical cycle.
    """
    if tau_ratio < 0:
        raise InvalidParameterError("tau_ratio must be nonnegative")
    tau = tau_ratio
    if strategy_kind == "direct":
        timesteps = plan.n_t * (1.0 + tau) + 3.0
        cubes = plan.n_t * (_DIRECT_CUBE_SLOPE + 3.0 * tau) + 23.0
    elif strategy_kind == "fallback":
        miss = 1.0 - plan.p_all
        timesteps = (plan.n_t_success * (1.0 + tau) + 7.0
                     + miss * (plan.n_t_fallback * (1.0 + tau) + 3.0))
        cubes = (plan.n_t_success * (_FALLBACK_CUBE_SLOPE + 4.0 * tau) + 48.0
                 + miss * plan.ptilde_fail
                 * (plan.n_t_fallback * (_DIRECT_CUBE_SLOPE + 3.0 * tau) + 23.0)
                 + miss * plan.ptilde_succ
                 * (plan.n_t_fallback * (3.0 + 3.0 * tau) + 9.0))
    else:
        raise InvalidParameterError(
            f"strategy_kind must be 'direct' or 'fallback', got {strategy_kind!r}"
        )
    return RotationCost(
        t_states=plan.n_t,
        logical_timesteps=timesteps,
        active_cubes=cubes,
        transversal_cnots=0.0,
    )


def max_t_injection_rate(tau_ratio: float) -> float:
    """Upper bound on T states consumed per logical timestep per rotation."""
    return 1.0 / (1.0 + tau_ratio)


def crossover_L(
    epsilon_policy: Callable[[int], float],
    p_succ: float,
    tau_ratio: float,
    mode: str = "worst",
    rounding: str = "integer",
    l_max: int = 64,
) -> Optional[int]:
    """Smallest lattice size where direct synthesis beats the fallback layer.

    Compares mixed-diagonal direct timesteps against mixed-fallback layer
    timesteps at each L; returns None when the fallback never loses up to
    ``l_max``.
    """
    for lattice_l in range(1, l_max + 1):
        eps = epsilon_policy(lattice_l)
        plan = fallback_plan(eps, p_succ, lattice_l, rounding=rounding, mode=mode)
        fb = synthesis_cost(plan, "fallback", tau_ratio).logical_timesteps
        direct = synthesis_cost(
            direct_plan(eps, "mixed_diagonal", mode=mode, rounding=rounding),
            "direct", tau_ratio,
        ).logical_timesteps
        if direct <= fb:
            return lattice_l
    return None
