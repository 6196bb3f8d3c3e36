"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import math

import numpy as np
import pytest

from ftcost import (
    AttemptCaps,
    ProblemSpec,
    allocate_budget,
    corridor_capacity_check,
    crossover_L,
    cycle_outcome_distribution,
    derive_noise_params,
    fit_error_curve,
    heralded_cz_distribution,
    heralded_mzz_distribution,
    load_error_data,
    logical_cycle_time,
    mc_rus_oracle,
    patch_geometry,
    select_distance,
    solve_estimate,
    trotter_steps,
)
from ftcost.noise import binomial_sigma
from ftcost.pipeline import SolveOptions
from ftcost.plaquette import (
    check_clifford_relations,
    check_majorana_relations,
    mutated_map,
    verify_plaquette_evolution,
)
from ftcost.surgery import extrapolate_error, load_msf_table
from ftcost.synthesis import direct_plan, fallback_plan, synthesis_cost
from ftcost.trotter import RotationCost, golden_diag_cubes, trotter_step_cost

PARAMS = derive_noise_params(0.01)
CAPS = AttemptCaps(n_rus=10)
SPEC = ProblemSpec(8, 8.0, 80.0, 2)
BUDGET = allocate_budget(0.01)


@pytest.fixture(scope="module")
def reference_fit():
    return fit_error_curve(load_error_data())


@pytest.fixture(scope="module")
def report():
    return solve_estimate(SPEC, PARAMS, BUDGET)


def _ok(n, message):
    print(f"ACCEPTANCE {n}: PASS  {message}")


def test_criterion_01_noise_closed_forms_vs_oracle():
    trials = 1_000_000
    cyc = cycle_outcome_distribution(PARAMS.epsilon, PARAMS.distinguishability)
    for kind, closed in (
        ("cz", heralded_cz_distribution(PARAMS, CAPS)),
        ("mzz", heralded_mzz_distribution(PARAMS, CAPS)),
    ):
        assert closed.total() == pytest.approx(1.0, abs=1e-12)
        empirical = mc_rus_oracle(cyc, CAPS, trials, seed=20260810, kind=kind)
        for outcome in closed.outcomes:
            sigma = binomial_sigma(outcome.probability, trials)
            dev = abs(empirical.probability(outcome.label) - outcome.probability)
            assert dev <= 5 * sigma + 1e-15, (kind, outcome.label)
    _ok(1, "CZ and MZZ distributions sum to 1; 1e6-trial oracle within 5 sigma per category")


def test_criterion_02_noiseless_limits():
    zero = derive_noise_params(0.0)
    for n in (1, 5, 10, 17):
        caps = AttemptCaps(n_rus=n)
        cz = heralded_cz_distribution(zero, caps)
        mzz = heralded_mzz_distribution(zero, caps)
        assert cz.probability("pure_success") == pytest.approx(1 - 2.0**-n, abs=1e-15)
        assert cz.probability("abort") == pytest.approx(2.0**-n, abs=1e-15)
        assert mzz.probability("pure_success") == pytest.approx(1 - 2.0**-n, abs=1e-15)
        assert mzz.probability("abort") == pytest.approx(2.0**-n, abs=1e-15)
    _ok(2, "noiseless limits give p0 = 1 - 2^-N and pa = 2^-N exactly")


def test_criterion_03_geometry_table_and_cycle_time():
    table = [
        (6, 9, 18, 54), (8, 12, 24, 96), (10, 18, 36, 180), (12, 21, 42, 252),
        (14, 24, 48, 336), (16, 27, 54, 432), (18, 30, 60, 540), (20, 33, 66, 660),
        (22, 36, 72, 792), (24, 39, 78, 936), (26, 42, 84, 1092), (28, 48, 96, 1344),
        (30, 51, 102, 1530),
    ]
    for w, h, rounds, qubits in table:
        geo = patch_geometry(w)
        assert (geo.width, geo.height, geo.rounds, geo.qubits) == (w, h, rounds, qubits)
    assert logical_cycle_time(36) == pytest.approx(11.0e3, abs=0.1e3)
    _ok(3, "all 13 ladder rows verbatim; logical cycle at 36 rounds = 11.0 us +/- 0.1")


def test_criterion_04_fit_and_distance_selection(reference_fit):
    e30 = extrapolate_error(reference_fit, 30)
    assert 9.25e-15 / 3 <= e30 <= 9.25e-15 * 3
    assert select_distance(reference_fit, 3.58e-14).width == 30
    _ok(4, f"extrapolated E(w=30) = {e30:.3e} within 3x of 9.25e-15; "
           "select_distance(3.58e-14) = w30")


def test_criterion_05_msf_table_reproduction():
    printed = {
        "15to1_17_7_7": (480, 35.7),
        "15to1x6_13_5_5-20to4_23_11_13": (4500, 109),
        "15to1x4_13_5_5-20to4_27_13_15": (4870, 132),
        "15to1x6_11_5_5-15to1_25_11_11": (3190, 69.3),
        "15to1x6_13_5_5-15to1_29_11_13": (4070, 81.9),
        "15to1x6_17_7_7-15to1_41_17_17": (7630, 108),
    }
    for proto in load_msf_table():
        q, r = printed[proto.label]
        ulp_q = 10.0 ** (math.floor(math.log10(q)) - 2)
        ulp_r = 10.0 ** (math.floor(math.log10(r)) - 2)
        assert abs(proto.hh_qubits - q) <= ulp_q, proto.label
        assert abs(proto.hh_rounds - r) <= ulp_r, proto.label
    _ok(5, "all six honeycomb factory columns reproduced to 3 significant figures")


def test_criterion_06_trotter_count():
    eps_alg = 0.005 / 2.01
    r8 = trotter_steps(SPEC, eps_alg)
    assert r8 == pytest.approx(4.88e5, rel=1e-2)
    for l in (4, 8, 16):
        spec = ProblemSpec(l, 8.0, 10.0 * l, 2)
        coeff = trotter_steps(spec, eps_alg) / l**2.5
        assert coeff == pytest.approx(2695, rel=1e-2)
    _ok(6, f"r(L=8) = {r8} within 1% of 4.88e5; r/L^(5/2) within 1% of 2695")


def test_criterion_07_synthesis(report):
    eps = report.eps_synth
    assert eps == pytest.approx(2e-13, rel=0.05)
    plan = fallback_plan(eps, 0.99, 8, rounding="integer")
    assert plan.n_t == 33 and plan.n_t_fallback == 72
    tau = 33 / 102
    fb = synthesis_cost(plan, "fallback", tau)
    assert abs(fb.logical_timesteps - 96) <= 1
    assert abs(fb.active_cubes - 434) <= 1
    direct = synthesis_cost(direct_plan(eps, "mixed_diagonal", rounding="integer"),
                            "direct", tau)
    assert abs(direct.logical_timesteps - 98) <= 1
    assert crossover_L(lambda l: eps, 0.99, tau) == 9
    _ok(7, "n_T = 33, n_fb = 72; fallback 96 and direct 98 timesteps; 434 cubes; "
           "crossover at L = 9")


def test_criterion_08_step_ledger():
    rotation = RotationCost(t_states=33, logical_timesteps=96, active_cubes=434)
    step = trotter_step_cost(SPEC, rotation)
    assert step.logical_timesteps == 474
    assert step.t_states == 9216
    assert step.active_cubes == pytest.approx(1.43e5, rel=1e-2)
    assert 2 * (205 * 32) == 13120              # pink diagonalization, both halves
    assert golden_diag_cubes(8, 2) == 19196     # golden diagonalization
    assert 4 * 64 * 434 == 111104               # rotations
    assert step.active_cubes == 111104 + 13120 + 19196
    _ok(8, "step ledger: 474 timesteps, 9216 T states, cubes 143420 "
           "(111104 + 13120 + 19196)")


def test_criterion_09_pipeline_headline(report):
    assert report.n_l_total == pytest.approx(6.99e10, rel=2e-2)
    assert report.p_l_target == pytest.approx(3.58e-14, rel=5e-2)
    geo = report.geometry
    assert (geo.width, geo.height, geo.rounds) == (30, 51, 102)
    assert report.n_t_total == pytest.approx(4.50e9, rel=1e-2)
    assert report.p_msf_target == pytest.approx(5.56e-13, rel=2e-2)
    assert report.msf_factories == 39
    assert report.physical_qubits == pytest.approx(1.35e6, rel=1e-2)
    assert report.runtime_seconds == pytest.approx(7.2e3, rel=5e-2)
    single_ts, single_rt = report.single_plane_comparison()
    assert single_ts == 930
    assert single_rt == pytest.approx(3 * 3600 + 55 * 60, rel=2e-2)
    _ok(9, f"headline: N_L = {report.n_l_total:.3g}, geometry (30,51,102), "
           f"N_T = {report.n_t_total:.3g}, 39 factories, "
           f"{report.physical_qubits:,} qubits, {report.runtime_seconds:.0f} s; "
           "single-plane 930 timesteps / 3 h 55 min")


def test_criterion_10_fixed_point(report):
    again = solve_estimate(SPEC, PARAMS, BUDGET,
                           SolveOptions(initial_rounds=report.geometry.rounds))
    assert again == report
    assert again.iterations == 1
    _ok(10, "re-solving from the converged geometry reproduces every field in 1 iteration")


def test_criterion_11_plaquette_verifier():
    relations = check_majorana_relations()
    assert all(relations.values()), [k for k, ok in relations.items() if not ok]
    clifford = check_clifford_relations()
    assert all(v <= 1e-12 for v in clifford.values()), clifford
    rng = np.random.default_rng(20260810)
    devs = [verify_plaquette_evolution(1.0, float(t))
            for t in rng.uniform(0.0, math.pi, 20)]
    assert max(devs) <= 1e-10
    broken = check_majorana_relations(mutated_map("E21", 0))
    assert not all(broken.values())
    _ok(11, f"all operator relations hold; Clifford identities <= 1e-12; "
            f"evolution identity worst deviation {max(devs):.2e} over 20 angles; "
            "single-letter mutation detected")


def test_criterion_12_corridor_capacity(report):
    ratio = corridor_capacity_check(report.floorplan, report.geometry,
                                    report.msf_qubits_required)
    assert ratio == pytest.approx(3.2, abs=0.2)
    _ok(12, f"factory corridor capacity ratio = {ratio:.2f} (target 3.2 +/- 0.2)")
