"""Acceptance suite: one test per exit criterion, at its stated tolerance.

Each test prints a one-line PASS summary with the measured margins (run with
-s to see them on success). Expensive pipelines are shared via module-scoped
fixtures; the timed criteria measure their own full pipeline runs.
"""

import math
import time

import numpy as np
import pytest

import semiquant as sq
from semiquant.harness import RunConfig, compare
from semiquant.model import (
    EBK_3D,
    INTEGER_POLICY,
    Centrifugal,
    Potential,
    QuantumNumbers,
    effective_potential_minimum,
)
from semiquant.spectral import RadialGrid, eigen_fd, radial_solution

from _tables import LOG_TABLE, YUKAWA_100_BOUND_COUNTS, YUKAWA_100_TABLE

COULOMB = Potential.coulomb()
LOGP = Potential.logarithmic()
YUK100 = Potential.yukawa(100.0)


def _report(name: str, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: PASS  [{detail}]")


@pytest.fixture(scope="module")
def log_compare():
    t0 = time.perf_counter()
    result = compare(RunConfig(potential="log", n_max=6))
    return result, time.perf_counter() - t0


@pytest.fixture(scope="module")
def yukawa_compare():
    t0 = time.perf_counter()
    result = compare(RunConfig(potential="yukawa", lam=100.0, n_max=6))
    return result, time.perf_counter() - t0


@pytest.fixture(scope="module")
def yukawa_all_bound():
    return sq.exact_spectrum(YUK100, all_bound=True)


@pytest.fixture(scope="module")
def log_exact_10():
    return sq.exact_spectrum(LOGP, n_max=10)


@pytest.fixture(scope="module")
def coulomb_exact_6():
    return sq.exact_spectrum(COULOMB, n_max=6)


def test_criterion_1_hydrogen_oq_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 11):
        for ntheta in range(0, n + 1):
            qn = QuantumNumbers.integer(n - ntheta, ntheta)
            e = sq.oq_energy(COULOMB, qn, INTEGER_POLICY)
            reported = 2.0 * e  # Rydberg units
            worst = max(worst, abs(reported + 1.0 / n**2))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-8
    assert elapsed < 1.0
    _report("1 hydrogen exactness", f"worst |dE| = {worst:.2e} E_R, {elapsed:.2f} s")


def test_criterion_2_log_table(log_compare):
    result, elapsed = log_compare
    assert len(result.rows) == 21
    worst_schr = worst_oq = worst_disc = 0.0
    for row in result.rows:
        ref_schr, ref_oq, ref_disc = LOG_TABLE[(row.n, row.ell)]
        worst_schr = max(worst_schr, abs(row.e_schr.value - ref_schr))
        worst_oq = max(worst_oq, abs(row.e_oq_shifted.value - ref_oq))
        worst_disc = max(worst_disc, abs(row.discrepancy - ref_disc))
    assert worst_schr <= 5e-5
    assert worst_oq <= 5e-6
    assert worst_disc <= 1e-4
    assert elapsed < 60.0
    _report(
        "2 log table",
        f"schr {worst_schr:.1e}, oq {worst_oq:.1e}, disc {worst_disc:.1e}, {elapsed:.1f} s",
    )


def test_criterion_3_yukawa_table(yukawa_compare):
    result, elapsed = yukawa_compare
    assert len(result.rows) == 21
    worst_schr = worst_oq = 0.0
    for row in result.rows:
        ref_schr, ref_oq, ref_disc = YUKAWA_100_TABLE[(row.n, row.ell)]
        worst_schr = max(worst_schr, abs(row.e_schr.value - ref_schr))
        worst_oq = max(worst_oq, abs(row.e_oq_shifted.value - ref_oq))
        # discrepancy: sign and magnitude to one significant figure
        assert row.e_oq_shifted.value - row.e_schr.value > 0.0  # table signs all positive
        lead = 10.0 ** math.floor(math.log10(ref_disc))
        assert abs(row.discrepancy - ref_disc) <= 0.5 * lead
    assert worst_schr <= 1e-5
    assert worst_oq <= 1e-5
    assert elapsed < 120.0
    _report(
        "3 yukawa table",
        f"schr {worst_schr:.1e}, oq {worst_oq:.1e} E_R, {elapsed:.1f} s",
    )


def test_criterion_4_log_analytic_limits():
    worst_circ = worst_rad = 0.0
    for n in range(1, 11):
        circ = sq.circular_energy(LOGP, float(n))
        worst_circ = max(worst_circ, abs(circ - (0.5 + math.log(n))))
        rad = sq.radial_motion_energy(LOGP, float(n))
        worst_rad = max(worst_rad, abs(rad - math.log(n * math.sqrt(2.0 * math.pi))))
    assert worst_circ <= 1e-9
    assert worst_rad <= 1e-9
    assert round(sq.log_spread(), 4) == 0.4189
    _report(
        "4 log analytic limits",
        f"circular {worst_circ:.1e}, radial {worst_rad:.1e}, spread {sq.log_spread():.4f}",
    )


def test_criterion_5_critical_values():
    crit = sq.yukawa_criticals(100.0)
    assert crit.nu_star == pytest.approx(8.5776, abs=1e-4)
    assert crit.nr_star == pytest.approx(11.2838, abs=1e-4)
    worst_min = 0.0
    for lam in (1.0, 10.0, 100.0):
        pot = Potential.yukawa(lam)
        c = sq.yukawa_criticals(lam)
        _, u_min = effective_potential_minimum(pot, Centrifugal.classical(c.nu_star))
        worst_min = max(worst_min, abs(u_min))
        assert effective_potential_minimum(
            pot, Centrifugal.classical(c.nu_star_star - 1e-6)
        ) is not None
        assert effective_potential_minimum(
            pot, Centrifugal.classical(c.nu_star_star + 1e-6)
        ) is None
    assert worst_min <= 1e-9
    _report(
        "5 critical values",
        f"nu*={crit.nu_star:.5f}, nr*={crit.nr_star:.5f}, worst |u_min(nu*)| = {worst_min:.1e}",
    )


def test_criterion_6_bracketing(log_exact_10, yukawa_all_bound):
    checked = vacuous = 0
    for entry in log_exact_10:
        e = entry.energy.to_natural()
        lo = sq.circular_energy(LOGP, float(entry.n))
        hi = sq.radial_motion_energy(LOGP, float(entry.n))
        assert lo <= e <= hi, f"log ({entry.n},{entry.ell})"
        checked += 1
    for entry in yukawa_all_bound:
        # screening inverts the ordering: radial is the floor, circular the cap
        e = entry.energy.to_natural()
        circ = sq.circular_energy(YUK100, float(entry.n))
        rad = sq.radial_motion_energy(YUK100, float(entry.n))
        if rad is not None:
            assert rad <= e, f"yukawa ({entry.n},{entry.ell}) below radial limit"
        if circ is not None:
            assert e <= circ, f"yukawa ({entry.n},{entry.ell}) above circular limit"
        if circ is None or rad is None:
            vacuous += 1
        checked += 1
    _report(
        "6 bracketing",
        f"{checked} states between their circular/radial limits ({vacuous} one-sided)",
    )


def test_criterion_7_state_counting(coulomb_exact_6, log_compare):
    for n in range(1, 7):
        assert len(INTEGER_POLICY.level_states(n)) == n + 1
        assert len(EBK_3D.level_states(n)) == n
    # one-to-one (n, l) correspondence between shifted OQ and exact states
    log_exact = log_compare[0].exact_entries
    for pot, exact in ((COULOMB, coulomb_exact_6), (LOGP, log_exact)):
        oq = sq.oq_spectrum(pot, EBK_3D, n_max=6)
        oq_keys = {(e.key.n, e.key.ell) for e in oq.entries}
        exact_keys = {(e.n, e.ell) for e in exact}
        assert oq_keys == exact_keys
        assert len(oq_keys) == 21
    _report("7 state counting", "n+1 integer / n shifted per level; 21 matched keys each")


def test_criterion_8_solver_cross_validation(log_compare, yukawa_compare):
    residuals = [
        e.cross_check
        for e in log_compare[0].exact_entries + yukawa_compare[0].exact_entries
    ]
    assert all(r is not None and r <= 1e-5 for r in residuals)

    # FD order of convergence on hydrogen 1s: reference from the finer pair
    grids = [RadialGrid(1e-6, 40.0, p) for p in (5_001, 10_001, 20_001)]
    e_h, e_h2, e_h4 = (
        float(eigen_fd(COULOMB, 0, 3, g, 1, richardson=False)[0]) for g in grids
    )
    reference = (4.0 * e_h4 - e_h2) / 3.0
    ratio = (e_h - reference) / (e_h2 - reference)
    assert 3.5 <= ratio <= 4.5
    _report(
        "8 solver cross-validation",
        f"max residual {max(residuals):.1e}, FD halving ratio {ratio:.2f}",
    )


def test_criterion_9_properties(log_compare, yukawa_compare, coulomb_exact_6):
    # action monotonicity in E (up) and kappa (down), 100 random samples each
    rng = np.random.default_rng(2024)
    for pot, kap_hi, e_cap in ((COULOMB, 4.0, -1e-4), (LOGP, 4.0, None), (YUK100, 6.0, -1e-4)):
        for _ in range(100):
            kappa = rng.uniform(0.2, kap_hi)
            dk = rng.uniform(0.05, 0.3)
            _, u_min = effective_potential_minimum(pot, Centrifugal.classical(kappa + dk))
            cap = u_min + 4.0 if e_cap is None else e_cap
            energy = u_min + rng.uniform(0.05, 0.9) * (cap - u_min)
            de = 0.1 * (cap - energy)
            j = sq.radial_action(pot, kappa, energy)
            assert sq.radial_action(pot, kappa, energy + de) > j
            assert sq.radial_action(pot, kappa + dk, energy) < j

    # node-count correctness for every computed eigenstate
    cases = [(LOGP, e) for e in log_compare[0].exact_entries]
    cases += [(YUK100, e) for e in yukawa_compare[0].exact_entries]
    cases += [(COULOMB, e) for e in coulomb_exact_6]
    for pot, entry in cases:
        e_nat = entry.energy.to_natural()
        turn = sq.turning_points(pot, 0.0, e_nat).rho_plus
        grid = RadialGrid(1e-6, 1.2 * turn, 40_001)
        sol = radial_solution(pot, Centrifugal.quantum(entry.ell, 3), e_nat, grid)
        inside = sol.u[grid.nodes() <= turn]
        crossings = int(np.sum(inside[:-1] * inside[1:] < 0.0))
        assert crossings == entry.n - entry.ell - 1, f"{pot.kind} ({entry.n},{entry.ell})"

    # quadrature panel-doubling stability at production settings
    worst = 0.0
    for pot, kappa, energy in (
        (COULOMB, 1.0, -0.125),
        (LOGP, 0.0, 0.9189),
        (LOGP, 2.0, 2.0),
        (YUK100, 3.5, -0.01),
        (YUK100, 0.0, -0.002),
    ):
        j1 = sq.radial_action(pot, kappa, energy, panels=2048)
        j2 = sq.radial_action(pot, kappa, energy, panels=4096)
        worst = max(worst, abs(j1 - j2))
    assert worst <= 1e-10
    _report(
        "9 property suite",
        f"300 monotonicity samples, {len(cases)} node checks, doubling {worst:.1e}",
    )


def test_yukawa_bound_state_counts(yukawa_all_bound):
    # golden per-level counts; identical for quantized and exact enumeration
    exact_counts = {}
    for e in yukawa_all_bound:
        exact_counts[e.n] = exact_counts.get(e.n, 0) + 1
    assert exact_counts == YUKAWA_100_BOUND_COUNTS
    oq = sq.oq_spectrum(YUK100, EBK_3D, all_bound=True)
    oq_counts = {}
    for e in oq.entries:
        oq_counts[e.key.n] = oq_counts.get(e.key.n, 0) + 1
    assert oq_counts == YUKAWA_100_BOUND_COUNTS
    for n in range(1, 9):
        assert oq_counts[n] == n
    _report("counts (golden)", f"{sum(exact_counts.values())} bound states, levels 1..11")
