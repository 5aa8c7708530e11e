"""Action quantization engine.

Turning points, the radial action integral with turning-point singularity
removal, energy solves for given quantum numbers, the circular and radial
special cases, closed-form spectra where they exist, the screened-potential
critical values, and full spectrum enumeration.

The radial action is

    J(E; kappa) = 2 * integral from rho- to rho+ of sqrt(2 (E - U_eff(rho)))

with U_eff = kappa^2/(2 rho^2) + V(rho). Quantization sets J = 2*pi*nr with
kappa = ntheta; J itself carries no shift. J increases strictly with E and
decreases strictly with kappa, so each energy solve is a single bracketed
bisection.

Two substitutions keep the quadrature spectrally accurate:

* kappa > 0:  rho = rbar - delta*cos(phi) over phi in [0, pi] (rbar the
  midpoint, delta the half-width), which makes the integrand vanish smoothly
  at both turning points.
* kappa = 0:  rho = rho+ * exp(-s^2) over s in [0, 8.5], which handles the
  inner endpoint at the origin, where the Coulomb-like integrand tends to a
  finite nonzero limit and the log integrand has a root-log derivative
  singularity that defeats the cosine form.

Unbound outcomes (screened potential only) are reported as None, not raised:
state disappearance is physics, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import (
    COULOMB,
    LOG,
    YUKAWA,
    Centrifugal,
    Potential,
    QuantumNumbers,
    ReportedEnergy,
    ShiftPolicy,
    SpectrumKey,
    effective_potential_minimum,
    yukawa_stationarity,
    GOLDEN_RATIO,
)
from .numerics import Bracket, Tolerance, bisect, expand_bracket

DEFAULT_PANELS = 2048
ENERGY_TOL = Tolerance(abs_x=1e-12, max_iter=200)
_GAUSS_SPAN = 8.5  # exp(-s^2) substitution span; tail below 1e-12 of the integral


class NoClassicalRegionError(ValueError):
    """No classically allowed radial interval exists for the requested inputs."""


@dataclass(frozen=True)
class TurningPoints:
    rho_minus: float
    rho_plus: float
    degenerate: bool = False


@dataclass(frozen=True)
class YukawaCriticals:
    """Angular-momentum and radial critical numbers of the screened potential.

    nu_star: kappa above which the effective-potential minimum turns positive.
    nu_star_star: kappa above which no minimum exists at all.
    nr_star: radial quantum number above which zero-angular-momentum states
    lose negative energy.
    """

    nu_star: float
    nu_star_star: float
    nr_star: float


@dataclass(frozen=True)
class SpectrumEntry:
    key: SpectrumKey
    energy: ReportedEnergy
    method: str  # "oq-integer" | "oq-shifted" | "analytic"
    qn: QuantumNumbers


@dataclass(frozen=True)
class OqSpectrum:
    entries: list[SpectrumEntry]
    skipped_unbound: list[QuantumNumbers]


def _scalar_ueff(pot: Potential, kappa: float, rho: float) -> float:
    return kappa * kappa / (2.0 * rho * rho) + pot.value(rho)


def radial_momentum(pot: Potential, kappa: float, energy: float, rho):
    """p_r(rho) = sqrt(2 (E - U_eff)): the action integrand, clamped at zero.

    Nonnegative on the classically allowed interval and zero at smooth turning
    points. Accepts scalar or array radii.
    """
    rho = np.asarray(rho, dtype=float)
    radicand = 2.0 * (energy - kappa * kappa / (2.0 * rho * rho) - pot.value_array(rho))
    return np.sqrt(np.maximum(radicand, 0.0))


def _bisect_scalar(f, lo: float, hi: float, rtol: float = 1e-14) -> float:
    """Sign bisection for monotone scalar conditions; f(lo) and f(hi) differ."""
    f_lo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == (f_lo > 0.0):
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * max(abs(lo), abs(hi), 1e-300):
            break
    return 0.5 * (lo + hi)


def _yukawa_barrier_radius(pot: Potential, kappa: float) -> float:
    """Outer stationary point of U_eff (the top of the screening barrier)."""
    top = GOLDEN_RATIO * pot.lam
    c = kappa * kappa
    hi = top
    while yukawa_stationarity(pot, hi) >= c:
        hi *= 2.0
    return _bisect_scalar(lambda r: yukawa_stationarity(pot, r) - c, top, hi)


def turning_points(pot: Potential, kappa: float, energy: float) -> TurningPoints:
    """Radii where E = U_eff, bracketed on either side of the minimum.

    For kappa = 0 the inner point is the origin and only the outer root is
    solved. Degenerate (circular) orbits are flagged when E sits at the
    minimum within tolerance.
    """
    if kappa < 0.0:
        raise ValueError("kappa must be nonnegative")

    if kappa == 0.0:
        if pot.kind != LOG and energy >= 0.0:
            raise NoClassicalRegionError(f"E = {energy} is outside the range of {pot.kind}")
        lo = 1.0
        while pot.value(lo) >= energy:
            lo *= 0.5
        hi = max(1.0, 2.0 * lo)
        while pot.value(hi) <= energy:
            hi *= 2.0
        outer = _bisect_scalar(lambda r: pot.value(r) - energy, lo, hi)
        return TurningPoints(0.0, outer)

    mn = effective_potential_minimum(pot, Centrifugal.classical(kappa))
    if mn is None:
        raise NoClassicalRegionError(
            f"U_eff has no minimum for {pot.kind} at kappa = {kappa}"
        )
    rho_c, u_min = mn
    if energy <= u_min + 1e-13 * max(1.0, abs(u_min)):
        if energy < u_min:
            raise NoClassicalRegionError(f"E = {energy} below the minimum {u_min}")
        return TurningPoints(rho_c, rho_c, degenerate=True)

    if pot.kind == YUKAWA:
        barrier = _yukawa_barrier_radius(pot, kappa)
        if energy >= _scalar_ueff(pot, kappa, barrier):
            raise NoClassicalRegionError(f"E = {energy} is at or above the barrier top")
        outer_hi = barrier
    else:
        outer_hi = rho_c
        while _scalar_ueff(pot, kappa, outer_hi) <= energy:
            outer_hi *= 2.0

    inner_lo = rho_c
    while _scalar_ueff(pot, kappa, inner_lo) <= energy:
        inner_lo *= 0.5

    u = lambda r: _scalar_ueff(pot, kappa, r) - energy
    inner = _bisect_scalar(u, inner_lo, rho_c)
    outer = _bisect_scalar(u, rho_c, outer_hi)
    return TurningPoints(inner, outer)


@lru_cache(maxsize=8)
def _phi_grid(panels: int):
    phi = np.linspace(0.0, math.pi, panels + 1)
    return np.cos(phi), np.sin(phi)


@lru_cache(maxsize=8)
def _gauss_grid(panels: int):
    s = np.linspace(0.0, _GAUSS_SPAN, panels + 1)
    return s, np.exp(-s * s)


def _simpson_samples(y: np.ndarray, h: float) -> float:
    return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())


def radial_action(pot: Potential, kappa: float, energy: float, panels: int = DEFAULT_PANELS) -> float:
    """J = 2 * integral of sqrt(2 (E - U_eff)) between the turning points."""
    if panels < 2 or panels % 2:
        raise ValueError(f"panels must be even and >= 2, got {panels}")
    tp = turning_points(pot, kappa, energy)
    if tp.degenerate:
        return 0.0

    if kappa == 0.0:
        s, decay = _gauss_grid(panels)
        rho = tp.rho_plus * decay
        radicand = 2.0 * (energy - pot.value_array(rho))
        np.maximum(radicand, 0.0, out=radicand)
        y = 4.0 * np.sqrt(radicand) * s * rho
        return _simpson_samples(y, _GAUSS_SPAN / panels)

    cos_phi, sin_phi = _phi_grid(panels)
    rbar = 0.5 * (tp.rho_minus + tp.rho_plus)
    delta = 0.5 * (tp.rho_plus - tp.rho_minus)
    rho = rbar - delta * cos_phi
    c = kappa * kappa
    radicand = 2.0 * (energy - c / (2.0 * rho * rho) - pot.value_array(rho))
    np.maximum(radicand, 0.0, out=radicand)
    y = 2.0 * np.sqrt(radicand) * delta * sin_phi
    return _simpson_samples(y, math.pi / panels)


def circular_energy(pot: Potential, n_theta_eff: float) -> float | None:
    """Energy of the circular orbit at kappa = n_theta_eff: the U_eff minimum.

    None when the screened potential has no minimum there.
    """
    if n_theta_eff <= 0.0:
        raise ValueError("circular orbits need kappa > 0")
    mn = effective_potential_minimum(pot, Centrifugal.classical(n_theta_eff))
    if mn is None:
        return None
    return mn[1]


def _solve_action_energy(
    pot: Potential,
    kappa: float,
    target: float,
    u_min: float | None,
    panels: int,
) -> float | None:
    """E with J(E) = target, or None when no bound solution exists (yukawa)."""
    g = lambda e: radial_action(pot, kappa, e, panels) - target
    eps = 1e-15

    if u_min is not None:
        lo = u_min + max(1e-15, 1e-13 * abs(u_min))
    else:
        # kappa = 0: J -> 0 as E -> -inf for every kind; expand downward
        seed = -1.0 if pot.kind != LOG else 0.0
        while g(seed) >= 0.0:
            seed = seed * 2.0 if seed < 0.0 else -1.0
        lo = seed

    if pot.kind == LOG:
        bracket = expand_bracket(g, lo, direction="up", growth=2.0, limit=1e6, step=1.0)
        return bisect(g, bracket, ENERGY_TOL)

    hi = -eps
    g_hi = g(hi)
    if g_hi < 0.0:
        if pot.kind == YUKAWA:
            return None  # total bound action is finite; target exceeds it
        raise RuntimeError(f"action target {target} not reached below E=0 for {pot.kind}")
    g_lo = g(lo)
    if g_lo >= 0.0:
        # already past the target at the bottom of the well: degenerate match
        return lo
    return bisect(g, Bracket(lo, hi, g_lo, g_hi), ENERGY_TOL)


def radial_motion_energy(pot: Potential, n_r_eff: float, panels: int = DEFAULT_PANELS) -> float | None:
    """Energy of the zero-angular-momentum state with radial action 2*pi*n_r_eff.

    None when the screened potential cannot bind it (n_r_eff above the radial
    critical number).
    """
    if n_r_eff <= 0.0:
        raise ValueError("radial motion needs n_r_eff > 0")
    return _solve_action_energy(pot, 0.0, 2.0 * math.pi * n_r_eff, None, panels)


def oq_energy(
    pot: Potential,
    qn: QuantumNumbers,
    policy: ShiftPolicy,
    panels: int = DEFAULT_PANELS,
) -> float | None:
    """Natural energy of the quantized state qn, or None when unbound.

    The stored quantum numbers enter the conditions directly: kappa = ntheta
    and the radial action target is 2*pi*nr. The policy is the bookkeeping
    contract that produced qn; numbers of the wrong parity are rejected. The
    pure circular case (nr = 0) dispatches to the effective-potential minimum
    instead of a degenerate quadrature.
    """
    if not policy.conforms(qn):
        raise ValueError(f"{qn} does not conform to shift policy {policy}")
    kappa = qn.ntheta
    if qn.twice_nr == 0:
        e = circular_energy(pot, kappa)
        if pot.kind == YUKAWA and (e is None or e >= 0.0):
            return None
        return e
    if kappa == 0.0:
        return radial_motion_energy(pot, qn.nr, panels)
    mn = effective_potential_minimum(pot, Centrifugal.classical(kappa))
    if mn is None:
        return None  # no well at all: only the screened potential gets here
    u_min = mn[1]
    if pot.kind == YUKAWA and u_min >= 0.0:
        return None
    return _solve_action_energy(pot, kappa, 2.0 * math.pi * qn.nr, u_min, panels)


def analytic_energy(pot: Potential, qn: QuantumNumbers, policy: ShiftPolicy) -> float | None:
    """Closed-form natural energy where one exists, else None.

    Coulomb: -1/(2 (nr + ntheta)^2) for every state. Log: the circular
    (nr = 0) and radial (ntheta = 0) families only.
    """
    if not policy.conforms(qn):
        raise ValueError(f"{qn} does not conform to shift policy {policy}")
    if pot.kind == COULOMB:
        return -0.5 / (qn.nr + qn.ntheta) ** 2
    if pot.kind == LOG:
        if qn.twice_nr == 0:
            return 0.5 + math.log(qn.ntheta)
        if qn.twice_ntheta == 0:
            return math.log(qn.nr * math.sqrt(2.0 * math.pi))
    return None


def log_spread() -> float:
    """Constant spread of the log spectrum at fixed n: (ln(2 pi) - 1)/2 beta."""
    return 0.5 * (math.log(2.0 * math.pi) - 1.0)


def yukawa_criticals(lam: float) -> YukawaCriticals:
    """Critical angular-momentum and radial numbers for screening ratio lam.

    nu_star = sqrt(2 lam) e^(-1/2) and nr_star = 2 sqrt(lam/pi) are closed
    forms; nu_star_star = sqrt(lam phi^3 e^(-phi)) with phi the golden ratio
    comes from the stationarity condition x^2 = x + 1 of rho e^(-rho/lam)
    (1 + rho/lam) and is verified against a scan oracle in the test suite.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    nu_star = math.sqrt(2.0 * lam) * math.exp(-0.5)
    nu_star_star = math.sqrt(lam * GOLDEN_RATIO ** 3 * math.exp(-GOLDEN_RATIO))
    nr_star = 2.0 * math.sqrt(lam / math.pi)
    return YukawaCriticals(nu_star=nu_star, nu_star_star=nu_star_star, nr_star=nr_star)


def _method_tag(policy: ShiftPolicy) -> str:
    return "oq-integer" if policy.twice_radial_shift == 0 and policy.twice_angular_shift == 0 \
        else "oq-shifted"


def oq_spectrum(
    pot: Potential,
    policy: ShiftPolicy,
    n_max: int | None = None,
    all_bound: bool = False,
    panels: int = DEFAULT_PANELS,
) -> OqSpectrum:
    """Every admissible quantized state, sorted by (n, descending ell).

    With all_bound (screened potential), levels are enumerated until one is
    empty beyond the radial critical number. Unbound candidates are skipped
    and reported, not raised.
    """
    if n_max is None and not all_bound:
        raise ValueError("need n_max or all_bound")
    if all_bound and pot.kind != YUKAWA:
        raise ValueError(f"{pot.kind} binds infinitely many states; give n_max")

    stop_after = None
    if all_bound and n_max is None:
        stop_after = yukawa_criticals(pot.lam).nr_star + 1.0

    method = _method_tag(policy)
    entries: list[SpectrumEntry] = []
    skipped: list[QuantumNumbers] = []
    n = 1
    while True:
        if n_max is not None and n > n_max:
            break
        level_found = 0
        for qn in policy.level_states(n):
            e = oq_energy(pot, qn, policy, panels)
            if e is None or (pot.kind == YUKAWA and e >= 0.0):
                skipped.append(qn)
                continue
            level_found += 1
            entries.append(
                SpectrumEntry(
                    key=SpectrumKey.from_quantum_numbers(qn, policy),
                    energy=ReportedEnergy.from_natural(pot, e),
                    method=method,
                    qn=qn,
                )
            )
        if n_max is None and level_found == 0 and n > stop_after:
            break
        n += 1
    return OqSpectrum(entries=entries, skipped_unbound=skipped)
