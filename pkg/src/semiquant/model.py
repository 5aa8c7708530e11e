"""Central potentials, natural units, effective potentials, quantum-number bookkeeping.

Natural units hbar = m = 1 throughout. The Coulomb and Yukawa couplings are set
to 1 (Bohr radius a = 1, Rydberg scale E_R = 1/2); the logarithmic potential uses
beta = 1 and r0 = 1. Energies convert to reported units only at output: Rydbergs
for coulomb/yukawa (natural value times 2), beta units for log (unchanged).

Everything here is an immutable value or a pure function; concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

COULOMB = "coulomb"
LOG = "log"
YUKAWA = "yukawa"
KINDS = (COULOMB, LOG, YUKAWA)

RYDBERG_NATURAL = 0.5  # E_R = m C^2 / (2 hbar^2) with m = C = hbar = 1

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class Potential:
    """A central potential in natural units.

    kind is one of "coulomb", "log", "yukawa". Only yukawa carries a parameter:
    lam is the screening range over the Bohr radius, and must be positive.
    """

    kind: str
    lam: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == YUKAWA:
            if self.lam is None or not math.isfinite(self.lam) or self.lam <= 0.0:
                raise ValueError("yukawa potential requires finite lam > 0")
        elif self.lam is not None:
            raise ValueError(f"{self.kind} potential carries no parameter")

    @classmethod
    def coulomb(cls) -> "Potential":
        return cls(COULOMB)

    @classmethod
    def logarithmic(cls) -> "Potential":
        return cls(LOG)

    @classmethod
    def yukawa(cls, lam: float) -> "Potential":
        return cls(YUKAWA, lam)

    def value(self, rho: float) -> float:
        """V(rho) for a scalar radius (no domain check; see potential_value)."""
        if self.kind == COULOMB:
            return -1.0 / rho
        if self.kind == LOG:
            return math.log(rho)
        return -math.exp(-rho / self.lam) / rho

    def value_array(self, rho: np.ndarray) -> np.ndarray:
        """Vectorized V on an array of radii."""
        if self.kind == COULOMB:
            return -1.0 / rho
        if self.kind == LOG:
            return np.log(rho)
        return -np.exp(-rho / self.lam) / rho

    def derivative(self, rho: float) -> float:
        """dV/drho in closed form (all three kinds are strictly increasing)."""
        if self.kind == COULOMB:
            return 1.0 / (rho * rho)
        if self.kind == LOG:
            return 1.0 / rho
        return math.exp(-rho / self.lam) * (1.0 / (rho * rho) + 1.0 / (self.lam * rho))

    @property
    def reported_units(self) -> str:
        return "beta" if self.kind == LOG else "E_R"


@dataclass(frozen=True)
class Centrifugal:
    """Radial barrier coefficient c, entering U_eff as c / (2 rho^2).

    Classical motion uses c = kappa^2 with kappa = p_theta / hbar. The quantum
    radial equation in D dimensions uses c = (l + (D-3)/2)(l + (D-1)/2), which
    reduces to l(l+1) at D = 3.
    """

    coefficient: float
    kappa: float | None = None
    ell: int | None = None
    dim: int = 3

    @classmethod
    def classical(cls, kappa: float) -> "Centrifugal":
        if kappa < 0.0:
            raise ValueError("kappa must be nonnegative")
        return cls(coefficient=kappa * kappa, kappa=kappa)

    @classmethod
    def quantum(cls, ell: int, dim: int = 3) -> "Centrifugal":
        if ell < 0 or ell != int(ell):
            raise ValueError("ell must be a nonnegative integer")
        if dim < 2:
            raise ValueError("dim must be >= 2")
        c = (ell + (dim - 3) / 2.0) * (ell + (dim - 1) / 2.0)
        return cls(coefficient=c, ell=int(ell), dim=dim)


def potential_value(pot: Potential, rho: float) -> float:
    """V(rho), raising on nonpositive radius."""
    if rho <= 0.0:
        raise ValueError(f"radius must be positive, got {rho}")
    return pot.value(rho)


def effective_potential(pot: Potential, cf: Centrifugal, rho: float) -> float:
    """U_eff(rho) = c/(2 rho^2) + V(rho)."""
    if rho <= 0.0:
        raise ValueError(f"radius must be positive, got {rho}")
    return cf.coefficient / (2.0 * rho * rho) + pot.value(rho)


def effective_potential_array(pot: Potential, cf: Centrifugal, rho: np.ndarray) -> np.ndarray:
    return cf.coefficient / (2.0 * rho * rho) + pot.value_array(rho)


def yukawa_stationarity(pot: Potential, rho: float) -> float:
    """rho * exp(-rho/lam) * (1 + rho/lam): U_eff'(rho) = 0 iff this equals c.

    Increases from 0 to its global maximum lam * phi^3 * exp(-phi) at
    rho = phi * lam (phi the golden ratio), then decays; so a minimum exists
    exactly when c does not exceed that maximum.
    """
    x = rho / pot.lam
    return rho * math.exp(-x) * (1.0 + x)


def effective_potential_minimum(pot: Potential, cf: Centrifugal) -> tuple[float, float] | None:
    """Locate the interior minimum of U_eff, or None when there is none.

    Uses sign bisection on the closed-form U_eff'. For the Yukawa potential the
    stationarity condition is bracketed against its global maximum at
    rho = phi*lam, so the no-minimum classification is exact up to float error.
    Returns (rho_c, u_min).
    """
    c = cf.coefficient
    if c <= 0.0:
        return None  # pure attraction: U_eff is monotone for these potentials

    if pot.kind == YUKAWA:
        top = GOLDEN_RATIO * pot.lam
        if yukawa_stationarity(pot, top) < c:
            return None
        lo = top
        while yukawa_stationarity(pot, lo) >= c:
            lo *= 0.5
        hi = top
        # stationarity is strictly increasing on (0, top)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if yukawa_stationarity(pot, mid) < c:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        rho_c = 0.5 * (lo + hi)
        return rho_c, effective_potential(pot, cf, rho_c)

    def slope(r: float) -> float:
        return -c / (r * r * r) + pot.derivative(r)

    lo = 1.0
    while slope(lo) >= 0.0:
        lo *= 0.5
    hi = max(1.0, 2.0 * lo)
    while slope(hi) <= 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    rho_c = 0.5 * (lo + hi)
    return rho_c, effective_potential(pot, cf, rho_c)


@dataclass(frozen=True)
class ReportedEnergy:
    """An energy in the reporting units of its potential family.

    Rydberg units ("E_R") for coulomb/yukawa, where the reported value is the
    natural energy times 2; beta units for the log potential (unchanged). Both
    conversions are exact binary rescales, so round-trips are bit-for-bit.
    """

    value: float
    units: str

    def __post_init__(self):
        if self.units not in ("E_R", "beta"):
            raise ValueError(f"unknown energy units {self.units!r}")

    @classmethod
    def from_natural(cls, pot: Potential, energy: float) -> "ReportedEnergy":
        if pot.kind == LOG:
            return cls(energy, "beta")
        return cls(energy * 2.0, "E_R")

    def to_natural(self) -> float:
        return self.value if self.units == "beta" else self.value * 0.5


@dataclass(frozen=True)
class QuantumNumbers:
    """Exact (possibly half-integer) action quantum numbers.

    Stored as doubled integers so half-integers never touch floating point.
    These are the values as they enter the quantization conditions:
    kappa = ntheta and the radial action target is 2*pi*nr.
    """

    twice_nr: int
    twice_ntheta: int

    def __post_init__(self):
        if self.twice_nr < 0 or self.twice_ntheta < 0:
            raise ValueError("quantum numbers must be nonnegative")
        if self.twice_nr + self.twice_ntheta == 0:
            raise ValueError("nr + ntheta must be positive")

    @classmethod
    def integer(cls, nr: int, ntheta: int) -> "QuantumNumbers":
        return cls(2 * nr, 2 * ntheta)

    @property
    def nr(self) -> float:
        return self.twice_nr / 2.0

    @property
    def ntheta(self) -> float:
        return self.twice_ntheta / 2.0

    @property
    def n(self) -> float:
        return (self.twice_nr + self.twice_ntheta) / 2.0


@dataclass(frozen=True)
class ShiftPolicy:
    """Quantum-number shifts: mu/4 + b/2 radially, (dim-2)/2 angularly.

    mu counts smooth classical turning points, b hard-wall reflections. The
    integer policy has no shifts; the 3-D policy (mu=2, b=0, dim=3) shifts both
    numbers by one half, which removes the pure circular and pure radial states
    and restores the Schrodinger degeneracy structure.
    """

    mu: int
    b: int
    dim: int

    def __post_init__(self):
        if self.mu % 2 != 0:
            raise ValueError("mu must be even for exact half-integer bookkeeping")
        if self.mu < 0 or self.b < 0 or self.dim < 2:
            raise ValueError("invalid shift policy")

    @property
    def radial_shift(self) -> float:
        return self.mu / 4.0 + self.b / 2.0

    @property
    def angular_shift(self) -> float:
        return (self.dim - 2) / 2.0

    @property
    def twice_radial_shift(self) -> int:
        return self.mu // 2 + self.b

    @property
    def twice_angular_shift(self) -> int:
        return self.dim - 2

    def quantum_numbers(self, nr_index: int, ntheta_index: int) -> QuantumNumbers:
        """Shifted quantum numbers from base integer indices."""
        if nr_index < 0 or ntheta_index < 0:
            raise ValueError("base indices must be nonnegative")
        return QuantumNumbers(
            2 * nr_index + self.twice_radial_shift,
            2 * ntheta_index + self.twice_angular_shift,
        )

    def conforms(self, qn: QuantumNumbers) -> bool:
        """Whether qn could have been produced by this policy."""
        return (
            qn.twice_nr >= self.twice_radial_shift
            and qn.twice_ntheta >= self.twice_angular_shift
            and (qn.twice_nr - self.twice_radial_shift) % 2 == 0
            and (qn.twice_ntheta - self.twice_angular_shift) % 2 == 0
        )

    def level_states(self, n: int) -> list[QuantumNumbers]:
        """All states with nr + ntheta = n, ordered by descending ntheta."""
        if n < 1:
            raise ValueError("level must be >= 1")
        out = []
        tt = 2 * n - self.twice_radial_shift
        while tt >= self.twice_angular_shift:
            out.append(QuantumNumbers(2 * n - tt, tt))
            tt -= 2
        return out


INTEGER_POLICY = ShiftPolicy(mu=0, b=0, dim=2)
EBK_3D = ShiftPolicy(mu=2, b=0, dim=3)


@dataclass(frozen=True)
class SpectrumKey:
    """(n, ell) label for a spectrum entry.

    For policy-generated entries, n = nr + ntheta and ell = ntheta minus the
    policy's angular shift; both are integers for the two supported policies.
    """

    n: int
    ell: int

    @classmethod
    def from_quantum_numbers(cls, qn: QuantumNumbers, policy: ShiftPolicy) -> "SpectrumKey":
        twice_n = qn.twice_nr + qn.twice_ntheta
        twice_ell = qn.twice_ntheta - policy.twice_angular_shift
        if twice_n % 2 or twice_ell % 2:
            raise ValueError(f"{qn} does not conform to policy {policy}")
        return cls(twice_n // 2, twice_ell // 2)
