"""Exact bound-state spectra of the radial Schrodinger equation.

Two independent routes: a shooting solver (fixed-step RK4 outward march, node
counting, energy bisection on the node-count transition) and a finite
difference solver (symmetric tridiagonal discretization, Sturm-count
eigenvalue bisection, optional Richardson step). Full-spectrum enumeration
cross-checks every state between the two.

The reduced radial equation is u'' = 2 (U_eff - E) u with
U_eff = c/(2 rho^2) + V and c the quantum centrifugal coefficient; bound
states obey u ~ rho^(l + (D-1)/2) at the origin and decay at large radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import semiclassical as sc
from .model import (
    COULOMB,
    LOG,
    YUKAWA,
    EBK_3D,
    Centrifugal,
    Potential,
    QuantumNumbers,
    ReportedEnergy,
)
from .numerics import TridiagonalMatrix, sturm_count, tridiag_eigenvalues

RHO_MIN = 1e-6
SHOOTING_STEPS = 40_000
FD_POINTS = 20_001
SHOOTING_H = 0.0075  # step-size cap; 40k steps at the standard screened domain
FD_H = 0.015
ENERGY_WINDOW_TOL = 1e-10
CROSS_CHECK_TOL = 1e-5  # natural units, shooting vs Richardson FD
EDGE_ENERGY = 1e-5  # natural; states bound more weakly than this count as unbound


class GridError(RuntimeError):
    """The march overflowed inside the classically allowed region."""


class EigenvalueNotFoundError(RuntimeError):
    """The search window contains no node-count transition for the target."""


class WindowTooWideError(RuntimeError):
    """The search window straddles more than one eigenvalue; split it."""

    def __init__(self, count_lo: int, count_hi: int):
        super().__init__(
            f"window spans {count_hi - count_lo} node transitions "
            f"(counts {count_lo} -> {count_hi})"
        )
        self.count_lo = count_lo
        self.count_hi = count_hi


class CrossCheckError(RuntimeError):
    """Shooting and finite-difference energies disagree beyond tolerance."""

    def __init__(self, label: str, e_shoot: float, e_fd: float):
        super().__init__(
            f"{label}: shooting {e_shoot!r} vs finite-difference {e_fd!r} "
            f"differ by {abs(e_shoot - e_fd):.3e}"
        )
        self.e_shoot = e_shoot
        self.e_fd = e_fd


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid on [rho_min, rho_max] with `points` nodes."""

    rho_min: float
    rho_max: float
    points: int

    def __post_init__(self):
        if not (0.0 < self.rho_min < self.rho_max):
            raise ValueError("need 0 < rho_min < rho_max")
        if self.points < 3:
            raise ValueError("points must be >= 3")

    @property
    def h(self) -> float:
        return (self.rho_max - self.rho_min) / (self.points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.rho_min, self.rho_max, self.points)

    def half_step_nodes(self) -> np.ndarray:
        return np.linspace(self.rho_min, self.rho_max, 2 * self.points - 1)


@dataclass(frozen=True)
class ShotResult:
    terminal: float
    nodes: int
    overflow_rho: float | None = None


@dataclass(frozen=True)
class RadialSolution:
    energy: float
    nodes: int
    grid: RadialGrid
    u: np.ndarray


@dataclass(frozen=True)
class ExactEntry:
    n: int
    ell: int
    energy: ReportedEnergy
    method: str  # "shooting" | "finite-difference"
    nodes: int
    cross_check: float | None = None  # |E_shoot - E_fd| in natural units


def _coupling_array(pot: Potential, cf: Centrifugal, rho: np.ndarray, energy: float) -> np.ndarray:
    return 2.0 * (cf.coefficient / (2.0 * rho * rho) + pot.value_array(rho) - energy)


def _start_values(cf: Centrifugal, rho_min: float) -> tuple[float, float]:
    # regular solution u ~ rho^s with s(s-1) = centrifugal coefficient
    s = cf.ell + (cf.dim - 1) / 2.0
    return rho_min ** s, s * rho_min ** (s - 1.0)


def shoot(pot: Potential, cf: Centrifugal, energy: float, grid: RadialGrid) -> ShotResult:
    """March the radial equation outward; report terminal value and node count.

    Overflow deep in the forbidden region ends the march early and the sign at
    divergence becomes the terminal value (callers use it as a sign decision).
    Overflow inside the classically allowed region means the grid cannot
    represent the state and raises GridError.
    """
    if cf.ell is None:
        raise ValueError("shoot needs a quantum centrifugal spec")
    g = _coupling_array(pot, cf, grid.half_step_nodes(), energy)
    u0, v0 = _start_values(cf, grid.rho_min)
    u, nodes, stop = _kernels.radial_march(g, grid.h, u0, v0)
    steps = grid.points - 1
    if stop < steps:
        if g[2 * stop] < 0.0:
            raise GridError(
                f"overflow at rho = {grid.rho_min + stop * grid.h:.4g} "
                "inside the classical region; refine the grid"
            )
        return ShotResult(terminal=u, nodes=nodes, overflow_rho=grid.rho_min + stop * grid.h)
    return ShotResult(terminal=u, nodes=nodes)


def radial_solution(pot: Potential, cf: Centrifugal, energy: float, grid: RadialGrid) -> RadialSolution:
    """Like shoot, but records the wavefunction samples at every grid node."""
    if cf.ell is None:
        raise ValueError("radial_solution needs a quantum centrifugal spec")
    g = _coupling_array(pot, cf, grid.half_step_nodes(), energy)
    u0, v0 = _start_values(cf, grid.rho_min)
    out = np.empty(grid.points)
    _, nodes, _ = _kernels.radial_march_record(g, grid.h, u0, v0, out)
    return RadialSolution(energy=energy, nodes=nodes, grid=grid, u=out)


def _node_count(pot: Potential, cf: Centrifugal, energy: float, grid: RadialGrid) -> int:
    return shoot(pot, cf, energy, grid).nodes


def eigen_shooting(
    pot: Potential,
    ell: int,
    dim: int,
    nodes: int,
    window: tuple[float, float],
    grid: RadialGrid,
    etol: float = ENERGY_WINDOW_TOL,
) -> float:
    """Locate the `nodes`-node eigenvalue inside window by count bisection.

    The node count is nondecreasing in energy and jumps by one exactly at each
    eigenvalue, so bisecting the predicate count > nodes pins the energy. The
    window must bracket exactly that one transition; see the window errors.
    """
    cf = Centrifugal.quantum(ell, dim)
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must have lo < hi")
    c_lo = _node_count(pot, cf, lo, grid)
    c_hi = _node_count(pot, cf, hi, grid)
    if nodes < c_lo or nodes >= c_hi:
        raise EigenvalueNotFoundError(
            f"no {nodes}-node transition in [{lo}, {hi}] (counts {c_lo}, {c_hi})"
        )
    if c_hi - c_lo > 1:
        raise WindowTooWideError(c_lo, c_hi)
    while hi - lo > etol:
        mid = 0.5 * (lo + hi)
        if _node_count(pot, cf, mid, grid) > nodes:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _locate_shooting(
    pot: Potential,
    ell: int,
    dim: int,
    nodes: int,
    lo: float,
    hi: float,
    grid: RadialGrid,
    hi_cap: float | None,
    etol: float = ENERGY_WINDOW_TOL,
) -> float | None:
    """Count-guided driver: widen and split a seed window, then solve.

    Returns None when the state is unbound (hi reached hi_cap with too few
    node transitions below it); only the screened potential takes that path.
    """
    cf = Centrifugal.quantum(ell, dim)
    if hi_cap is not None:
        hi = min(hi, hi_cap)
    step = max(abs(lo) * 0.5, 0.1)
    while _node_count(pot, cf, lo, grid) > nodes:
        lo -= step
        step *= 2.0
    step = 0.5
    while _node_count(pot, cf, hi, grid) <= nodes:
        if hi_cap is not None and hi >= hi_cap:
            return None
        hi = min(hi + step, hi_cap) if hi_cap is not None else hi + step
        step *= 2.0
    # split until the window holds a single transition, then hand off
    while True:
        c_lo = _node_count(pot, cf, lo, grid)
        c_hi = _node_count(pot, cf, hi, grid)
        if c_hi - c_lo <= 1:
            break
        mid = 0.5 * (lo + hi)
        if _node_count(pot, cf, mid, grid) > nodes:
            hi = mid
        else:
            lo = mid
    return eigen_shooting(pot, ell, dim, nodes, (lo, hi), grid, etol)


def fd_matrix(pot: Potential, cf: Centrifugal, grid: RadialGrid) -> TridiagonalMatrix:
    """Dirichlet finite-difference Hamiltonian on the interior nodes."""
    rho = grid.nodes()[1:-1]
    h = grid.h
    diag = 1.0 / (h * h) + cf.coefficient / (2.0 * rho * rho) + pot.value_array(rho)
    offdiag = np.full(rho.size - 1, -0.5 / (h * h))
    return TridiagonalMatrix(diag, offdiag)


def eigen_fd(
    pot: Potential,
    ell: int,
    dim: int,
    grid: RadialGrid,
    count: int,
    richardson: bool = True,
) -> np.ndarray:
    """Lowest `count` eigenvalues by tridiagonal Sturm bisection.

    With richardson=True the solve is repeated on the half-step grid and each
    eigenvalue is extrapolated as (4 E_half - E_full)/3, removing the O(h^2)
    discretization term.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    cf = Centrifugal.quantum(ell, dim)
    e_full = tridiag_eigenvalues(fd_matrix(pot, cf, grid), count)
    if not richardson:
        return e_full
    fine = RadialGrid(grid.rho_min, grid.rho_max, 2 * grid.points - 1)
    e_half = tridiag_eigenvalues(fd_matrix(pot, cf, fine), count)
    return (4.0 * e_half - e_full) / 3.0


def _rho_max(pot: Potential, e_estimate: float | None, n: int) -> float:
    """Domain cutoff tied to the per-state decay or turning-point scale.

    e_estimate is the quantized approximation to the state's energy; None
    means the state sits near the binding edge and gets the widest domain.
    The zero-angular-momentum turning point at that energy bounds the reach
    of the classical region for every ell, and six decay lengths past it
    suppress the truncated tail below the solver tolerances.
    """
    if pot.kind == LOG:
        outer = sc.turning_points(pot, 0.0, sc.radial_motion_energy(pot, float(n))).rho_plus
        return max(4.0 * outer, 50.0)
    if e_estimate is None or e_estimate >= 0.0:
        e_estimate = -EDGE_ENERGY
    turn = sc.turning_points(pot, 0.0, e_estimate).rho_plus
    decay = 1.0 / math.sqrt(2.0 * abs(e_estimate))
    floor = 3.0 * pot.lam if pot.kind == YUKAWA else 50.0
    return max(turn + 6.0 * decay, floor)


def _shooting_grid(pot: Potential, e_estimate: float | None, n: int) -> RadialGrid:
    top = _rho_max(pot, e_estimate, n)
    steps = max(SHOOTING_STEPS, int(math.ceil((top - RHO_MIN) / SHOOTING_H)))
    return RadialGrid(RHO_MIN, top, steps + 1)


def _fd_grid(pot: Potential, e_estimate: float | None, n: int) -> RadialGrid:
    top = _rho_max(pot, e_estimate, n)
    points = max(FD_POINTS, int(math.ceil((top - RHO_MIN) / FD_H)) + 1)
    if points % 2 == 0:
        points += 1
    return RadialGrid(RHO_MIN, top, points)


def _oq_estimate(pot: Potential, n: int, ell: int) -> float | None:
    """Shifted quantized energy for (n, ell): the domain-sizing estimate."""
    qn = QuantumNumbers(2 * (n - ell) - 1, 2 * ell + 1)
    return sc.oq_energy(pot, qn, EBK_3D)


def _seed_window(pot: Potential, n: int) -> tuple[float, float, float | None]:
    """(lo, hi, hi_cap) seed for the level-n eigenvalue search at any ell.

    The two quantized limiting families bracket the exact level: circular
    orbits from below, pure radial motion from above. The screened potential
    instead uses its unscreened (Coulomb) level as a floor, rigorous because
    screening only weakens the attraction, and caps the search below zero.
    """
    if pot.kind == LOG:
        lo = sc.circular_energy(pot, float(n)) - 0.05
        hi = sc.radial_motion_energy(pot, float(n)) + 0.05
        return lo, hi, None
    floor = -0.5 / (n * n)
    if pot.kind == COULOMB:
        return floor * (1.0 + 1e-3) - 1e-9, floor * (1.0 - 1e-3), None
    return floor - 1e-9, -1e-12, -1e-12


def _channel_bound_count(pot: Potential, ell: int, dim: int, solver: str) -> int:
    """Number of negative-energy states in an ell channel (screened only).

    Decided on a widened domain resolving binding energies down to roughly
    EDGE_ENERGY; shallower states are treated as unbound. The pure-fd route
    counts Sturm-style on its own matrix, keeping the two methods independent.
    """
    cf = Centrifugal.quantum(ell, dim)
    if solver == "fd":
        m = fd_matrix(pot, cf, _fd_grid(pot, None, 1))
        return sturm_count(m, -1e-12)
    return _node_count(pot, cf, -1e-12, _shooting_grid(pot, None, 1))


def solve_state(
    pot: Potential,
    n: int,
    ell: int,
    dim: int = 3,
    solver: str = "both",
) -> ExactEntry | None:
    """One exact eigenstate by the requested route(s); None when unbound.

    solver "both" reports the shooting energy with the finite-difference
    Richardson value as a cross-check; disagreement beyond tolerance raises
    CrossCheckError with both values attached.
    """
    if not 0 <= ell <= n - 1:
        raise ValueError(f"need 0 <= ell <= n-1, got n={n}, ell={ell}")
    if solver not in ("shooting", "fd", "both"):
        raise ValueError(f"unknown solver {solver!r}")
    k = n - ell - 1
    lo, hi, hi_cap = _seed_window(pot, n)
    e_est = _oq_estimate(pot, n, ell) if pot.kind == YUKAWA else None
    if pot.kind == COULOMB:
        e_est = -0.5 / (n * n)

    e_shoot = None
    if solver in ("shooting", "both"):
        e_shoot = _locate_shooting(pot, ell, dim, k, lo, hi, _shooting_grid(pot, e_est, n), hi_cap)
        if e_shoot is None:
            return None
        e_est = e_shoot

    e_fd = None
    if solver in ("fd", "both"):
        if pot.kind == YUKAWA and solver == "fd":
            if _channel_bound_count(pot, ell, dim, "fd") <= k:
                return None
        e_fd = float(eigen_fd(pot, ell, dim, _fd_grid(pot, e_est, n), k + 1)[k])
        if pot.kind == YUKAWA and e_fd >= 0.0:
            return None

    if solver == "both":
        residual = abs(e_shoot - e_fd)
        if residual > CROSS_CHECK_TOL:
            raise CrossCheckError(f"{pot.kind} (n={n}, l={ell})", e_shoot, e_fd)
        energy, method = e_shoot, "shooting"
    elif solver == "shooting":
        residual, energy, method = None, e_shoot, "shooting"
    else:
        residual, energy, method = None, e_fd, "finite-difference"

    return ExactEntry(
        n=n,
        ell=ell,
        energy=ReportedEnergy.from_natural(pot, energy),
        method=method,
        nodes=k,
        cross_check=residual,
    )


def exact_spectrum(
    pot: Potential,
    n_max: int | None = None,
    all_bound: bool = False,
    dim: int = 3,
    solver: str = "both",
) -> list[ExactEntry]:
    """All exact states up to n_max, or every bound state (screened potential).

    Entries are sorted by (n, descending ell) and, for solver "both", each has
    passed the shooting vs finite-difference cross-check. For the screened
    potential the ell loop stops at the first channel with no bound state.
    """
    if n_max is None and not all_bound:
        raise ValueError("need n_max or all_bound")
    if all_bound and pot.kind != YUKAWA:
        raise ValueError(f"{pot.kind} binds infinitely many states; give n_max")

    entries: list[ExactEntry] = []
    if pot.kind == YUKAWA:
        count_solver = "fd" if solver == "fd" else "both"
        ell = 0
        while True:
            if n_max is not None and ell > n_max - 1:
                break
            channel = _channel_bound_count(pot, ell, dim, count_solver)
            if channel == 0:
                break
            k_top = channel - 1
            if n_max is not None:
                k_top = min(k_top, n_max - ell - 1)
            for k in range(k_top + 1):
                entry = solve_state(pot, k + ell + 1, ell, dim, solver)
                if entry is not None:
                    entries.append(entry)
            ell += 1
    else:
        for n in range(1, n_max + 1):
            for ell in range(n):
                entry = solve_state(pot, n, ell, dim, solver)
                if entry is not None:
                    entries.append(entry)

    entries.sort(key=lambda e: (e.n, -e.ell))
    return entries
