"""Self-contained numerical kernels.

Bracketed bisection, geometric bracket expansion, composite Simpson (with a
trapezoid option for fidelity runs), a fixed-step classical RK4 sweep, and a
symmetric-tridiagonal eigenvalue extractor built on Sturm-sequence counting.

All kernels are deterministic and reentrant: no adaptive stepping, no global
state, results reproducible bit-for-bit across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels


class BracketError(ValueError):
    """The supplied interval does not straddle a sign change."""


class ConvergenceError(RuntimeError):
    """Iteration cap reached; carries the final enclosing interval."""

    def __init__(self, message: str, lo: float, hi: float):
        super().__init__(f"{message} (final interval [{lo!r}, {hi!r}])")
        self.lo = lo
        self.hi = hi


class NoSignChangeError(RuntimeError):
    """Bracket expansion hit its limit without finding a sign change."""


@dataclass(frozen=True)
class Tolerance:
    """Termination control for bracketed solves.

    abs_x: absolute interval-width tolerance. abs_f: residual magnitude that
    counts as an exact hit (keep at the tiny default to rely on abs_x alone).
    """

    abs_x: float = 1e-12
    abs_f: float = 5e-324
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_x > 0.0 and self.abs_f > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class Bracket:
    """An interval with cached endpoint values."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def evaluate(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))

    def straddles_root(self) -> bool:
        return (self.f_lo <= 0.0 < self.f_hi) or (self.f_hi <= 0.0 < self.f_lo) or \
            self.f_lo == 0.0 or self.f_hi == 0.0


def bisect(f: Callable[[float], float], bracket: Bracket, tol: Tolerance = Tolerance()) -> float:
    """Root of f inside a sign-changing bracket by deterministic interval halving.

    The returned midpoint is within tol.abs_x of the true root. Raises
    BracketError if the endpoints do not differ in sign, ConvergenceError if
    max_iter halvings fail to shrink the interval below tolerance.
    """
    lo, hi = bracket.lo, bracket.hi
    f_lo, f_hi = bracket.f_lo, bracket.f_hi
    if abs(f_lo) <= tol.abs_f:
        return lo
    if abs(f_hi) <= tol.abs_f:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={f_lo}, {f_hi}")
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= tol.abs_f:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= tol.abs_x:
            return 0.5 * (lo + hi)
    raise ConvergenceError("bisection did not converge", lo, hi)


def expand_bracket(
    f: Callable[[float], float],
    seed: float,
    direction: str = "up",
    growth: float = 2.0,
    limit: float = 1e9,
    step: float = 1.0,
) -> Bracket:
    """Search outward from seed for a sign change, growing the step geometrically.

    Probes move up or down from the seed, each step `growth` times the last,
    until the probe value's sign differs from f(seed). Raises NoSignChangeError
    once the probe is more than `limit` away from the seed.
    """
    if growth <= 1.0:
        raise ValueError("growth must exceed 1")
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    sign = 1.0 if direction == "up" else -1.0
    x = seed
    fx = f(x)
    if not math.isfinite(fx):
        raise ValueError(f"f not finite at seed {seed}")
    while True:
        x_next = x + sign * step
        if abs(x_next - seed) > limit:
            raise NoSignChangeError(f"no sign change within {limit} of {seed}")
        f_next = f(x_next)
        if f_next == 0.0 or (f_next > 0.0) != (fx > 0.0):
            if x < x_next:
                return Bracket(x, x_next, fx, f_next)
            return Bracket(x_next, x, f_next, fx)
        x, fx = x_next, f_next
        step *= growth


def integrate_simpson(g: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int) -> float:
    """Composite Simpson on [a, b] with an even panel count.

    g is evaluated once on the full sample array (panels+1 points), so it must
    accept ndarray input. Error is O(panels^-4) for smooth integrands.
    """
    if panels < 2 or panels % 2:
        raise ValueError(f"panels must be even and >= 2, got {panels}")
    x = np.linspace(a, b, panels + 1)
    y = np.asarray(g(x), dtype=float)
    h = (b - a) / panels
    return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())


def integrate_trapezoid(g: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int) -> float:
    """Composite trapezoid; kept as the lower-order fidelity option."""
    if panels < 1:
        raise ValueError(f"panels must be >= 1, got {panels}")
    x = np.linspace(a, b, panels + 1)
    y = np.asarray(g(x), dtype=float)
    h = (b - a) / panels
    return h * (0.5 * (y[0] + y[-1]) + y[1:-1].sum())


class SweepOverflowError(RuntimeError):
    """The RK4 state went non-finite; carries the abscissa where it happened."""

    def __init__(self, abscissa: float):
        super().__init__(f"state became non-finite near x = {abscissa}")
        self.abscissa = abscissa


def rk4_sweep(
    deriv: Callable[[float, np.ndarray], np.ndarray],
    state0,
    a: float,
    b: float,
    steps: int,
    observer: Callable[[float, np.ndarray], None] | None = None,
) -> np.ndarray:
    """Classical fixed-step fourth-order sweep of y' = deriv(x, y) from a to b.

    The observer, when given, is invoked once per accepted step with the new
    abscissa and state (callers use it for node counting). A non-finite state
    raises SweepOverflowError carrying the abscissa.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y = np.asarray(state0, dtype=float).copy()
    h = (b - a) / steps
    x = a
    for i in range(steps):
        k1 = np.asarray(deriv(x, y))
        k2 = np.asarray(deriv(x + 0.5 * h, y + 0.5 * h * k1))
        k3 = np.asarray(deriv(x + 0.5 * h, y + 0.5 * h * k2))
        k4 = np.asarray(deriv(x + h, y + h * k3))
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        x = a + (i + 1) * h
        if not np.all(np.isfinite(y)):
            raise SweepOverflowError(x)
        if observer is not None:
            observer(x, y)
    return y


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", np.asarray(self.diag, dtype=float))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag, dtype=float))
        if self.diag.ndim != 1 or self.diag.size < 1:
            raise ValueError("diag must be a 1-D array with n >= 1")
        if self.offdiag.shape != (self.diag.size - 1,):
            raise ValueError("offdiag must have length n - 1")

    @property
    def n(self) -> int:
        return self.diag.size


def sturm_count(m: TridiagonalMatrix, x: float) -> int:
    """Number of eigenvalues of m strictly below x (Sturm sequence sign count)."""
    return int(_kernels.sturm_count(m.diag, m.offdiag * m.offdiag, float(x)))


def gershgorin_interval(m: TridiagonalMatrix) -> tuple[float, float]:
    """An interval certain to contain the whole spectrum."""
    e = np.abs(m.offdiag)
    radius = np.zeros(m.n)
    radius[:-1] += e
    radius[1:] += e
    return float(np.min(m.diag - radius)), float(np.max(m.diag + radius))


def tridiag_eigenvalues(m: TridiagonalMatrix, k: int, abs_tol: float | None = None) -> np.ndarray:
    """The k smallest eigenvalues, ascending, by Sturm-count bisection.

    Each eigenvalue is bracketed by its index: bisection on count(x) >= j+1
    converges to the j-th eigenvalue with guaranteed index ordering. The
    default tolerance is scaled off the Gershgorin interval.
    """
    if not 1 <= k <= m.n:
        raise ValueError(f"k must be in 1..{m.n}, got {k}")
    glo, ghi = gershgorin_interval(m)
    if abs_tol is None:
        abs_tol = max(1e-12, 8.0 * np.finfo(float).eps * max(abs(glo), abs(ghi)))
    e2 = m.offdiag * m.offdiag
    out = np.empty(k)
    lo_floor = glo
    for j in range(k):
        lo, hi = lo_floor, ghi
        while hi - lo > abs_tol:
            mid = 0.5 * (lo + hi)
            if _kernels.sturm_count(m.diag, e2, mid) >= j + 1:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
        lo_floor = out[j] - abs_tol
    return out
