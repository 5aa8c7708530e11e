"""Comparison layer and flat-file emission.

Pairs shifted quantized energies with exact energies through the mapping
ntheta = ell + 1/2, nr = n - ell - 1/2, renders comparison tables and
spectrum/plot data as CSV or JSON, and keeps every output byte-deterministic
for a given configuration.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .model import (
    EBK_3D,
    INTEGER_POLICY,
    LOG,
    YUKAWA,
    Centrifugal,
    Potential,
    QuantumNumbers,
    ReportedEnergy,
    ShiftPolicy,
)
from . import semiclassical as sc
from . import spectral as sp

CSV_COLUMNS = "n,l,E_schr,E_oq_shifted,discrepancy"


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    ell: int
    e_schr: ReportedEnergy
    e_oq_shifted: ReportedEnergy

    @property
    def discrepancy(self) -> float:
        """|E_oq - E_schr| in reported units, recomputed on access."""
        return abs(self.e_oq_shifted.value - self.e_schr.value)


@dataclass
class CompareResult:
    rows: list[ComparisonRow]
    metadata: dict
    exact_entries: list  # the underlying spectral entries, with cross-check residuals


@dataclass
class RunConfig:
    """Validated run parameters; solver overrides checked before computing."""

    potential: str = LOG
    lam: float | None = None
    method: str = "schrodinger"
    solver: str = "both"
    policy: str = "ebk"
    n_max: int | None = None
    all_bound: bool = False
    dim: int = 3
    fmt: str = "csv"
    out: str | None = None
    panels: int = sc.DEFAULT_PANELS
    ptheta: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.method not in ("oq", "schrodinger"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.solver not in ("shooting", "fd", "both"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.policy not in ("integer", "ebk"):
            raise ValueError(f"unknown policy {self.policy!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.n_max is not None and self.n_max < 1:
            raise ValueError("nmax must be >= 1")
        if self.panels < 2 or self.panels % 2:
            raise ValueError("panels must be even and >= 2")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        self.potential_object()  # validates kind/lambda pairing

    def potential_object(self) -> Potential:
        return Potential(self.potential, self.lam)

    def policy_object(self) -> ShiftPolicy:
        return INTEGER_POLICY if self.policy == "integer" else EBK_3D

    def metadata(self) -> dict:
        pot = self.potential_object()
        return {
            "tool": "semiquant",
            "version": __version__,
            "potential": self.potential,
            "lambda": self.lam,
            "units": pot.reported_units,
            "policy": self.policy,
            "solver": self.solver,
            "n_max": self.n_max,
            "all_bound": self.all_bound,
            "dim": self.dim,
            "settings": {
                "rho_min": sp.RHO_MIN,
                "shooting_steps": sp.SHOOTING_STEPS,
                "fd_points": sp.FD_POINTS,
                "action_panels": self.panels,
                "energy_bisection_tol": sc.ENERGY_TOL.abs_x,
                "cross_check_tol": sp.CROSS_CHECK_TOL,
            },
        }


def shifted_partner(n: int, ell: int) -> QuantumNumbers:
    """The shifted quantum numbers paired with exact state (n, ell)."""
    return QuantumNumbers(2 * (n - ell) - 1, 2 * ell + 1)


def compare(config: RunConfig) -> CompareResult:
    """Exact vs shifted-quantized table for the configured potential.

    Every exact state is paired through the half-integer mapping; pairs whose
    quantized side is unbound are reported in metadata, not as rows. A state
    failing the spectral cross-check aborts the run (CrossCheckError).
    """
    pot = config.potential_object()
    exact = sp.exact_spectrum(
        pot,
        n_max=config.n_max,
        all_bound=config.all_bound,
        dim=config.dim,
        solver=config.solver,
    )
    rows: list[ComparisonRow] = []
    unpaired: list[list[int]] = []
    for entry in exact:
        e_oq = sc.oq_energy(pot, shifted_partner(entry.n, entry.ell), EBK_3D, config.panels)
        if e_oq is None:
            unpaired.append([entry.n, entry.ell])
            continue
        rows.append(
            ComparisonRow(
                n=entry.n,
                ell=entry.ell,
                e_schr=entry.energy,
                e_oq_shifted=ReportedEnergy.from_natural(pot, e_oq),
            )
        )
    meta = config.metadata()
    residuals = [e.cross_check for e in exact if e.cross_check is not None]
    meta["cross_check_max"] = max(residuals) if residuals else None
    meta["unpaired"] = unpaired
    return CompareResult(rows=rows, metadata=meta, exact_entries=exact)


def _sig6(x: float) -> str:
    return f"{x:.6g}"


def render_comparison(rows: list[ComparisonRow], fmt: str, metadata: dict) -> str:
    """Comparison table as CSV (6 significant digits) or JSON (full precision)."""
    if not rows:
        raise ValueError("no rows to render")
    if fmt == "csv":
        lines = [CSV_COLUMNS]
        for r in rows:
            lines.append(
                f"{r.n},{r.ell},{_sig6(r.e_schr.value)},"
                f"{_sig6(r.e_oq_shifted.value)},{_sig6(r.discrepancy)}"
            )
        return "\n".join(lines) + "\n"
    payload = {
        "metadata": metadata,
        "rows": [
            {
                "n": r.n,
                "l": r.ell,
                "E_schr": r.e_schr.value,
                "E_oq_shifted": r.e_oq_shifted.value,
                "discrepancy": r.discrepancy,
            }
            for r in rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_spectrum(records: list[tuple[int, int, float]], fmt: str, metadata: dict) -> str:
    """(n, l, E) records as CSV or JSON; energies in reported units."""
    if not records:
        raise ValueError("no rows to render")
    if fmt == "csv":
        lines = ["n,l,E"]
        lines += [f"{n},{ell},{_sig6(e)}" for n, ell, e in records]
        return "\n".join(lines) + "\n"
    payload = {
        "metadata": metadata,
        "rows": [{"n": n, "l": ell, "E": e} for n, ell, e in records],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_pairs(pairs: list[tuple], columns: str, fmt: str, metadata: dict) -> str:
    """Generic two-column table (criticals, counts)."""
    if not pairs:
        raise ValueError("no rows to render")
    if fmt == "csv":
        lines = [columns]
        lines += [f"{a},{b if isinstance(b, int) else _sig6(b)}" for a, b in pairs]
        return "\n".join(lines) + "\n"
    payload = {"metadata": metadata, "rows": {str(a): b for a, b in pairs}}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename; no partial files on failure."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, path)


def emit(text: str, path: str | None) -> None:
    if path is None:
        print(text, end="")
    else:
        write_atomic(path, text)


def spectrum_records(config: RunConfig) -> list[tuple[int, int, float]]:
    """(n, l, reported E) for either method, table-ordered."""
    pot = config.potential_object()
    if config.method == "oq":
        result = sc.oq_spectrum(
            pot,
            config.policy_object(),
            n_max=config.n_max,
            all_bound=config.all_bound,
            panels=config.panels,
        )
        return [(e.key.n, e.key.ell, e.energy.value) for e in result.entries]
    entries = sp.exact_spectrum(
        pot,
        n_max=config.n_max,
        all_bound=config.all_bound,
        dim=config.dim,
        solver=config.solver,
    )
    return [(e.n, e.ell, e.energy.value) for e in entries]


def count_records(config: RunConfig) -> list[tuple[int, int]]:
    """Bound quantized states per level under the configured policy."""
    result = sc.oq_spectrum(
        config.potential_object(),
        config.policy_object(),
        n_max=config.n_max,
        all_bound=config.all_bound,
        panels=config.panels,
    )
    counts: dict[int, int] = {}
    for e in result.entries:
        counts[e.key.n] = counts.get(e.key.n, 0) + 1
    top = config.n_max if config.n_max is not None else max(counts, default=0)
    return [(n, counts.get(n, 0)) for n in range(1, top + 1)]


def critical_records(config: RunConfig) -> list[tuple[str, float]]:
    if config.potential != YUKAWA:
        raise ValueError("critical values exist only for the yukawa potential")
    c = sc.yukawa_criticals(config.lam)
    return [("nu_star", c.nu_star), ("nr_star", c.nr_star), ("nu_star_star", c.nu_star_star)]


def _series_slug(name: str) -> str:
    return name.replace(" ", "_").replace("=", "-") + ".csv"


def render_series(name: str, x: np.ndarray, y: np.ndarray) -> str:
    lines = [f"# {name}", "x,y"]
    lines += [f"{a:.10g},{b:.10g}" for a, b in zip(x, y)]
    return "\n".join(lines) + "\n"


def plotdata_series(config: RunConfig) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Plot-ready (name, x, y) series for the configured potential.

    Effective-potential curves are produced when angular momenta are given
    (defaults for yukawa come from its critical values); spectrum-vs-n series
    are produced when a level range is configured.
    """
    pot = config.potential_object()
    series: list[tuple[str, np.ndarray, np.ndarray]] = []

    pthetas = list(config.ptheta)
    if not pthetas and pot.kind == YUKAWA:
        c = sc.yukawa_criticals(pot.lam)
        pthetas = [0.8 * c.nu_star, c.nu_star, c.nu_star_star]
    for p in pthetas:
        if pot.kind == YUKAWA:
            rho = np.linspace(pot.lam / 200.0, 4.0 * pot.lam, 801)
        else:
            rho = np.linspace(0.02, 20.0, 801)
        u = Centrifugal.classical(p).coefficient / (2.0 * rho * rho) + pot.value_array(rho)
        label = f"ueff lambda={pot.lam:g} ptheta={p:g}" if pot.kind == YUKAWA \
            else f"ueff {pot.kind} ptheta={p:g}"
        series.append((label, rho, u))

    if config.n_max is not None or config.all_bound:
        exact = sp.exact_spectrum(
            pot, n_max=config.n_max, all_bound=config.all_bound,
            dim=config.dim, solver=config.solver,
        )
        series.append((
            "spectrum schrodinger",
            np.array([e.n for e in exact], dtype=float),
            np.array([e.energy.value for e in exact]),
        ))
        for policy, label in ((INTEGER_POLICY, "integer"), (EBK_3D, "shifted")):
            oq = sc.oq_spectrum(pot, policy, n_max=config.n_max,
                                all_bound=config.all_bound, panels=config.panels)
            series.append((
                f"spectrum oq-{label}",
                np.array([e.qn.n for e in oq.entries]),
                np.array([e.energy.value for e in oq.entries]),
            ))
        n_top = config.n_max
        if n_top is None:
            n_top = int(math.ceil(sc.yukawa_criticals(pot.lam).nr_star)) + 1
        grid_n = np.arange(0.5, n_top + 1e-9, 0.05)
        circ, circ_n, rad, rad_n = [], [], [], []
        for nn in grid_n:
            e = sc.circular_energy(pot, float(nn))
            if e is not None and (pot.kind != YUKAWA or e < 0.0):
                circ_n.append(nn)
                circ.append(ReportedEnergy.from_natural(pot, e).value)
            e = sc.radial_motion_energy(pot, float(nn), config.panels)
            if e is not None and (pot.kind != YUKAWA or e < 0.0):
                rad_n.append(nn)
                rad.append(ReportedEnergy.from_natural(pot, e).value)
        series.append(("spectrum circular-limit", np.array(circ_n), np.array(circ)))
        series.append(("spectrum radial-limit", np.array(rad_n), np.array(rad)))
    return series


def emit_plotdata(series: list[tuple[str, np.ndarray, np.ndarray]], out: str | None) -> list[str]:
    """One CSV per series, into the out directory (or stdout when None)."""
    if not series:
        raise ValueError("no series to emit")
    written: list[str] = []
    for name, x, y in series:
        text = render_series(name, x, y)
        if out is None:
            print(text, end="")
        else:
            os.makedirs(out, exist_ok=True)
            path = os.path.join(out, _series_slug(name))
            write_atomic(path, text)
            written.append(path)
    return written
