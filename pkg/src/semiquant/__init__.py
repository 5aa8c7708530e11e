"""Bound-state spectra of central potentials, two ways.

Action quantization (with and without half-integer shifts) and exact radial
Schrodinger solvers (shooting and finite difference), plus the comparison
harness that pairs them.
"""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    COULOMB,
    EBK_3D,
    INTEGER_POLICY,
    LOG,
    YUKAWA,
    Centrifugal,
    Potential,
    QuantumNumbers,
    ReportedEnergy,
    ShiftPolicy,
    SpectrumKey,
    effective_potential,
    effective_potential_minimum,
    potential_value,
)
from .semiclassical import (  # noqa: E402
    SpectrumEntry,
    TurningPoints,
    YukawaCriticals,
    analytic_energy,
    circular_energy,
    log_spread,
    oq_energy,
    oq_spectrum,
    radial_action,
    radial_momentum,
    radial_motion_energy,
    turning_points,
    yukawa_criticals,
)
from .spectral import (  # noqa: E402
    ExactEntry,
    RadialGrid,
    RadialSolution,
    eigen_fd,
    eigen_shooting,
    exact_spectrum,
    shoot,
    solve_state,
)
from .harness import ComparisonRow, RunConfig, compare  # noqa: E402

__all__ = [
    "COULOMB",
    "LOG",
    "YUKAWA",
    "EBK_3D",
    "INTEGER_POLICY",
    "Centrifugal",
    "ComparisonRow",
    "ExactEntry",
    "Potential",
    "QuantumNumbers",
    "RadialGrid",
    "RadialSolution",
    "ReportedEnergy",
    "RunConfig",
    "ShiftPolicy",
    "SpectrumEntry",
    "SpectrumKey",
    "TurningPoints",
    "YukawaCriticals",
    "analytic_energy",
    "circular_energy",
    "compare",
    "effective_potential",
    "effective_potential_minimum",
    "eigen_fd",
    "eigen_shooting",
    "exact_spectrum",
    "log_spread",
    "oq_energy",
    "oq_spectrum",
    "potential_value",
    "radial_action",
    "radial_momentum",
    "radial_motion_energy",
    "shoot",
    "solve_state",
    "turning_points",
    "yukawa_criticals",
]
