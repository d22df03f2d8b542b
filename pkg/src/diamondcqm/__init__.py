"""Numerics for conformal quantum mechanics of causal diamonds.

Layers: specfun (special-function kernels), algebra (sl(2,R) generators),
frames (time maps and Killing flows), dynamics (classical orbits and the
instability rate), pathint (exact kernels and thermality), dos (regularized
densities of states), spectral (finite-difference quantum oracle), and a
CLI front end with an acceptance suite (`diamondcqm verify`).
"""

from .algebra import (
    ConformalModel,
    DualFrequency,
    GeneratorClass,
    GeneratorCoeffs,
    cartan_weyl,
    classify,
    dual_map,
    generator_value,
    poisson_bracket,
)
from .dos import (
    DosEstimate,
    cutoff_constant,
    dos_digamma,
    dos_semiclassical,
    dos_series,
    dos_thomas_fermi,
)
from .dynamics import (
    OrbitData,
    PhaseState,
    Trajectory,
    effective_potential,
    integrate,
    jacobi_action,
    lyapunov_estimate,
    period,
    turning_points,
)
from .frames import (
    DiamondGeometry,
    FlowCurve,
    SpacetimeEvent,
    p_of_P,
    q_of_Q,
    rckf_flow,
    rckf_velocity,
    t_of_tau,
    tau_of_t,
)
from .pathint import (
    KernelValue,
    ThermalitySummary,
    ThermalReport,
    aux_integral_check,
    diamond_temperature,
    greens,
    greens_pole_scan,
    parity_assemble,
    partition_function,
    propagator,
    semigroup_check,
    trace_Z,
)
from .spectral import (
    BoxDiscretization,
    SpectrumResult,
    StaircaseResult,
    eigenvalues,
    staircase,
)

__version__ = "0.1.0"

__all__ = [
    "BoxDiscretization",
    "ConformalModel",
    "DiamondGeometry",
    "DosEstimate",
    "DualFrequency",
    "FlowCurve",
    "GeneratorClass",
    "GeneratorCoeffs",
    "KernelValue",
    "OrbitData",
    "PhaseState",
    "SpacetimeEvent",
    "SpectrumResult",
    "StaircaseResult",
    "ThermalReport",
    "ThermalitySummary",
    "Trajectory",
    "aux_integral_check",
    "cartan_weyl",
    "classify",
    "cutoff_constant",
    "diamond_temperature",
    "dos_digamma",
    "dos_semiclassical",
    "dos_series",
    "dos_thomas_fermi",
    "dual_map",
    "effective_potential",
    "eigenvalues",
    "generator_value",
    "greens",
    "greens_pole_scan",
    "integrate",
    "jacobi_action",
    "lyapunov_estimate",
    "p_of_P",
    "parity_assemble",
    "partition_function",
    "period",
    "poisson_bracket",
    "propagator",
    "q_of_Q",
    "rckf_flow",
    "rckf_velocity",
    "semigroup_check",
    "staircase",
    "t_of_tau",
    "tau_of_t",
    "trace_Z",
    "turning_points",
]
