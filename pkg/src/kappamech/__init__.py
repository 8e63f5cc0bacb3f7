"""Integrable Hamiltonian systems on surfaces of constant curvature.

The curvature enters every formula as a real parameter: positive values
put the dynamics on a sphere, negative ones on the hyperbolic plane, and
zero recovers the Euclidean systems smoothly.  The package provides

* four phase-space charts with exact conversions (``charts``),
* a catalog of integrable Hamiltonian families (``systems``),
* their constants of motion (``integrals``),
* exact Poisson-bracket verification machinery (``bracket``),
* adaptive integration with conservation monitoring (``dynamics``),
* a command-line interface (``cli``; installed as ``kappa-mech``).
"""

from .charts import (
    AmbientState,
    BeltramiState,
    ParallelState,
    PolarState,
    ambient_state,
    beltrami_state,
    casimir,
    convert,
    from_ambient,
    lie_generators,
    parallel_state,
    polar_state,
    subgroup_matrix,
    to_ambient,
)
from .dynamics import IntegratorConfig, Trajectory, closure_detect, flat_limit_sweep, integrate
from .integrals import IntegralSpec
from .systems import SystemSpec, hamiltonian, kinetic_energy, potential

__all__ = [
    "AmbientState",
    "BeltramiState",
    "ParallelState",
    "PolarState",
    "IntegralSpec",
    "IntegratorConfig",
    "SystemSpec",
    "Trajectory",
    "ambient_state",
    "beltrami_state",
    "casimir",
    "closure_detect",
    "convert",
    "flat_limit_sweep",
    "from_ambient",
    "hamiltonian",
    "integrate",
    "kinetic_energy",
    "lie_generators",
    "parallel_state",
    "polar_state",
    "potential",
    "subgroup_matrix",
    "to_ambient",
]

__version__ = "0.1.0"
