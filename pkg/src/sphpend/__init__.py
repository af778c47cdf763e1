"""Spherical pendulum: classical actions, Bohr-Sommerfeld joint spectrum,
shift-operator algebra and monodromy detection.

The numerical hot paths (complete-integral quadrature, constrained RK4) run
on a compiled core when available; `kernel_backend()` reports which one is
active.
"""

from . import _kernels
from .actions import (
    ActionBundle,
    ActionJacobian,
    BranchCutMarker,
    BranchedTheta,
    action_a1,
    action_bundle,
    action_jacobian,
    boundary_closed_forms,
    continue_theta,
    integral_i,
    period,
    rotation_number,
)
from .cubic import (
    BoundaryPoint,
    Classification,
    EnergyMomentum,
    TurningPoints,
    boundary_point,
    classify,
    eval_cubic,
    min_energy_for_momentum,
    sample_locus,
    turning_points,
)
from .dynamics import (
    FullState,
    ReducedState,
    ReturnData,
    full_vector_field,
    integrate_full,
    integrate_reduced,
    measure_first_return,
    reduced_vector_field,
    seed_on_torus,
)
from .monodromy import (
    LoopSpec,
    MonodromyResult,
    PeriodBasis,
    default_loop,
    lattice_cell,
    make_loop,
    monodromy_analytic,
    monodromy_spectral,
    period_basis,
    repeat_loop,
    reverse_loop,
    winding_number,
)
from .operators import (
    LatticeOperator,
    StateVector,
    commutator,
    q_action,
    q_diagonal,
    raise_,
    shift,
    verify_relations,
)
from .spectrum import (
    QuantumNumbers,
    SpectrumPoint,
    build_spectrum,
    solve_energy,
    spectrum_symmetry_check,
)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """'c' when the compiled kernels are active, 'python' otherwise."""
    return _kernels.BACKEND
