"""Quantum Fisher information for three-parameter rotation sensing with anticoherent states."""
from .anticoherence import MomentReport, anticoherence_order, directional_moment, stokes_tensor, stokes_vector
from .baselines import (
    advantage_ratio,
    noon_state,
    rotated_noon_h_variance,
    shot_noise_reference,
    three_noon_bound,
)
from .designer import SupportSolution, psi4_family, solve_support
from .errors import NumericalError, SingularQfimError, ValidationError
from .majorana import (
    Constellation,
    MajoranaPoint,
    certify_two_symmetries,
    constellation_to_state,
    state_to_constellation,
    symmetry_check,
)
from .polyhedra import compose, dual, orbit, platonic, rotation_group, truncated_tetrahedron
from .qfim import (
    QfimReport,
    anticoherent_qfim_closed_form,
    crb,
    h_generators,
    qfim,
    singularity_scan,
    trace_bound,
)
from .spin import (
    RotationSpec,
    SpinState,
    apply_rotation,
    axis_angle,
    basis_state,
    make_state,
    rodrigues,
    rotation_unitary,
    stokes_matrix,
    xyz,
    zyz,
)

__version__ = "0.1.0"
