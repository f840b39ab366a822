"""Robustness of entanglement, teleportation fidelity and entanglement activation."""

from .activation import (
    ActivationReport,
    DegenerateSpreadError,
    build_activation_report,
    detection_value,
    locc_lambda_fidelity,
    ppt_activator,
    protocol_witness,
    slocc_activation_apply,
    spread_gd,
    swapping_resource,
    verify_swap_identity,
)
from .linalg import BipartiteSpace, PureState, partial_trace, partial_transpose
from .robustness import (
    RobustnessResult,
    SolverFailure,
    Witness,
    pure_state_robustness,
    relative_robustness,
    robustness_ppt,
    witness_from_dual,
)
from .sdp import SdpBlock, SdpProblem, SdpSolution, solve
from .states import DensityMatrix, FourPartySpace, InvalidDensityError, isotropic
from .teleport import entanglement_fidelity, mc_average_fidelity, teleport_report

__version__ = "0.1.0"
