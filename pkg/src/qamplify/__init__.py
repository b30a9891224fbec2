"""Amplitude amplification with an arbitrary unitary transform, at desk scale.

State vectors live in a single complex128 buffer; gates run as strided
in-place passes (compiled core when built, numpy otherwise). On top of the
simulator sit the amplification engine, the concrete search algorithms, and
a reproducible experiment harness with a CLI front end.
"""

__version__ = "0.1.0"

from .amplify import (
    AmplificationPlan,
    TwoLevelCoeffs,
    make_plan,
    predicted_success,
    q_apply,
    run,
    success_trace,
    two_level_reconstruct,
    two_level_step,
)
from .kernels import BACKEND
from .qstate import (
    DomainError,
    StateVector,
    apply_dense,
    apply_single_qubit_gate,
    basis_state,
    inner_product,
    probability,
    sample,
)
from .searches import (
    GateSequence,
    NearSearchSpec,
    boost_algorithm,
    entropy_scaling_check,
    inversion_about_average,
    optimal_alpha,
    search_from,
    search_near,
    search_wh,
)
from .unitaries import (
    Adjoint,
    Dense,
    OraclePhase,
    PhaseOracle,
    Seq,
    SingleQubitGate,
    TensorPerQubit,
    UnitaryExpr,
    adjoint,
    ancilla_oracle_apply,
    apply,
    biased_gate,
    biased_transform,
    hadamard_gate,
    materialize,
    parse_gate_list,
    perturb_gate,
    selective_phase,
    transition_amplitude,
    walsh_hadamard,
)

__all__ = [
    "AmplificationPlan",
    "Adjoint",
    "BACKEND",
    "Dense",
    "DomainError",
    "GateSequence",
    "NearSearchSpec",
    "OraclePhase",
    "PhaseOracle",
    "Seq",
    "SingleQubitGate",
    "StateVector",
    "TensorPerQubit",
    "TwoLevelCoeffs",
    "UnitaryExpr",
    "adjoint",
    "ancilla_oracle_apply",
    "apply",
    "apply_dense",
    "apply_single_qubit_gate",
    "basis_state",
    "biased_gate",
    "biased_transform",
    "boost_algorithm",
    "entropy_scaling_check",
    "hadamard_gate",
    "inner_product",
    "inversion_about_average",
    "make_plan",
    "materialize",
    "optimal_alpha",
    "parse_gate_list",
    "perturb_gate",
    "predicted_success",
    "probability",
    "q_apply",
    "run",
    "sample",
    "search_from",
    "search_near",
    "search_wh",
    "selective_phase",
    "success_trace",
    "transition_amplitude",
    "two_level_reconstruct",
    "two_level_step",
    "walsh_hadamard",
]
