"""Joint measurability of unsharp dichotomic observables and CHSH bounds.

The package constructs joint observables for pairs of smeared two-outcome
quantum measurements, locates the optimal unsharpness 1/sqrt(2) below
which every pair becomes jointly measurable, and ties that threshold to
the CHSH expression: smearing one wing by lam rescales the quantum value
2*sqrt(2) down to the local bound 2 exactly at lam = 1/sqrt(2).  Classical
(deterministic-box) and PR-box reference points sit at the two ends of
the no-signaling range.
"""

from .errors import (
    DimensionMismatch,
    InvalidBox,
    InvalidDistribution,
    LambdaTooLarge,
    NonConvergence,
    NotEffect,
    NotHermitian,
    NotProjector,
    OddDimension,
    ParseError,
    SpectrumOutOfRange,
    UnsharpJointError,
    ValidationError,
)
from .operators import (
    DensityMatrix,
    DichotomicObservable,
    Effect,
    Projector,
    matrix_from_json,
    matrix_to_json,
    min_eigenvalue,
    projector_onto,
    tensor,
    validate_effect,
)
from .unsharp import SmearedMeanReport, UnsharpParam, mean_value, smear, smeared_mean
from .decompose import (
    ANCILLA_CONVENTION,
    Block,
    BlockDecomposition,
    NeumarkDilation,
    compress,
    neumark_dilate,
    two_projector_blocks,
)
from .joint import (
    LAMBDA_OPT,
    BlochVector,
    FeasibilityReport,
    JointObservable,
    JointResiduals,
    LambdaOptResult,
    check_joint,
    criterion_value,
    feasibility_oracle,
    lambda_opt_search,
    povm_joint_observable,
    pvm_joint_observable,
    qubit_joint_observable,
)
from .bell import (
    ChshReport,
    JointDistributionReport,
    NoSignalingBox,
    TSIRELSON_BOUND,
    box_chsh,
    chsh,
    correlation,
    deterministic_box,
    joint_distribution_exists,
    local_deterministic_boxes,
    optimal_settings,
    pr_box,
    singlet,
    smeared_chsh,
    white_noise_box,
)

__version__ = "0.1.0"

__all__ = [
    "ANCILLA_CONVENTION",
    "Block",
    "BlockDecomposition",
    "BlochVector",
    "ChshReport",
    "DensityMatrix",
    "DichotomicObservable",
    "DimensionMismatch",
    "Effect",
    "FeasibilityReport",
    "InvalidBox",
    "InvalidDistribution",
    "JointDistributionReport",
    "JointObservable",
    "JointResiduals",
    "LAMBDA_OPT",
    "LambdaOptResult",
    "LambdaTooLarge",
    "NeumarkDilation",
    "NoSignalingBox",
    "NonConvergence",
    "NotEffect",
    "NotHermitian",
    "NotProjector",
    "OddDimension",
    "ParseError",
    "Projector",
    "SmearedMeanReport",
    "SpectrumOutOfRange",
    "TSIRELSON_BOUND",
    "UnsharpJointError",
    "UnsharpParam",
    "ValidationError",
    "box_chsh",
    "check_joint",
    "chsh",
    "compress",
    "correlation",
    "criterion_value",
    "deterministic_box",
    "feasibility_oracle",
    "joint_distribution_exists",
    "lambda_opt_search",
    "local_deterministic_boxes",
    "matrix_from_json",
    "matrix_to_json",
    "mean_value",
    "min_eigenvalue",
    "neumark_dilate",
    "optimal_settings",
    "povm_joint_observable",
    "pr_box",
    "projector_onto",
    "pvm_joint_observable",
    "qubit_joint_observable",
    "singlet",
    "smear",
    "smeared_chsh",
    "smeared_mean",
    "tensor",
    "two_projector_blocks",
    "validate_effect",
    "white_noise_box",
]
