"""Low multilinear rank tensor approximation via CUR-type decompositions.

The package provides the Chidori and Fiber tensor CUR decompositions built
from sampled subtensors and fibers, classical orthogonal Tucker baselines
(HOSVD, sequentially truncated HOSVD, HOOI), exactness and coherence
diagnostics, perturbation-bound evaluators, and a benchmark/compression CLI.
"""

from .analysis import (
    BoundReport,
    CoherenceReport,
    chidori_error_bound,
    coherence,
    evaluate_error_bounds,
    general_error_bound,
    relative_error,
    snr_db,
    tensor_coherence,
)
from .cur import (
    CharacterizationReport,
    CurDecomposition,
    check_characterization,
    chidori_cur,
    cur_to_hosvd,
    cur_with_indices,
    fiber_cur,
    projection_reconstruct,
)
from .experiments import (
    CompressionResult,
    ExperimentConfig,
    compress,
    convert_factors,
    generate_synthetic,
    run_sweep,
    write_csv,
)
from .linalg import (
    SvdFactors,
    compact_svd,
    multilinear_rank,
    numerical_rank,
    pinv,
    qr_factor,
    rank_r_pinv,
)
from .sampling import (
    SamplingPlan,
    chidori_sample_sizes,
    fiber_sample_sizes,
    length_distribution,
    sample_without_replacement,
)
from .tensor import (
    composite_index,
    fold,
    frobenius_norm,
    kronecker,
    mode_product,
    multi_mode_product,
    outer,
    select_fibers,
    spectral_norm,
    subtensor,
    unfold,
)
from .tensorfile import TensorFileError, read_tensor, write_tensor
from .tucker import HosvdDecomposition, hooi, hosvd, st_hosvd

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CharacterizationReport",
    "CoherenceReport",
    "CompressionResult",
    "CurDecomposition",
    "ExperimentConfig",
    "HosvdDecomposition",
    "SamplingPlan",
    "SvdFactors",
    "TensorFileError",
    "check_characterization",
    "chidori_cur",
    "chidori_error_bound",
    "chidori_sample_sizes",
    "coherence",
    "compact_svd",
    "composite_index",
    "compress",
    "convert_factors",
    "cur_to_hosvd",
    "cur_with_indices",
    "evaluate_error_bounds",
    "fiber_cur",
    "fiber_sample_sizes",
    "fold",
    "frobenius_norm",
    "general_error_bound",
    "generate_synthetic",
    "hooi",
    "hosvd",
    "kronecker",
    "length_distribution",
    "mode_product",
    "multi_mode_product",
    "multilinear_rank",
    "numerical_rank",
    "outer",
    "pinv",
    "projection_reconstruct",
    "qr_factor",
    "rank_r_pinv",
    "read_tensor",
    "relative_error",
    "run_sweep",
    "sample_without_replacement",
    "select_fibers",
    "snr_db",
    "spectral_norm",
    "st_hosvd",
    "subtensor",
    "tensor_coherence",
    "unfold",
    "write_csv",
    "write_tensor",
]
