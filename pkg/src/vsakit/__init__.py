"""Binding, unbinding, and detection operators for vector symbolic
architectures, with seeded codebooks, superposition memories, and Monte
Carlo capacity experiments."""

from .binding import (
    Backend,
    BoundRep,
    bind,
    conv_bind,
    conv_unbind,
    detect,
    detection_rank,
    detection_scale,
    hadamard_bind,
    hadamard_detect,
    hadamard_from_tensor,
    hadamard_unbind,
    tensor_bind,
    tensor_detect,
    tensor_unbind_left,
    tensor_unbind_right,
)
from .capacity import (
    ExperimentConfig,
    ExperimentResult,
    bound_hadamard,
    bound_tensor,
    capacity_at_accuracy,
    fit_capacity_constant,
    memory_capacity_report,
    run_experiment,
    run_trial,
    score_moments,
)
from .codebook import (
    Codebook,
    DotStatistics,
    Kind,
    dot_statistics,
    generate,
    max_coherence,
    normalized_dot,
)
from .memory import DetectionResult, Memory, bundle, query_detect, query_unbind

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BoundRep",
    "Codebook",
    "DetectionResult",
    "DotStatistics",
    "ExperimentConfig",
    "ExperimentResult",
    "Kind",
    "Memory",
    "bind",
    "bound_hadamard",
    "bound_tensor",
    "bundle",
    "capacity_at_accuracy",
    "conv_bind",
    "conv_unbind",
    "detect",
    "detection_rank",
    "detection_scale",
    "dot_statistics",
    "fit_capacity_constant",
    "generate",
    "hadamard_bind",
    "hadamard_detect",
    "hadamard_from_tensor",
    "hadamard_unbind",
    "max_coherence",
    "memory_capacity_report",
    "normalized_dot",
    "query_detect",
    "query_unbind",
    "run_experiment",
    "run_trial",
    "score_moments",
    "tensor_bind",
    "tensor_detect",
    "tensor_unbind_left",
    "tensor_unbind_right",
]
