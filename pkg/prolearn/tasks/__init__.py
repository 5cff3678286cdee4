from .gaussian import (
    GaussianClassTask,
    LabelConvention,
    LabeledSample,
    bayes_hypothesis,
    bayes_risk,
    sample,
    sample_arrays,
)
from .sequence import (
    PRESETS,
    TaskSequence,
    build_sequence,
    constant_preset,
    fig3a,
    fig3b,
    stream_samples,
    task_at,
)

__all__ = [
    "GaussianClassTask",
    "LabelConvention",
    "LabeledSample",
    "TaskSequence",
    "PRESETS",
    "bayes_hypothesis",
    "bayes_risk",
    "build_sequence",
    "constant_preset",
    "fig3a",
    "fig3b",
    "sample",
    "sample_arrays",
    "stream_samples",
    "task_at",
]
