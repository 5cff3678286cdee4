import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .gaussian import GaussianClassTask, LabeledSample, LabelConvention, sample

logger = logging.getLogger(__name__)

FIG3_PERIOD = 500


@dataclass(frozen=True)
class TaskSequence:
    """Deterministic periodic schedule: phase k is active on [k*period, (k+1)*period)."""

    phases: Tuple[GaussianClassTask, ...]
    period: int = FIG3_PERIOD
    horizon: Optional[int] = None
    samples_per_step: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "phases", tuple(self.phases))
        if not self.phases:
            raise ValueError("a task sequence needs at least one phase")
        if self.period < 1:
            raise ValueError("period must be positive")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be positive")
        if self.samples_per_step < 1:
            raise ValueError("samples_per_step must be positive")
        if len({task.dim for task in self.phases}) != 1:
            raise ValueError("all phases must share the same input dimension")

    @classmethod
    def constant(cls, task: GaussianClassTask, **kwargs) -> "TaskSequence":
        return cls(phases=(task,), **kwargs)

    @property
    def n_phases(self) -> int:
        return len(self.phases)

    @property
    def cycle(self) -> int:
        return self.period * self.n_phases

    @property
    def dim(self) -> int:
        return self.phases[0].dim

    def phase_index(self, t: int) -> int:
        return (t // self.period) % self.n_phases

    def task_at(self, t: int) -> GaussianClassTask:
        if t < 0:
            raise ValueError(f"time step must be non-negative, got {t}")
        return self.phases[self.phase_index(t)]


def task_at(seq: TaskSequence, t: int) -> GaussianClassTask:
    return seq.task_at(t)


def stream_samples(seq: TaskSequence, rng: np.random.Generator, until: int) -> Iterator[List[LabeledSample]]:
    """Yield the samples of steps 0..until (inclusive), one list per step."""
    for t in range(until + 1):
        yield sample(seq.task_at(t), rng, seq.samples_per_step, t=t)


def task_a() -> GaussianClassTask:
    return GaussianClassTask(mu_pos=(1.0, 1.0), mu_neg=(-1.0, -1.0), name="A")


def fig3a(period: int = FIG3_PERIOD, **kwargs) -> TaskSequence:
    """Task A, then task A with its labels interchanged."""
    a = task_a()
    b = GaussianClassTask(
        mu_pos=a.mu_pos, mu_neg=a.mu_neg, label_convention=LabelConvention.FLIPPED, name="B"
    )
    return TaskSequence(phases=(a, b), period=period, **kwargs)


def fig3b(period: int = FIG3_PERIOD, **kwargs) -> TaskSequence:
    """Task A, then a task whose class means lie on the other diagonal."""
    b = GaussianClassTask(mu_pos=(1.0, -1.0), mu_neg=(-1.0, 1.0), name="B")
    return TaskSequence(phases=(task_a(), b), period=period, **kwargs)


def constant_preset(period: int = FIG3_PERIOD, **kwargs) -> TaskSequence:
    return TaskSequence.constant(task_a(), period=period, **kwargs)


PRESETS = {
    "fig3a": fig3a,
    "fig3b": fig3b,
    "constant": constant_preset,
}


def build_sequence(config) -> TaskSequence:
    """Resolve the task sequence described by an experiment config."""
    kwargs = dict(period=config.period, horizon=config.horizon, samples_per_step=config.samples_per_step)
    if config.scenario == "custom":
        phases = tuple(
            GaussianClassTask(
                mu_pos=tuple(spec.mu_pos),
                mu_neg=tuple(spec.mu_neg),
                sigma=spec.sigma,
                prior_pos=spec.prior_pos,
                label_convention=LabelConvention(spec.label_convention),
                name=spec.name,
            )
            for spec in config.tasks
        )
        return TaskSequence(phases=phases, **kwargs)
    if config.scenario not in PRESETS:
        raise ValueError(f"unknown scenario '{config.scenario}'")
    return PRESETS[config.scenario](**kwargs)
