"""Gaussian binary classification tasks and their closed-form oracles.

A task draws a label with P(y=+1) = prior_pos, then an input from an
isotropic Gaussian centred on that label's mean. The flipped label
convention swaps which mean belongs to which label while keeping the
input marginal identical.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Tuple

import numpy as np
from scipy.special import ndtr

from ..classes.errors import DegenerateTaskError
from ..classes.hypothesis import LinearHypothesis

logger = logging.getLogger(__name__)


class LabelConvention(str, Enum):
    NORMAL = "normal"
    FLIPPED = "flipped"


@dataclass(frozen=True)
class LabeledSample:
    t: int
    x: Tuple[float, ...]
    y: int


@dataclass(frozen=True)
class GaussianClassTask:
    mu_pos: Tuple[float, ...]
    mu_neg: Tuple[float, ...]
    sigma: float = 1.0
    prior_pos: float = 0.5
    label_convention: LabelConvention = LabelConvention.NORMAL
    name: str = field(default="task", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu_pos", tuple(float(v) for v in self.mu_pos))
        object.__setattr__(self, "mu_neg", tuple(float(v) for v in self.mu_neg))
        object.__setattr__(self, "label_convention", LabelConvention(self.label_convention))
        if len(self.mu_pos) != len(self.mu_neg) or not self.mu_pos:
            raise ValueError("mu_pos and mu_neg must be non-empty vectors of equal length")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 <= self.prior_pos <= 1.0:
            raise ValueError(f"prior_pos must lie in [0, 1], got {self.prior_pos}")

    @property
    def dim(self) -> int:
        return len(self.mu_pos)

    def effective_means(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (mean of class +1, mean of class -1) after the label convention."""
        pos, neg = np.asarray(self.mu_pos), np.asarray(self.mu_neg)
        if self.label_convention is LabelConvention.FLIPPED:
            return neg, pos
        return pos, neg

    def flip(self) -> "GaussianClassTask":
        flipped = (
            LabelConvention.NORMAL
            if self.label_convention is LabelConvention.FLIPPED
            else LabelConvention.FLIPPED
        )
        return replace(self, label_convention=flipped)


def sample(task: GaussianClassTask, rng: np.random.Generator, n: int, t: int = 0) -> List[LabeledSample]:
    """Draw ``n`` labeled samples from ``task``, all stamped with time step ``t``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    X, y = sample_arrays(task, rng, n)
    return [LabeledSample(t=t, x=tuple(row), y=int(label)) for row, label in zip(X.tolist(), y)]


def sample_arrays(task: GaussianClassTask, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Array form of :func:`sample`: returns X of shape (n, d) and labels in {+1, -1}."""
    mu_pos, mu_neg = task.effective_means()
    y = np.where(rng.random(n) < task.prior_pos, 1, -1)
    centres = np.where((y == 1)[:, None], mu_pos, mu_neg)
    X = centres + task.sigma * rng.standard_normal((n, task.dim))
    return X, y


def bayes_hypothesis(task: GaussianClassTask) -> LinearHypothesis:
    """Closed-form Bayes-optimal linear classifier (LDA with shared isotropic covariance)."""
    mu_pos, mu_neg = task.effective_means()
    if np.array_equal(mu_pos, mu_neg):
        raise DegenerateTaskError(f"task '{task.name}' has mu_pos == mu_neg; no informative direction")

    # Degenerate priors make the log-odds infinite; the optimum is a constant classifier.
    if task.prior_pos in (0.0, 1.0):
        return LinearHypothesis(w=(0.0,) * task.dim, b=1.0 if task.prior_pos == 1.0 else -1.0)

    w = mu_pos - mu_neg
    b = -float(w @ (mu_pos + mu_neg)) / 2.0
    b += task.sigma ** 2 * math.log(task.prior_pos / (1.0 - task.prior_pos))
    return LinearHypothesis(w=tuple(w), b=b)


def bayes_risk(task: GaussianClassTask) -> float:
    """Bayes 0-1 risk for equal priors: Phi(-||mu_pos - mu_neg|| / (2 sigma))."""
    if task.prior_pos != 0.5:
        logger.debug(f"bayes_risk called with prior_pos={task.prior_pos}; formula assumes equal priors")
    gap = float(np.linalg.norm(np.asarray(task.mu_pos) - np.asarray(task.mu_neg)))
    return float(ndtr(-gap / (2.0 * task.sigma)))
