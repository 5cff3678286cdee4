import logging
from typing import Any, Dict

import numpy as np

from ..classes.hypothesis import HypothesisSequence, LinearHypothesis
from ..tasks.gaussian import LabeledSample
from .base import BaseLearner
from .solver import augment, logistic_gradient

logger = logging.getLogger(__name__)


def ogd_step(theta: np.ndarray, sample: LabeledSample, eta: float) -> np.ndarray:
    """One logistic-loss gradient step on a single sample; returns the new (w, b)."""
    if eta < 0:
        raise ValueError(f"eta must be non-negative, got {eta}")
    grad = logistic_gradient(theta, augment(sample.x), np.array([float(sample.y)]))
    return theta - eta * grad


class OnlineGradientDescent(BaseLearner):
    """Constant step-size OGD on the logistic surrogate, starting from w = 0, b = 0."""

    def __init__(self, dim: int, eta: float = 0.05) -> None:
        super().__init__(dim)
        self.learner_type = "ogd"
        self.eta = eta
        self.theta = np.zeros(dim + 1)
        self.steps = 0

    def update(self, sample: LabeledSample) -> None:
        self.theta = ogd_step(self.theta, sample, self.eta)
        self.steps += 1

    def hypothesis_for(self, t: int) -> LinearHypothesis:
        return LinearHypothesis.from_theta(self.theta)

    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        self.check_consumed(t_prime)
        return HypothesisSequence.constant(LinearHypothesis.from_theta(self.theta))

    def state_dict(self) -> Dict[str, Any]:
        return {"eta": self.eta, "theta": self.theta.tolist(), "steps": self.steps}

    def load_state(self, state: Dict[str, Any]) -> None:
        self.eta = state["eta"]
        self.theta = np.asarray(state["theta"], dtype=float)
        self.steps = state["steps"]
