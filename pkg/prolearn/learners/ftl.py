import logging
from typing import Any, Dict, Optional

import numpy as np

from ..classes.hypothesis import HypothesisSequence, LinearHypothesis
from ..tasks.gaussian import LabeledSample
from .base import BaseLearner
from .solver import LogisticERM

logger = logging.getLogger(__name__)


def ftl_update(erm: LogisticERM, sample: LabeledSample) -> LogisticERM:
    """Append ``sample`` and re-solve the regularized cumulative logistic loss."""
    erm.add(np.asarray(sample.x)[None, :], np.array([sample.y]))
    erm.solve()
    return erm


class FollowTheLeader(BaseLearner):
    """Replays the ERM solution over every sample seen so far."""

    def __init__(self, dim: int, erm_params: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(dim)
        self.learner_type = "ftl"
        self.erm_params = dict(erm_params or {})
        self.erm = LogisticERM(dim, **self.erm_params)

    def update(self, sample: LabeledSample) -> None:
        ftl_update(self.erm, sample)

    def hypothesis_for(self, t: int) -> LinearHypothesis:
        return self.erm.hypothesis

    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        self.check_consumed(t_prime)
        return HypothesisSequence.constant(self.erm.hypothesis)

    def state_dict(self) -> Dict[str, Any]:
        return {"erm": self.erm.to_dict()}

    def load_state(self, state: Dict[str, Any]) -> None:
        self.erm = LogisticERM.from_dict(state["erm"])
