from typing import Any, Dict, Optional

from ..classes.hypothesis import HypothesisSequence, Piece
from ..tasks.gaussian import LabeledSample, bayes_hypothesis
from ..tasks.sequence import TaskSequence
from .base import BaseLearner


class BayesReferenceLearner(BaseLearner):
    """Control learner that ignores its data and always plays the per-task Bayes hypothesis."""

    def __init__(self, dim: int, sequence: Optional[TaskSequence] = None) -> None:
        super().__init__(dim)
        self.learner_type = "bayes"
        self.reference = (
            HypothesisSequence(
                pieces=tuple(bayes_hypothesis(task) for task in sequence.phases), period=sequence.period
            )
            if sequence is not None
            else None
        )

    def update(self, sample: LabeledSample) -> None:
        pass

    def hypothesis_for(self, t: int) -> Piece:
        return self.reference.at(t)

    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        self.check_consumed(t_prime)
        return self.reference

    def state_dict(self) -> Dict[str, Any]:
        return {"reference": self.reference.to_dict()}

    def load_state(self, state: Dict[str, Any]) -> None:
        self.reference = HypothesisSequence.from_dict(state["reference"])
