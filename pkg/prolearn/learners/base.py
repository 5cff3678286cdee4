import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Sequence

from ..classes.errors import SolverConvergenceError
from ..classes.hypothesis import HypothesisSequence, Piece
from ..tasks.gaussian import LabeledSample

logger = logging.getLogger(__name__)


class BaseLearner(ABC):
    """Common surface of every online learner.

    Subclasses: OnlineGradientDescent, FollowTheLeader, OraclePeriodLearner,
    AdaptivePeriodLearner, BayesReferenceLearner.

    Shared behaviour:
    - consume the samples of one time step at a time
    - answer which hypothesis would be used at a query time
    - freeze into a hypothesis sequence for the future
    """

    def __init__(self, dim: int) -> None:
        self.dim = dim
        self.last_t = -1
        self.learner_type = "base_learner"

    @property
    def learner_type(self) -> str:
        if not hasattr(self, "_learner_type"):
            raise ValueError("Learner type not set by subclass")
        return self._learner_type

    @learner_type.setter
    def learner_type(self, value: str) -> None:
        self._learner_type = value

    def observe(self, samples: Sequence[LabeledSample]) -> None:
        """Consume every sample of one time step, tagging solver failures with the step."""
        for s in samples:
            try:
                self.update(s)
            except SolverConvergenceError as e:
                raise e.at_step(s.t) from e
            self.last_t = max(self.last_t, s.t)

    @abstractmethod
    def update(self, sample: LabeledSample) -> None:
        ...

    @abstractmethod
    def hypothesis_for(self, t: int) -> Piece:
        """Hypothesis the learner would apply at time ``t`` given the data seen so far."""

    @abstractmethod
    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        ...

    def check_consumed(self, t_prime: int) -> None:
        if self.last_t > t_prime:
            raise ValueError(f"learner has seen data up to t={self.last_t}, past t'={t_prime}")

    @abstractmethod
    def state_dict(self) -> Dict[str, Any]:
        ...

    @abstractmethod
    def load_state(self, state: Dict[str, Any]) -> None:
        ...

    def to_dict(self) -> Dict[str, Any]:
        return {"learner_type": self.learner_type, "dim": self.dim, "last_t": self.last_t, "state": self.state_dict()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BaseLearner":
        learner = cls._blank(data["dim"], data["state"])
        learner.load_state(data["state"])
        learner.last_t = data["last_t"]
        return learner

    @classmethod
    def _blank(cls, dim: int, state: Dict[str, Any]) -> "BaseLearner":
        return cls(dim)
