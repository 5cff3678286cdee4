import logging
from typing import Any, Dict, Optional

from ..classes.hypothesis import HypothesisSequence, LinearHypothesis
from ..tasks.gaussian import LabeledSample
from .base import BaseLearner
from .ftl import ftl_update
from .solver import LogisticERM

logger = logging.getLogger(__name__)


def oracle_prospective_update(learner: "OraclePeriodLearner", sample: LabeledSample) -> "OraclePeriodLearner":
    """Route ``sample`` to the ERM of its phase and re-solve that phase only."""
    ftl_update(learner.phase_erms[learner.phase_of(sample.t)], sample)
    return learner


class OraclePeriodLearner(BaseLearner):
    """Keeps one ERM per phase of a known schedule and alternates among them.

    A sample at time t trains the ERM of phase ((t - offset) // period) % n_phases;
    each phase uses the same solver contract as FTL.
    """

    def __init__(
        self,
        dim: int,
        period: int,
        n_phases: int,
        offset: int = 0,
        erm_params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(dim)
        if period < 1 or n_phases < 1:
            raise ValueError("period and n_phases must be positive")
        self.learner_type = "oracle"
        self.period = period
        self.n_phases = n_phases
        self.offset = offset
        self.erm_params = dict(erm_params or {})
        self.phase_erms = [LogisticERM(dim, **self.erm_params) for _ in range(n_phases)]

    def phase_of(self, t: int) -> int:
        return ((t - self.offset) // self.period) % self.n_phases

    def update(self, sample: LabeledSample) -> None:
        oracle_prospective_update(self, sample)

    def hypothesis_for(self, t: int) -> LinearHypothesis:
        return self.phase_erms[self.phase_of(t)].hypothesis

    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        self.check_consumed(t_prime)
        return HypothesisSequence(
            pieces=tuple(erm.hypothesis for erm in self.phase_erms),
            period=self.period,
            offset=self.offset,
        )

    def state_dict(self) -> Dict[str, Any]:
        return {
            "period": self.period,
            "n_phases": self.n_phases,
            "offset": self.offset,
            "phase_erms": [erm.to_dict() for erm in self.phase_erms],
        }

    def load_state(self, state: Dict[str, Any]) -> None:
        self.period = state["period"]
        self.n_phases = state["n_phases"]
        self.offset = state["offset"]
        self.phase_erms = [LogisticERM.from_dict(d) for d in state["phase_erms"]]

    @classmethod
    def _blank(cls, dim: int, state: Dict[str, Any]) -> "OraclePeriodLearner":
        return cls(dim, period=state["period"], n_phases=state["n_phases"])
