import logging
from typing import Dict, Type

from ..classes.config import AdaptiveSpec, BayesSpec, FTLSpec, LearnerSpec, OGDSpec, OracleSpec
from ..tasks.sequence import TaskSequence
from .adaptive import AdaptivePeriodLearner
from .base import BaseLearner
from .ftl import FollowTheLeader
from .ogd import OnlineGradientDescent
from .oracle import OraclePeriodLearner
from .reference import BayesReferenceLearner

logger = logging.getLogger(__name__)

LEARNERS: Dict[str, Type[BaseLearner]] = {
    "ogd": OnlineGradientDescent,
    "ftl": FollowTheLeader,
    "oracle": OraclePeriodLearner,
    "adaptive": AdaptivePeriodLearner,
    "bayes": BayesReferenceLearner,
}


def build_learner(spec: LearnerSpec, sequence: TaskSequence) -> BaseLearner:
    """Instantiate a fresh learner for ``sequence`` from its config entry.

    The oracle learner falls back to the sequence's true period and phase
    count when its spec leaves them unset.
    """
    dim = sequence.dim
    if isinstance(spec, OGDSpec):
        return OnlineGradientDescent(dim, eta=spec.eta)
    if isinstance(spec, FTLSpec):
        return FollowTheLeader(dim, erm_params=spec.erm.model_dump())
    if isinstance(spec, OracleSpec):
        return OraclePeriodLearner(
            dim,
            period=spec.period or sequence.period,
            n_phases=spec.n_phases or sequence.n_phases,
            offset=spec.offset,
            erm_params=spec.erm.model_dump(),
        )
    if isinstance(spec, AdaptiveSpec):
        return AdaptivePeriodLearner(
            dim,
            window=spec.window,
            threshold=spec.threshold,
            agreement=spec.agreement,
            period_resolution=spec.period_resolution,
            min_change_points=spec.min_change_points,
            agreement_sample=spec.agreement_sample,
            erm_params=spec.erm.model_dump(),
        )
    if isinstance(spec, BayesSpec):
        return BayesReferenceLearner(dim, sequence=sequence)
    raise ValueError(f"unsupported learner spec: {spec!r}")
