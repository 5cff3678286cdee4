from .adaptive import AdaptivePeriodLearner, adaptive_prospective_update
from .base import BaseLearner
from .factory import LEARNERS, build_learner
from .ftl import FollowTheLeader, ftl_update
from .ogd import OnlineGradientDescent, ogd_step
from .oracle import OraclePeriodLearner, oracle_prospective_update
from .reference import BayesReferenceLearner
from .solver import LogisticERM

__all__ = [
    "AdaptivePeriodLearner",
    "BaseLearner",
    "BayesReferenceLearner",
    "FollowTheLeader",
    "LEARNERS",
    "LogisticERM",
    "OnlineGradientDescent",
    "OraclePeriodLearner",
    "adaptive_prospective_update",
    "build_learner",
    "ftl_update",
    "ogd_step",
    "oracle_prospective_update",
]
