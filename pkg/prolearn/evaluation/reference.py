import logging
from typing import Literal, Tuple

from ..classes.hypothesis import ChanceHypothesis, HypothesisSequence
from ..tasks.gaussian import bayes_hypothesis
from ..tasks.sequence import TaskSequence
from .risk import risk_of

logger = logging.getLogger(__name__)

ReferenceKind = Literal["strong", "weak"]
REFERENCE_KINDS = ("strong", "weak")


def reference_sequence(seq: TaskSequence, kind: ReferenceKind) -> HypothesisSequence:
    """Reference hypotheses against which a learner is judged.

    strong: the Bayes-optimal hypothesis of whichever task is active at t.
    weak: a symbolic chance-level hypothesis with risk 0.5 at every t.
    """
    if kind == "strong":
        return HypothesisSequence(pieces=tuple(bayes_hypothesis(task) for task in seq.phases), period=seq.period)
    if kind == "weak":
        return HypothesisSequence.constant(ChanceHypothesis())
    raise ValueError(f"unknown reference kind '{kind}', expected one of {REFERENCE_KINDS}")


def reference_risks(seq: TaskSequence, kind: ReferenceKind) -> Tuple[float, ...]:
    """Reference risk of each phase of ``seq``, in phase order."""
    reference = reference_sequence(seq, kind)
    return tuple(risk_of(reference.at(j * seq.period), task) for j, task in enumerate(seq.phases))


def succeeds(risk, reference_risk, epsilon: float, kind: ReferenceKind, two_sided: bool = False):
    """Success indicator of one trial at one step; scalars or numpy arrays.

    The strong test is |R - R*| < epsilon. The weak test is one-sided
    (R < 0.5 - epsilon) unless ``two_sided`` asks for |R - 0.5| < epsilon.
    """
    if kind == "weak" and not two_sided:
        return risk < reference_risk - epsilon
    return abs(risk - reference_risk) < epsilon
