from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SweepPoint(BaseModel):
    t_prime: int
    horizon_T: int
    score: float
    verdict: bool


class ProspectiveReport(BaseModel):
    """Empirical learnability test of one learner against one reference.

    ``score`` is the time average over (t_prime, horizon_T] of the fraction
    of trials whose risk met the reference test; the verdict passes iff
    score >= 1 - delta.
    """

    model_config = ConfigDict(extra="forbid")

    learner: str
    protocol: Literal["frozen"] = "frozen"
    reference: Literal["strong", "weak"]
    weak_two_sided: bool = False
    epsilon: float = Field(gt=0)
    delta: float = Field(gt=0, lt=1)
    t_prime: int = Field(ge=0)
    horizon_T: int
    n_trials: int = Field(ge=1)
    n_t_prime: int = Field(ge=1)
    score: float = Field(ge=0, le=1)
    verdict: bool
    mean_risk: float = Field(ge=0, le=1)
    t_bar_estimate: Optional[int] = None
    sweep: List[SweepPoint] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "ProspectiveReport":
        if self.horizon_T <= self.t_prime:
            raise ValueError("horizon_T must be greater than t_prime")
        if self.verdict != passes(self.score, self.delta):
            raise ValueError("verdict must equal score >= 1 - delta")
        return self

    def summary(self) -> str:
        """One-line human-readable result."""
        outcome = "PASS" if self.verdict else "FAIL"
        line = (
            f"{self.learner} vs {self.reference}: score={self.score:.4f} "
            f"(eps={self.epsilon}, delta={self.delta}, t'={self.t_prime}, T={self.horizon_T}) {outcome}"
        )
        if self.sweep:
            line += f", t_bar={self.t_bar_estimate if self.t_bar_estimate is not None else 'none'}"
        return line


def passes(score: float, delta: float) -> bool:
    return score >= 1.0 - delta
