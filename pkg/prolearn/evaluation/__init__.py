from .learnability import (
    assemble_report,
    estimate_sample_complexity,
    frozen_risks,
    pac_score,
    prospective_score,
    run_trial,
    sweep_report,
    sweep_t_bar,
    trial_seeds,
)
from .reference import reference_risks, reference_sequence, succeeds
from .report import ProspectiveReport, SweepPoint
from .risk import RiskTrace, analytic_risk, mc_risk, risk_bands, risk_of

__all__ = [
    "ProspectiveReport",
    "RiskTrace",
    "SweepPoint",
    "analytic_risk",
    "assemble_report",
    "estimate_sample_complexity",
    "frozen_risks",
    "mc_risk",
    "pac_score",
    "prospective_score",
    "reference_risks",
    "reference_sequence",
    "risk_bands",
    "risk_of",
    "run_trial",
    "succeeds",
    "sweep_report",
    "sweep_t_bar",
    "trial_seeds",
]
