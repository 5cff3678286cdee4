"""Instantaneous 0-1 risk of a hypothesis on a Gaussian task, and risk traces.

The analytic risk projects both class means on the normal of the decision
boundary:

    R(h) = p * Phi(-(w.mu_pos + b) / (sigma ||w||)) + (1 - p) * Phi((w.mu_neg + b) / (sigma ||w||))

with (mu_pos, mu_neg) taken after the task's label convention.
"""

import io
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd
from scipy.special import ndtr

from ..classes.hypothesis import ChanceHypothesis, LinearHypothesis, Piece
from ..tasks.gaussian import GaussianClassTask, sample_arrays
from ..utils.io import atomic_write_text

logger = logging.getLogger(__name__)

CHANCE_RISK = 0.5
CSV_FLOAT_FORMAT = "%.6f"


def analytic_risk(h: LinearHypothesis, task: GaussianClassTask) -> float:
    """Exact 0-1 risk of ``h`` on ``task``.

    A zero normal vector makes ``h`` a constant classifier: it predicts +1
    when b >= 0 and errs on the negative class only.
    """
    mu_pos, mu_neg = task.effective_means()
    w = np.asarray(h.w, dtype=float)
    norm = float(np.linalg.norm(w))
    p = task.prior_pos
    if norm == 0.0:
        return 1.0 - p if h.b >= 0.0 else p
    scale = task.sigma * norm
    risk = p * ndtr(-(float(w @ mu_pos) + h.b) / scale) + (1.0 - p) * ndtr((float(w @ mu_neg) + h.b) / scale)
    return float(risk)


def mc_risk(h: Piece, task: GaussianClassTask, n: int, rng: np.random.Generator) -> float:
    """Empirical 0-1 error of ``h`` on ``n`` fresh samples from ``task``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if isinstance(h, ChanceHypothesis):
        return CHANCE_RISK
    X, y = sample_arrays(task, rng, n)
    return float(np.mean(h.predict(X) != y))


def risk_of(piece: Piece, task: GaussianClassTask) -> float:
    if isinstance(piece, ChanceHypothesis):
        return CHANCE_RISK
    return analytic_risk(piece, task)


class RiskTrace:
    """Per-step risk records of one or more learners on one stream.

    Rows are (t, learner, task, risk, risk_gap); ``risk_gap`` is the
    learner's risk minus the reference risk at the same step.
    """

    COLUMNS = ["t", "learner", "task", "risk", "risk_gap"]

    def __init__(self, frame: Optional[pd.DataFrame] = None) -> None:
        self._rows: Dict[str, List] = {column: [] for column in self.COLUMNS}
        self._frame = frame[self.COLUMNS].reset_index(drop=True) if frame is not None else None

    def append(self, t: int, learner: str, task: str, risk: float, risk_gap: float) -> None:
        if not 0.0 <= risk <= 1.0:
            raise ValueError(f"risk must lie in [0, 1], got {risk} at t={t}")
        if self._frame is not None:
            self._rows = {column: self._frame[column].tolist() for column in self.COLUMNS}
            self._frame = None
        for column, value in zip(self.COLUMNS, (t, learner, task, risk, risk_gap)):
            self._rows[column].append(value)

    @property
    def frame(self) -> pd.DataFrame:
        if self._frame is None:
            self._frame = pd.DataFrame(self._rows, columns=self.COLUMNS).astype(
                {"t": "int64", "learner": "object", "task": "object", "risk": "float64", "risk_gap": "float64"}
            )
        return self._frame

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def learners(self) -> List[str]:
        return list(dict.fromkeys(self.frame["learner"]))

    def for_learner(self, learner: str) -> "RiskTrace":
        return RiskTrace(self.frame[self.frame["learner"] == learner])

    def series(self, learner: str) -> pd.Series:
        """Risk indexed by time step for one learner."""
        rows = self.frame[self.frame["learner"] == learner]
        return pd.Series(rows["risk"].to_numpy(), index=rows["t"].to_numpy(), name=learner)

    @classmethod
    def concat(cls, traces: Iterable["RiskTrace"]) -> "RiskTrace":
        frames = [trace.frame for trace in traces]
        if not frames:
            return cls()
        return cls(pd.concat(frames, ignore_index=True))

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        """Render the fixed-format CSV; also write it to ``path`` when given."""
        buffer = io.StringIO()
        self.frame.to_csv(buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        text = buffer.getvalue()
        if path is not None:
            atomic_write_text(path, text)
        return text

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "RiskTrace":
        return cls(pd.read_csv(path, dtype={"learner": str, "task": str}))


def risk_bands(traces: Dict[int, RiskTrace], learner: str, stride: int = 1) -> pd.DataFrame:
    """Median and interquartile band of one learner's risk across seeds.

    Rows are kept for every ``stride``-th recorded step; with a single seed
    the band collapses onto the median.
    """
    if stride < 1:
        raise ValueError(f"stride must be positive, got {stride}")
    per_seed = pd.concat(
        {seed: trace.series(learner) for seed, trace in sorted(traces.items())}, axis=1
    ).sort_index()
    per_seed = per_seed[per_seed.index % stride == 0]
    bands = pd.DataFrame(
        {
            "t": per_seed.index.to_numpy(),
            "median": per_seed.median(axis=1).to_numpy(),
            "q25": per_seed.quantile(0.25, axis=1).to_numpy(),
            "q75": per_seed.quantile(0.75, axis=1).to_numpy(),
        }
    )
    return bands
