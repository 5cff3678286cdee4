"""Prospective learner that discovers the task schedule from its own errors.

Before it knows the schedule it predicts with a snapshot of the ERM fit on
the current segment (the samples since the last change-point). The snapshot
follows the segment fit while the recent error is low and is held fixed once
the error rises, so a new task keeps producing errors until it is detected.
Every sample is first scored by the active hypothesis, so the error window
is prequential. A change-point is declared when the mean error of a full
window exceeds the threshold; the window is then cleared, which enforces a
refractory gap of ``window`` steps. Once enough change-points exist the
learner estimates the period, the phase offset and the number of distinct
phases, then behaves like the oracle-period learner with those estimates.
"""

import logging
from collections import deque
from typing import Any, Deque, Dict, List, Optional, Tuple

import numpy as np

from ..classes.hypothesis import HypothesisSequence, LinearHypothesis
from ..tasks.gaussian import LabeledSample
from .base import BaseLearner
from .ftl import ftl_update
from .solver import LogisticERM

logger = logging.getLogger(__name__)

# change-points within this fraction of the period of a lattice point count as on it
PERIOD_TOLERANCE = 0.15
# errors kept for localising a change, in units of the detection window
TRAIL_WINDOWS = 4


def localise_change(errors: np.ndarray) -> int:
    """Index of the first element after the maximum-likelihood two-segment Bernoulli split."""
    n = len(errors)
    if n < 2:
        return 0
    cum = np.cumsum(errors)
    total = cum[-1]
    splits = np.arange(1, n)
    left_k, left_n = cum[:-1], splits
    right_k, right_n = total - left_k, n - splits

    def seg_loglik(k, m):
        p = k / m
        with np.errstate(divide="ignore", invalid="ignore"):
            ll = k * np.log(p) + (m - k) * np.log1p(-p)
        return np.nan_to_num(ll, nan=0.0)

    score = seg_loglik(left_k, left_n) + seg_loglik(right_k, right_n)
    # only splits where the error rate goes up explain a change to a new task
    score = np.where(right_k / right_n > left_k / left_n, score, -np.inf)
    if not np.isfinite(score).any():
        return 0
    return int(splits[np.argmax(score)])


def lattice_fit(
    change_points: np.ndarray, step: float, tolerance: float = PERIOD_TOLERANCE
) -> Tuple[np.ndarray, np.ndarray, float]:
    """Largest set of change-points lying on one lattice ``anchor + n * step``.

    Returns the lattice indices of the change-points on it, their mask, and
    their mean distance from the lattice as a fraction of ``step``. Among
    anchors holding equally many change-points the tightest fit wins.
    """
    best = (np.zeros(0), np.zeros(len(change_points), dtype=bool), np.inf)
    for anchor in change_points:
        n = np.round((change_points - anchor) / step)
        residual = np.abs(change_points - anchor - n * step)
        mask = residual <= tolerance * step
        spread = float(residual[mask].mean() / step)
        if (mask.sum(), -spread) > (best[1].sum(), -best[2]):
            best = (n[mask], mask, spread)
    return best


def estimate_period(change_points: List[int], resolution: int, tolerance: float = PERIOD_TOLERANCE) -> int:
    """Period of the change-points, rounded to ``resolution``.

    Candidates are the inter-change-point gaps rounded to ``resolution``. The
    candidate whose lattice holds the most change-points wins, then the one
    supported by the most gaps, then the one they sit closest to, then the
    smaller one. The winner is refined by a least-squares fit of the
    change-points on its lattice, so missed or spurious change-points and
    jitter in their location do not shift it.
    """
    points = np.sort(np.asarray(change_points, dtype=float))
    gaps = np.diff(points)
    if not len(gaps):
        raise ValueError("at least two change-points are needed to estimate a period")
    candidates = np.unique(np.maximum(np.round(gaps / resolution) * resolution, resolution))

    best_key, best = None, None
    for step in candidates:
        n, mask, spread = lattice_fit(points, step, tolerance)
        key = (int(mask.sum()), int(np.sum(np.abs(gaps - step) <= tolerance * step)), -spread)
        if best_key is None or key > best_key:
            best_key, best = key, (step, n, points[mask])

    step, n, on_lattice = best
    if len(np.unique(n)) >= 2:
        step = np.polyfit(n, on_lattice, 1)[0]
    return int(max(np.round(step / resolution) * resolution, resolution))


def estimate_offset(change_points: List[int], period: int) -> int:
    """Circular median of the change-points modulo the period."""
    residues = np.mod(np.asarray(change_points), period)
    centred = np.where(residues > period / 2, residues - period, residues)
    return int(np.round(np.median(centred))) % period


def smallest_repeat(labels: List[int]) -> int:
    """Smallest p with labels[i] == labels[i + p] for every i in range."""
    for p in range(1, len(labels) + 1):
        if all(labels[i] == labels[i + p] for i in range(len(labels) - p)):
            return p
    return len(labels)


class AdaptivePeriodLearner(BaseLearner):
    """Estimates (period, offset, phase count) online and then alternates per-phase ERMs."""

    def __init__(
        self,
        dim: int,
        window: int = 50,
        threshold: float = 0.4,
        agreement: float = 0.95,
        period_resolution: int = 10,
        min_change_points: int = 3,
        agreement_sample: int = 2000,
        erm_params: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(dim)
        self.learner_type = "adaptive"
        self.window = window
        self.threshold = threshold
        self.agreement = agreement
        self.period_resolution = period_resolution
        self.min_change_points = min_change_points
        self.agreement_sample = agreement_sample
        self.erm_params = dict(erm_params or {})

        self._xs: List[Tuple[float, ...]] = []
        self._ys: List[int] = []
        self._ts: List[int] = []
        self.errors: Deque[Tuple[int, int]] = deque(maxlen=window)
        self.trail: Deque[Tuple[int, int]] = deque(maxlen=TRAIL_WINDOWS * window)
        self.change_points: List[int] = []
        self.epoch_start = 0
        self.segment = LogisticERM(dim, **self.erm_params)
        self.segment_start = 0
        self.monitor = self.segment.hypothesis

        self.locked = False
        self.period: Optional[int] = None
        self.offset = 0
        self.n_phases = 1
        self.phase_erms: List[LogisticERM] = []

    def phase_of(self, t: int) -> int:
        return ((t - self.offset) // self.period) % self.n_phases

    def active_erm(self, t: int) -> LogisticERM:
        if self.locked:
            return self.phase_erms[self.phase_of(t)]
        return self.segment

    def hypothesis_for(self, t: int) -> LinearHypothesis:
        if self.locked:
            return self.phase_erms[self.phase_of(t)].hypothesis
        return self.monitor

    def windowed_error(self) -> Optional[float]:
        if len(self.errors) < self.window:
            return None
        return float(np.mean([e for _, e in self.errors]))

    def refresh_monitor(self) -> None:
        """Follow the segment fit unless a full window shows elevated error."""
        if self.locked:
            return
        error = self.windowed_error()
        if error is None or error <= self.threshold / 2:
            self.monitor = self.segment.hypothesis

    def update(self, sample: LabeledSample) -> None:
        adaptive_prospective_update(self, sample)

    def _history(self, mask: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
        X = np.asarray(self._xs, dtype=float).reshape(-1, self.dim)
        y = np.asarray(self._ys, dtype=float)
        if mask is None:
            return X, y
        return X[mask], y[mask]

    def _fit(self, mask: np.ndarray) -> LogisticERM:
        X, y = self._history(mask)
        return LogisticERM.fit(X, y, self.dim, **self.erm_params)

    def _declare_change(self, change_point: int, error: float) -> None:
        if self.locked:
            residue = (change_point - self.offset) % self.period
            drifted = min(residue, self.period - residue) <= PERIOD_TOLERANCE * self.period
            logger.warning(
                f"Change-point at t={change_point} contradicts period {self.period} "
                f"(windowed error {error:.2f}); re-estimating"
            )
            self.locked = False
            # near a predicted boundary the schedule drifted; elsewhere it changed
            if not drifted:
                self.epoch_start = len(self.change_points)
        else:
            logger.debug(f"Change-point at t={change_point} (windowed error {error:.2f})")
        self.change_points.append(change_point)
        self.errors.clear()
        self.trail.clear()

        ts = np.asarray(self._ts)
        self.segment = self._fit(ts >= change_point)
        self.segment_start = change_point
        self.monitor = self.segment.hypothesis

        recent = self.change_points[self.epoch_start:]
        if len(recent) >= self.min_change_points:
            self._lock(recent)

    def _agreement_inputs(self) -> np.ndarray:
        """Evenly strided subsample of the observed inputs."""
        X, _ = self._history()
        stride = max(1, len(X) // self.agreement_sample)
        return X[::stride]

    def _cluster(self, slot_masks: List[np.ndarray], inputs: np.ndarray) -> List[int]:
        """Label slots in order; a slot joins the cluster whose pooled fit agrees with it most."""
        labels: List[int] = []
        pooled: List[np.ndarray] = []
        representatives: List[np.ndarray] = []
        for mask in slot_masks:
            predictions = self._fit(mask).hypothesis.predict(inputs)
            agreements = [float(np.mean(predictions == rep)) for rep in representatives]
            if agreements and max(agreements) >= self.agreement:
                label = int(np.argmax(agreements))
                pooled[label] = pooled[label] | mask
                representatives[label] = self._fit(pooled[label]).hypothesis.predict(inputs)
            else:
                label = len(representatives)
                pooled.append(mask.copy())
                representatives.append(predictions)
            labels.append(label)
        return labels

    def _lock(self, change_points: List[int]) -> None:
        period = estimate_period(change_points, self.period_resolution)
        offset = estimate_offset(change_points, period)
        ts = np.asarray(self._ts)
        slots = (ts - offset) // period

        # one mask per well-observed slot, oldest first
        current_slot = (self._ts[-1] - offset) // period
        slot_ids, slot_masks = [], []
        for slot in np.unique(slots):
            mask = slots == slot
            if slot == current_slot or len(np.unique(ts[mask])) < period / 2:
                continue
            slot_ids.append(int(slot))
            slot_masks.append(mask)
        if len(slot_ids) < 2:
            return
        # slots must be contiguous for the repeat test to be meaningful
        if slot_ids != list(range(slot_ids[0], slot_ids[0] + len(slot_ids))):
            return

        labels = self._cluster(slot_masks, self._agreement_inputs())
        n_phases = smallest_repeat(labels)

        self.period, self.offset, self.n_phases = period, offset, n_phases
        phases = np.mod(slots, n_phases)
        self.phase_erms = [self._fit(phases == j) for j in range(n_phases)]
        self.locked = True
        self.errors.clear()
        self.trail.clear()
        logger.info(
            f"Locked schedule after {len(change_points)} change-points: "
            f"period={period}, offset={offset}, phases={n_phases}"
        )

    def emit_hypothesis_sequence(self, t_prime: int) -> HypothesisSequence:
        self.check_consumed(t_prime)
        if not self.locked:
            return HypothesisSequence.constant(self.monitor)
        return HypothesisSequence(
            pieces=tuple(erm.hypothesis for erm in self.phase_erms),
            period=self.period,
            offset=self.offset,
        )

    def state_dict(self) -> Dict[str, Any]:
        return {
            "params": {
                "window": self.window,
                "threshold": self.threshold,
                "agreement": self.agreement,
                "period_resolution": self.period_resolution,
                "min_change_points": self.min_change_points,
                "agreement_sample": self.agreement_sample,
                "erm_params": self.erm_params,
            },
            "history": {"x": [list(x) for x in self._xs], "y": self._ys, "t": self._ts},
            "errors": [list(e) for e in self.errors],
            "trail": [list(e) for e in self.trail],
            "change_points": self.change_points,
            "epoch_start": self.epoch_start,
            "segment": self.segment.to_dict(),
            "segment_start": self.segment_start,
            "monitor": self.monitor.to_dict(),
            "locked": self.locked,
            "period": self.period,
            "offset": self.offset,
            "n_phases": self.n_phases,
            "phase_erms": [erm.to_dict() for erm in self.phase_erms],
        }

    def load_state(self, state: Dict[str, Any]) -> None:
        params = state["params"]
        self.window = params["window"]
        self.threshold = params["threshold"]
        self.agreement = params["agreement"]
        self.period_resolution = params["period_resolution"]
        self.min_change_points = params["min_change_points"]
        self.agreement_sample = params["agreement_sample"]
        self.erm_params = dict(params["erm_params"])
        self._xs = [tuple(x) for x in state["history"]["x"]]
        self._ys = list(state["history"]["y"])
        self._ts = list(state["history"]["t"])
        self.errors = deque((tuple(e) for e in state["errors"]), maxlen=self.window)
        self.trail = deque((tuple(e) for e in state["trail"]), maxlen=TRAIL_WINDOWS * self.window)
        self.change_points = list(state["change_points"])
        self.epoch_start = state["epoch_start"]
        self.segment = LogisticERM.from_dict(state["segment"])
        self.segment_start = state["segment_start"]
        self.monitor = LinearHypothesis.from_dict(state["monitor"])
        self.locked = state["locked"]
        self.period = state["period"]
        self.offset = state["offset"]
        self.n_phases = state["n_phases"]
        self.phase_erms = [LogisticERM.from_dict(d) for d in state["phase_erms"]]


def adaptive_prospective_update(learner: AdaptivePeriodLearner, sample: LabeledSample) -> AdaptivePeriodLearner:
    """Score ``sample`` with the active hypothesis, learn from it, then test the error window."""
    h = learner.hypothesis_for(sample.t)
    mistake = int(h.predict(np.asarray(sample.x))[0] != sample.y)
    learner.errors.append((sample.t, mistake))
    learner.trail.append((sample.t, mistake))
    learner._xs.append(tuple(sample.x))
    learner._ys.append(int(sample.y))
    learner._ts.append(sample.t)
    ftl_update(learner.active_erm(sample.t), sample)

    error = learner.windowed_error()
    if error is not None and error > learner.threshold:
        times = [t for t, _ in learner.trail]
        split = localise_change(np.array([e for _, e in learner.trail], dtype=float))
        learner._declare_change(times[split], error)
    else:
        learner.refresh_monitor()
    return learner
