"""Empirical prospective-learnability tests under the frozen protocol.

A trial trains a fresh learner on the stream up to t', freezes it into a
hypothesis sequence and scores that sequence on every later step up to
the horizon. Trials draw their streams from ``SeedSequence(seed).spawn``
so the same trial index sees the same data for every learner, and a
trial evaluated at several t' shares one stream prefix.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..classes.config import learner_spec
from ..classes.errors import ConfigError
from ..classes.hypothesis import HypothesisSequence
from ..learners.factory import build_learner
from ..tasks.gaussian import GaussianClassTask
from ..tasks.sequence import TaskSequence, stream_samples
from .reference import ReferenceKind, reference_risks, succeeds
from .report import ProspectiveReport, SweepPoint, passes
from .risk import risk_of

logger = logging.getLogger(__name__)

HORIZON_CYCLES = 10


def default_horizon(seq: TaskSequence, t_prime: int) -> int:
    return t_prime + HORIZON_CYCLES * seq.cycle


def trial_seeds(seed: Union[int, Sequence[int]], n_trials: int) -> List[np.random.SeedSequence]:
    """Independent trial streams; a list of seeds is used jointly as the entropy of the root."""
    entropy = seed if isinstance(seed, int) else [int(s) for s in seed]
    return np.random.SeedSequence(entropy).spawn(n_trials)


def check_parameters(t_prime: int, horizon_T: int, epsilon: float, delta: float, n_trials: int) -> None:
    if t_prime < 0:
        raise ConfigError("t_prime must be non-negative", field="t_prime")
    if horizon_T <= t_prime:
        raise ConfigError(f"horizon_T ({horizon_T}) must be greater than t_prime ({t_prime})", field="horizon_T")
    if not epsilon > 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}", field="epsilon")
    if not 0 < delta < 1:
        raise ConfigError(f"delta must lie in (0, 1), got {delta}", field="delta")
    if n_trials < 1:
        raise ConfigError(f"n_trials must be at least 1, got {n_trials}", field="n_trials")


def future_steps(t_prime: int, horizon_T: int) -> np.ndarray:
    return np.arange(t_prime + 1, horizon_T + 1)


def frozen_risks(hypotheses: HypothesisSequence, seq: TaskSequence, t_prime: int, horizon_T: int) -> np.ndarray:
    """Risk of the frozen sequence at every t in (t_prime, horizon_T]."""
    ts = future_steps(t_prime, horizon_T)
    table = np.array([[risk_of(piece, task) for task in seq.phases] for piece in hypotheses.pieces])
    piece_index = ((ts - hypotheses.offset) // hypotheses.period) % len(hypotheses.pieces)
    task_index = (ts // seq.period) % seq.n_phases
    return table[piece_index, task_index]


def reference_trace(seq: TaskSequence, kind: ReferenceKind, t_prime: int, horizon_T: int) -> np.ndarray:
    ts = future_steps(t_prime, horizon_T)
    return np.asarray(reference_risks(seq, kind))[(ts // seq.period) % seq.n_phases]


def run_trial(
    spec,
    seq: TaskSequence,
    t_primes: Sequence[int],
    horizons: Sequence[int],
    seed_seq: np.random.SeedSequence,
) -> List[np.ndarray]:
    """Stream one trial once and freeze the learner at every t' in ``t_primes``.

    Returns one future-risk array per t', in the order given.
    """
    spec = learner_spec(spec)
    learner = build_learner(spec, seq)
    rng = np.random.default_rng(seed_seq)
    frozen = {}
    pending = dict(zip(t_primes, horizons))
    for samples in stream_samples(seq, rng, max(t_primes)):
        learner.observe(samples)
        t = samples[0].t
        if t in pending:
            hypotheses = learner.emit_hypothesis_sequence(t)
            frozen[t] = frozen_risks(hypotheses, seq, t, pending[t])
    return [frozen[t] for t in t_primes]


def assemble_report(
    learner_id: str,
    seq: TaskSequence,
    risks: np.ndarray,
    t_prime: int,
    horizon_T: int,
    epsilon: float,
    delta: float,
    reference: ReferenceKind,
    weak_two_sided: bool = False,
) -> ProspectiveReport:
    """Score an (n_trials, horizon_T - t_prime) risk matrix against a reference.

    The fraction of succeeding trials is taken per step first and then
    averaged over the steps.
    """
    risks = np.atleast_2d(risks)
    reference_risk = reference_trace(seq, reference, t_prime, horizon_T)[None, :]
    success = succeeds(risks, reference_risk, epsilon, reference, weak_two_sided)
    score = float(np.mean(np.mean(success, axis=0)))
    return ProspectiveReport(
        learner=learner_id,
        reference=reference,
        weak_two_sided=weak_two_sided,
        epsilon=epsilon,
        delta=delta,
        t_prime=t_prime,
        horizon_T=horizon_T,
        n_trials=risks.shape[0],
        n_t_prime=(t_prime + 1) * seq.samples_per_step,
        score=score,
        verdict=passes(score, delta),
        mean_risk=float(np.mean(risks)),
    )


def estimate_t_bar(points: Sequence[SweepPoint]) -> Optional[int]:
    """Smallest grid t' that passes together with every larger grid t'."""
    t_bar = None
    for point in reversed(points):
        if not point.verdict:
            break
        t_bar = point.t_prime
    return t_bar


def sweep_report(
    learner_id: str,
    seq: TaskSequence,
    per_trial: Sequence[Sequence[np.ndarray]],
    grid: Sequence[int],
    horizons: Sequence[int],
    epsilon: float,
    delta: float,
    reference: ReferenceKind,
    weak_two_sided: bool = False,
) -> ProspectiveReport:
    """Report at the largest grid t', carrying every grid point and the t-bar estimate."""
    reports = [
        assemble_report(
            learner_id,
            seq,
            np.vstack([trial[i] for trial in per_trial]),
            t_prime,
            horizon,
            epsilon,
            delta,
            reference,
            weak_two_sided,
        )
        for i, (t_prime, horizon) in enumerate(zip(grid, horizons))
    ]
    points = [
        SweepPoint(t_prime=r.t_prime, horizon_T=r.horizon_T, score=r.score, verdict=r.verdict) for r in reports
    ]
    return reports[-1].model_copy(update={"sweep": points, "t_bar_estimate": estimate_t_bar(points)})


def _run_trials(spec, seq, grid, horizons, seed, n_trials, workers) -> List[List[np.ndarray]]:
    seeds = trial_seeds(seed, n_trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda s: run_trial(spec, seq, grid, horizons, s), seeds))
    return [run_trial(spec, seq, grid, horizons, s) for s in seeds]


def prospective_score(
    spec,
    seq: TaskSequence,
    t_prime: int,
    horizon_T: Optional[int] = None,
    epsilon: float = 0.05,
    delta: float = 0.1,
    n_trials: int = 20,
    reference: ReferenceKind = "strong",
    seed: Union[int, Sequence[int]] = 0,
    weak_two_sided: bool = False,
    workers: int = 1,
) -> ProspectiveReport:
    """Frozen-protocol learnability score of one learner at one t'.

    Args:
        spec: learner kind, mapping or spec object
        seq: task sequence generating the data and the future tasks
        t_prime: last time step whose samples the learner may see
        horizon_T: last evaluated time step; defaults to t' plus ten cycles
        epsilon: precision of the reference test
        delta: confidence; the verdict passes iff score >= 1 - delta
        n_trials: independent data streams
        reference: "strong" (per-task Bayes) or "weak" (chance)
        seed: root of the trial seed tree
        weak_two_sided: use |R - 0.5| < epsilon for the weak test
        workers: threads used to run trials

    Returns:
        ProspectiveReport: score and verdict for this (learner, reference)
    """
    spec = learner_spec(spec)
    horizon_T = default_horizon(seq, t_prime) if horizon_T is None else horizon_T
    check_parameters(t_prime, horizon_T, epsilon, delta, n_trials)
    logger.info(f"Scoring {spec.id} at t'={t_prime}, T={horizon_T} over {n_trials} trials ({reference} reference)")

    per_trial = _run_trials(spec, seq, [t_prime], [horizon_T], seed, n_trials, workers)
    report = assemble_report(
        spec.id, seq, np.vstack([trial[0] for trial in per_trial]), t_prime, horizon_T,
        epsilon, delta, reference, weak_two_sided,
    )
    logger.info(report.summary())
    return report


def sweep_t_bar(
    spec,
    seq: TaskSequence,
    t_prime_grid: Sequence[int],
    horizon_T: Optional[int] = None,
    epsilon: float = 0.05,
    delta: float = 0.1,
    n_trials: int = 20,
    reference: ReferenceKind = "strong",
    seed: Union[int, Sequence[int]] = 0,
    weak_two_sided: bool = False,
    workers: int = 1,
) -> ProspectiveReport:
    """Re-run the frozen test at every grid t' and estimate the smallest passing t'."""
    grid = list(t_prime_grid)
    if not grid:
        raise ConfigError("t_prime grid must not be empty", field="t_prime_grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("t_prime grid must be strictly ascending", field="t_prime_grid")
    spec = learner_spec(spec)
    horizons = [default_horizon(seq, t) if horizon_T is None else horizon_T for t in grid]
    for t_prime, horizon in zip(grid, horizons):
        check_parameters(t_prime, horizon, epsilon, delta, n_trials)
    logger.info(f"Sweeping {spec.id} over t' in {grid} ({reference} reference)")

    per_trial = _run_trials(spec, seq, grid, horizons, seed, n_trials, workers)
    report = sweep_report(spec.id, seq, per_trial, grid, horizons, epsilon, delta, reference, weak_two_sided)
    logger.info(report.summary())
    return report


def pac_score(
    spec,
    task: GaussianClassTask,
    n_samples: int,
    epsilon: float = 0.05,
    delta: float = 0.1,
    n_trials: int = 20,
    seed: Union[int, Sequence[int]] = 0,
    workers: int = 1,
) -> ProspectiveReport:
    """Retrospective (PAC) test: one fixed task, ``n_samples`` training samples.

    The score is the fraction of trials whose learned hypothesis is within
    epsilon of the Bayes risk.
    """
    if n_samples < 1:
        raise ConfigError(f"n_samples must be at least 1, got {n_samples}", field="n_samples")
    seq = TaskSequence.constant(task)
    return prospective_score(
        spec, seq, t_prime=n_samples - 1, horizon_T=n_samples, epsilon=epsilon, delta=delta,
        n_trials=n_trials, reference="strong", seed=seed, workers=workers,
    )


def estimate_sample_complexity(
    spec,
    task: GaussianClassTask,
    sample_grid: Sequence[int],
    epsilon: float = 0.05,
    delta: float = 0.1,
    n_trials: int = 20,
    seed: Union[int, Sequence[int]] = 0,
    workers: int = 1,
) -> Tuple[Optional[int], ProspectiveReport]:
    """Smallest grid sample size from which every larger grid size passes the PAC test.

    Returns the estimate and the sweep report over the grid (t' = n - 1).
    """
    grid = list(sample_grid)
    if not grid or min(grid) < 1:
        raise ConfigError("sample grid must hold positive sizes", field="sample_grid")
    seq = TaskSequence.constant(task)
    t_primes = [n - 1 for n in grid]
    if any(b <= a for a, b in zip(t_primes, t_primes[1:])):
        raise ConfigError("sample grid must be strictly ascending", field="sample_grid")
    spec = learner_spec(spec)
    horizons = [t + 1 for t in t_primes]
    for t_prime, horizon in zip(t_primes, horizons):
        check_parameters(t_prime, horizon, epsilon, delta, n_trials)

    per_trial = _run_trials(spec, seq, t_primes, horizons, seed, n_trials, workers)
    report = sweep_report(spec.id, seq, per_trial, t_primes, horizons, epsilon, delta, "strong")
    n_hat = None if report.t_bar_estimate is None else report.t_bar_estimate + 1
    logger.info(f"Empirical sample complexity of {spec.id}: {n_hat if n_hat is not None else 'not reached'}")
    return n_hat, report
