import math

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError
from scipy.special import ndtr

from prolearn.classes.errors import ConfigError
from prolearn.classes.hypothesis import ChanceHypothesis, HypothesisSequence, LinearHypothesis
from prolearn.evaluation import (
    ProspectiveReport,
    RiskTrace,
    analytic_risk,
    estimate_sample_complexity,
    frozen_risks,
    mc_risk,
    pac_score,
    prospective_score,
    reference_risks,
    reference_sequence,
    risk_bands,
    run_trial,
    succeeds,
    sweep_t_bar,
    trial_seeds,
)
from prolearn.evaluation.learnability import assemble_report, estimate_t_bar, reference_trace
from prolearn.evaluation.report import SweepPoint
from prolearn.tasks import GaussianClassTask, TaskSequence, bayes_hypothesis, fig3a, fig3b
from prolearn.tasks.sequence import task_a

PHI_MINUS_SQRT2 = float(ndtr(-math.sqrt(2.0)))
PHI_MINUS_ONE = float(ndtr(-1.0))


def test_analytic_risk_reference_values() -> None:
    a, b = fig3a().phases
    assert analytic_risk(LinearHypothesis(w=(1.0, 1.0)), a) == pytest.approx(0.0786, abs=1e-4)
    assert analytic_risk(LinearHypothesis(w=(1.0, 1.0)), b) == pytest.approx(0.9214, abs=1e-4)
    assert analytic_risk(LinearHypothesis(w=(1.0, 0.0)), a) == pytest.approx(PHI_MINUS_ONE, abs=1e-12)
    assert analytic_risk(LinearHypothesis(w=(1.0, -1.0)), a) == pytest.approx(0.5, abs=1e-12)


def test_analytic_risk_of_constant_classifier() -> None:
    task = fig3a().phases[0]
    assert analytic_risk(LinearHypothesis(w=(0.0, 0.0), b=0.0), task) == 0.5
    skewed = GaussianClassTask(mu_pos=(1.0, 1.0), mu_neg=(-1.0, -1.0), prior_pos=0.8)
    assert analytic_risk(LinearHypothesis(w=(0.0, 0.0), b=1.0), skewed) == pytest.approx(0.2)
    assert analytic_risk(LinearHypothesis(w=(0.0, 0.0), b=-1.0), skewed) == pytest.approx(0.8)


def test_flipped_task_complements_risk() -> None:
    rng = np.random.default_rng(0)
    a, b = fig3a().phases
    for theta in rng.normal(scale=3.0, size=(1000, 3)):
        h = LinearHypothesis.from_theta(theta)
        assert analytic_risk(h, a) + analytic_risk(h, b) == pytest.approx(1.0, abs=1e-12)


def test_no_hypothesis_beats_chance_on_both_fig3a_phases() -> None:
    rng = np.random.default_rng(1)
    seq = fig3a()
    for theta in rng.normal(scale=3.0, size=(1000, 3)):
        h = LinearHypothesis.from_theta(theta)
        risks = [analytic_risk(h, task) for task in seq.phases]
        assert max(risks) >= 0.5 - 1e-12


def test_risk_is_invariant_to_positive_scaling() -> None:
    rng = np.random.default_rng(2)
    task = fig3b().phases[1]
    for theta in rng.normal(size=(50, 3)):
        h = LinearHypothesis.from_theta(theta)
        for alpha in (0.25, 4.0, 1024.0):
            assert analytic_risk(h.scaled(alpha), task) == analytic_risk(h, task)


def test_monte_carlo_risk_agrees_with_closed_form() -> None:
    rng = np.random.default_rng(3)
    n = 20_000
    task = fig3b().phases[0]
    for h in (bayes_hypothesis(task), LinearHypothesis(w=(1.0, 0.2), b=0.3), LinearHypothesis(w=(-0.5, 1.0))):
        exact = analytic_risk(h, task)
        se = math.sqrt(exact * (1 - exact) / n)
        assert abs(mc_risk(h, task, n, rng) - exact) < 4 * se


def test_monte_carlo_risk_edge_cases() -> None:
    rng = np.random.default_rng(0)
    assert mc_risk(ChanceHypothesis(), task_a(), 10, rng) == 0.5
    with pytest.raises(ValueError):
        mc_risk(LinearHypothesis(w=(1.0, 1.0)), task_a(), 0, rng)


def test_reference_sequences() -> None:
    seq = fig3a(period=30)
    strong = reference_sequence(seq, "strong")
    assert strong.period == 30
    assert strong.at(31) == bayes_hypothesis(seq.phases[1])
    assert reference_risks(seq, "strong") == pytest.approx((PHI_MINUS_SQRT2, PHI_MINUS_SQRT2))
    weak = reference_sequence(seq, "weak")
    assert weak.is_constant
    assert isinstance(weak.at(12345), ChanceHypothesis)
    assert reference_risks(seq, "weak") == (0.5, 0.5)
    with pytest.raises(ValueError):
        reference_sequence(seq, "median")


def test_success_tests() -> None:
    assert succeeds(0.09, 0.0786, 0.05, "strong")
    assert not succeeds(0.2, 0.0786, 0.05, "strong")
    assert succeeds(0.1, 0.5, 0.05, "weak")
    assert not succeeds(0.9, 0.5, 0.05, "weak")
    assert not succeeds(0.46, 0.5, 0.05, "weak")
    assert succeeds(0.5, 0.5, 0.05, "weak", two_sided=True)
    assert not succeeds(0.1, 0.5, 0.05, "weak", two_sided=True)
    mask = succeeds(np.array([0.1, 0.6]), np.array([0.5, 0.5]), 0.05, "weak")
    assert mask.tolist() == [True, False]


def test_frozen_bayes_sequence_matches_reference_trace() -> None:
    seq = fig3b(period=25)
    risks = frozen_risks(reference_sequence(seq, "strong"), seq, 10, 160)
    np.testing.assert_allclose(risks, reference_trace(seq, "strong", 10, 160))
    assert len(risks) == 150


def test_frozen_risks_of_misaligned_schedule() -> None:
    seq = fig3a(period=10)
    a, b = (bayes_hypothesis(task) for task in seq.phases)
    shifted = HypothesisSequence(pieces=(a, b), period=10, offset=5)
    risks = frozen_risks(shifted, seq, 0, 20)
    wrong = 1 - PHI_MINUS_SQRT2
    # the schedule lags the tasks by half a period
    assert risks[:4] == pytest.approx([wrong] * 4)
    assert risks[4:9] == pytest.approx([PHI_MINUS_SQRT2] * 5)
    assert risks[9:14] == pytest.approx([wrong] * 5)
    assert risks[14:19] == pytest.approx([PHI_MINUS_SQRT2] * 5)
    assert risks[19] == pytest.approx(wrong)


def test_bayes_learner_scores_one(short_fig3a) -> None:
    strong = prospective_score("bayes", short_fig3a, t_prime=50, n_trials=3, seed=1)
    assert strong.score == 1.0
    assert strong.verdict
    assert strong.horizon_T == 50 + 10 * short_fig3a.cycle
    assert strong.n_t_prime == 51
    weak = prospective_score("bayes", short_fig3a, t_prime=50, n_trials=3, reference="weak", seed=1)
    assert weak.score == 1.0


def test_constant_learners_fail_strong_on_label_flip(short_fig3a) -> None:
    report = prospective_score("ogd", short_fig3a, t_prime=60, horizon_T=200, n_trials=4, seed=2)
    # a constant hypothesis is right on at most one of the two tasks
    assert report.score < 0.6
    assert not report.verdict


def test_score_is_monotone_in_epsilon(short_fig3b) -> None:
    scores = [
        prospective_score("ogd", short_fig3b, t_prime=80, horizon_T=200, epsilon=eps, n_trials=4, seed=5).score
        for eps in (0.01, 0.05, 0.1, 0.3, 0.95)
    ]
    assert scores == sorted(scores)
    assert scores[-1] == 1.0


def test_trials_are_reproducible_and_independent_of_workers(short_fig3b) -> None:
    serial = prospective_score("ftl", short_fig3b, t_prime=40, horizon_T=100, n_trials=4, seed=9)
    threaded = prospective_score("ftl", short_fig3b, t_prime=40, horizon_T=100, n_trials=4, seed=9, workers=3)
    assert serial == threaded
    other = prospective_score("ftl", short_fig3b, t_prime=40, horizon_T=100, n_trials=4, seed=10)
    assert other.mean_risk != serial.mean_risk


@pytest.mark.parametrize("kind", ["ftl", "adaptive"])
def test_frozen_risks_do_not_depend_on_later_evaluation(kind, short_fig3a) -> None:
    seed = trial_seeds(3, 1)[0]
    (short,) = run_trial(kind, short_fig3a, [40], [120], seed)
    (longer,) = run_trial(kind, short_fig3a, [40], [200], seed)
    np.testing.assert_array_equal(short, longer[:80])
    # streaming on to a later t' must not alter what was frozen at t'=40
    at_40, at_80 = run_trial(kind, short_fig3a, [40, 80], [120, 160], seed)
    np.testing.assert_array_equal(at_40, short)
    assert len(at_80) == 80


def test_trial_seeds() -> None:
    first = [s.generate_state(2).tolist() for s in trial_seeds(4, 3)]
    again = [s.generate_state(2).tolist() for s in trial_seeds(4, 3)]
    assert first == again
    assert len({tuple(state) for state in first}) == 3
    listed = [s.generate_state(2).tolist() for s in trial_seeds([1, 2, 3], 3)]
    assert listed != first


def test_invalid_frozen_parameters(short_fig3a) -> None:
    with pytest.raises(ConfigError, match="horizon_T"):
        prospective_score("ogd", short_fig3a, t_prime=50, horizon_T=50)
    with pytest.raises(ConfigError, match="delta"):
        prospective_score("ogd", short_fig3a, t_prime=5, delta=1.0)
    with pytest.raises(ConfigError, match="epsilon"):
        prospective_score("ogd", short_fig3a, t_prime=5, epsilon=0.0)
    with pytest.raises(ConfigError, match="ascending"):
        sweep_t_bar("ogd", short_fig3a, [40, 20])


def test_pac_score_is_frozen_score_on_constant_sequence() -> None:
    task = task_a()
    pac = pac_score("ftl", task, n_samples=300, n_trials=8, seed=3)
    frozen = prospective_score(
        "ftl", TaskSequence.constant(task), t_prime=299, horizon_T=300, n_trials=8, seed=3
    )
    assert pac.score == frozen.score
    assert pac.verdict
    longer = prospective_score(
        "ftl", TaskSequence.constant(task), t_prime=299, horizon_T=400, n_trials=8, seed=3
    )
    assert longer.score == pytest.approx(pac.score)


def test_sample_complexity_estimate() -> None:
    n_hat, report = estimate_sample_complexity("ftl", task_a(), [1, 100, 300], n_trials=8, seed=4)
    assert n_hat is not None
    assert n_hat <= 100
    assert [point.t_prime for point in report.sweep] == [0, 99, 299]
    assert report.t_prime == 299


def test_sweep_estimates_t_bar(short_fig3a) -> None:
    bayes = sweep_t_bar("bayes", short_fig3a, [10, 30, 50], n_trials=2, seed=0)
    assert bayes.t_bar_estimate == 10
    assert len(bayes.sweep) == 3
    assert bayes.t_prime == 50
    ogd = sweep_t_bar("ogd", short_fig3a, [20, 40], horizon_T=150, n_trials=2, seed=0)
    assert ogd.t_bar_estimate is None


def test_estimate_t_bar_requires_every_later_point_to_pass() -> None:
    points = [
        SweepPoint(t_prime=t, horizon_T=1000, score=s, verdict=v)
        for t, s, v in [(10, 0.95, True), (20, 0.5, False), (30, 0.95, True), (40, 0.99, True)]
    ]
    assert estimate_t_bar(points) == 30
    points[-1] = SweepPoint(t_prime=40, horizon_T=1000, score=0.2, verdict=False)
    assert estimate_t_bar(points) is None


def test_assemble_report_averages_trials_per_step() -> None:
    seq = TaskSequence.constant(task_a())
    bayes = PHI_MINUS_SQRT2
    risks = np.array([
        [bayes, bayes, bayes, bayes],
        [0.5, bayes, 0.5, bayes],
    ])
    report = assemble_report("demo", seq, risks, 0, 4, 0.05, 0.4, "strong")
    assert report.score == pytest.approx(0.75)
    assert report.verdict
    assert report.n_trials == 2


def test_report_enforces_verdict_consistency() -> None:
    fields = dict(
        learner="ogd", reference="strong", epsilon=0.05, delta=0.1, t_prime=10, horizon_T=20,
        n_trials=2, n_t_prime=11, score=0.95, mean_risk=0.1,
    )
    assert ProspectiveReport(verdict=True, **fields).summary().endswith("PASS")
    with pytest.raises(ValidationError):
        ProspectiveReport(verdict=False, **fields)
    with pytest.raises(ValidationError):
        ProspectiveReport(verdict=True, **{**fields, "horizon_T": 10})


def test_risk_trace_csv_format(tmp_path) -> None:
    trace = RiskTrace()
    trace.append(0, "ogd", "A", 0.5, 0.5 - PHI_MINUS_SQRT2)
    trace.append(1, "ogd", "A", 0.25, 0.25 - PHI_MINUS_SQRT2)
    text = trace.to_csv(tmp_path / "trace.csv")
    assert text.splitlines() == [
        "t,learner,task,risk,risk_gap",
        "0,ogd,A,0.500000,0.421350",
        "1,ogd,A,0.250000,0.171350",
    ]
    assert "\r" not in text
    assert (tmp_path / "trace.csv").read_bytes() == text.encode("utf-8")
    restored = RiskTrace.read_csv(tmp_path / "trace.csv")
    assert restored.learners == ["ogd"]
    assert restored.frame["t"].tolist() == [0, 1]


def test_risk_trace_rejects_out_of_range_risk() -> None:
    with pytest.raises(ValueError, match="risk must lie"):
        RiskTrace().append(0, "ogd", "A", 1.5, 0.0)


def test_risk_trace_concat_keeps_learner_order() -> None:
    first, second = RiskTrace(), RiskTrace()
    for t in range(3):
        first.append(t, "ftl", "A", 0.1, 0.0)
        second.append(t, "ogd", "A", 0.2, 0.1)
    joined = RiskTrace.concat([first, second])
    assert len(joined) == 6
    assert joined.learners == ["ftl", "ogd"]
    assert joined.series("ogd").index.tolist() == [0, 1, 2]
    assert len(joined.for_learner("ftl")) == 3


def test_risk_bands() -> None:
    traces = {}
    for seed, level in [(1, 0.1), (2, 0.2), (3, 0.3), (4, 0.4), (5, 0.5)]:
        trace = RiskTrace()
        for t in range(6):
            trace.append(t, "ogd", "A", level, 0.0)
        traces[seed] = trace
    bands = risk_bands(traces, "ogd", stride=2)
    assert bands.columns.tolist() == ["t", "median", "q25", "q75"]
    assert bands["t"].tolist() == [0, 2, 4]
    assert bands["median"].tolist() == pytest.approx([0.3] * 3)
    assert bands["q25"].tolist() == pytest.approx([0.2] * 3)
    assert bands["q75"].tolist() == pytest.approx([0.4] * 3)

    single = risk_bands({1: traces[1]}, "ogd")
    pd.testing.assert_series_equal(single["median"], single["q25"], check_names=False)
    pd.testing.assert_series_equal(single["median"], single["q75"], check_names=False)
