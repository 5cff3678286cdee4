import numpy as np
import pytest

from prolearn.classes.config import learner_spec
from prolearn.classes.errors import SolverConvergenceError
from prolearn.classes.hypothesis import HypothesisSequence, LinearHypothesis
from prolearn.learners import (
    AdaptivePeriodLearner,
    BayesReferenceLearner,
    FollowTheLeader,
    LogisticERM,
    OnlineGradientDescent,
    OraclePeriodLearner,
    adaptive_prospective_update,
    build_learner,
    ogd_step,
    oracle_prospective_update,
)
from prolearn.learners.adaptive import (
    estimate_offset,
    estimate_period,
    lattice_fit,
    localise_change,
    smallest_repeat,
)
from prolearn.learners.solver import augment, logistic_gradient, logistic_loss
from prolearn.tasks import TaskSequence, bayes_hypothesis, fig3a, sample_arrays, stream_samples
from prolearn.tasks.gaussian import LabeledSample
from prolearn.tasks.sequence import task_a


def test_logistic_gradient_matches_finite_differences() -> None:
    rng = np.random.default_rng(0)
    X, y = sample_arrays(task_a(), rng, 40)
    X1 = augment(X)
    h = 1e-6
    for theta in rng.normal(size=(5, 3)):
        analytic = logistic_gradient(theta, X1, y)
        numeric = np.array([
            (logistic_loss(theta + h * e, X1, y) - logistic_loss(theta - h * e, X1, y)) / (2 * h)
            for e in np.eye(3)
        ])
        assert np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic) < 1e-5


def test_ogd_step_follows_negative_gradient() -> None:
    theta = np.array([0.5, -0.25, 0.1])
    s = LabeledSample(t=0, x=(1.0, 2.0), y=-1)
    expected = theta - 0.1 * logistic_gradient(theta, augment(s.x), np.array([-1.0]))
    np.testing.assert_allclose(ogd_step(theta, s, 0.1), expected)
    np.testing.assert_array_equal(ogd_step(theta, s, 0.0), theta)
    with pytest.raises(ValueError):
        ogd_step(theta, s, -0.1)


def test_ogd_starts_from_zero_hypothesis(short_fig3a, stream) -> None:
    learner = OnlineGradientDescent(2)
    assert learner.hypothesis_for(0) == LinearHypothesis.zeros(2)
    for samples in stream(short_fig3a, 9):
        learner.observe(samples)
    assert learner.steps == 10
    assert learner.last_t == 9
    emitted = learner.emit_hypothesis_sequence(9)
    assert emitted.is_constant
    assert emitted.at(10_000) == learner.hypothesis_for(10)


def test_erm_reaches_tolerance_and_never_increases_objective(short_fig3b, stream) -> None:
    learner = FollowTheLeader(2)
    for samples in stream(short_fig3b, 79):
        previous = learner.erm.theta.copy()
        learner.observe(samples)
        assert learner.erm.last_grad_norm <= learner.erm.tol
        assert learner.erm.objective() <= learner.erm.objective(previous) + 1e-7
    assert learner.erm.n_samples == 80


def test_newton_and_gradient_solvers_agree() -> None:
    X, y = sample_arrays(task_a(), np.random.default_rng(5), 200)
    newton = LogisticERM.fit(X, y, 2)
    gradient = LogisticERM.fit(X, y, 2, solver="gradient", max_iter=20_000)
    np.testing.assert_allclose(newton.theta, gradient.theta, atol=1e-4)


def test_erm_on_empty_buffer_is_zero() -> None:
    erm = LogisticERM.fit(np.empty((0, 2)), np.empty(0), 2)
    assert erm.hypothesis == LinearHypothesis.zeros(2)


def test_erm_fits_single_class_buffer() -> None:
    X = np.array([[1.0, 1.0], [2.0, 0.5]])
    erm = LogisticERM.fit(X, np.array([1.0, 1.0]), 2)
    assert (erm.hypothesis.predict(X) == 1).all()


def test_solver_failure_reports_step() -> None:
    learner = FollowTheLeader(2, erm_params={"solver": "gradient", "max_iter": 1})
    with pytest.raises(SolverConvergenceError) as exc:
        learner.observe([LabeledSample(t=12, x=(1.0, 0.5), y=1)])
    assert exc.value.step == 12
    assert exc.value.iterations == 1
    assert "step 12" in str(exc.value)


def test_unknown_solver_is_rejected() -> None:
    with pytest.raises(ValueError, match="unknown solver"):
        LogisticERM(2, solver="lbfgs")


def test_oracle_with_one_phase_equals_ftl(short_fig3a, stream) -> None:
    ftl = FollowTheLeader(2)
    oracle = OraclePeriodLearner(2, period=20, n_phases=1)
    for samples in stream(short_fig3a, 59, seed=11):
        ftl.observe(samples)
        oracle.observe(samples)
        np.testing.assert_array_equal(ftl.erm.theta, oracle.phase_erms[0].theta)
    assert ftl.emit_hypothesis_sequence(59).at(60) == oracle.emit_hypothesis_sequence(59).at(60)


def test_oracle_routes_samples_to_phase_erms(short_fig3a, stream) -> None:
    oracle = OraclePeriodLearner(2, period=20, n_phases=2)
    for samples in stream(short_fig3a, 59):
        oracle.observe(samples)
    assert [erm.n_samples for erm in oracle.phase_erms] == [40, 20]
    assert oracle.hypothesis_for(65) == oracle.phase_erms[1].hypothesis

    emitted = oracle.emit_hypothesis_sequence(59)
    assert emitted.period == 20
    assert len(emitted.pieces) == 2
    assert emitted.at(100) == oracle.phase_erms[1].hypothesis
    # phase A learns task A, phase B its label-flipped twin
    a_w = np.asarray(emitted.pieces[0].w)
    b_w = np.asarray(emitted.pieces[1].w)
    assert a_w @ np.array([1.0, 1.0]) > 0
    assert b_w @ np.array([1.0, 1.0]) < 0


def test_update_functions_match_observe(short_fig3a, stream) -> None:
    via_observe = OraclePeriodLearner(2, period=20, n_phases=2)
    via_function = OraclePeriodLearner(2, period=20, n_phases=2)
    adaptive = AdaptivePeriodLearner(2)
    for samples in stream(short_fig3a, 39, seed=5):
        via_observe.observe(samples)
        for s in samples:
            assert oracle_prospective_update(via_function, s) is via_function
            adaptive_prospective_update(adaptive, s)
    for a, b in zip(via_observe.phase_erms, via_function.phase_erms):
        np.testing.assert_array_equal(a.theta, b.theta)
    # every sample is scored before it is learned from
    assert len(adaptive.errors) == 40
    assert [t for t, _ in adaptive.errors] == list(range(40))


def test_oracle_offset_shifts_schedule() -> None:
    oracle = OraclePeriodLearner(2, period=10, n_phases=2, offset=5)
    assert oracle.phase_of(4) == 1
    assert oracle.phase_of(5) == 0
    assert oracle.phase_of(15) == 1


def test_emit_before_consuming_future_is_rejected(short_fig3a, stream) -> None:
    learner = FollowTheLeader(2)
    for samples in stream(short_fig3a, 9):
        learner.observe(samples)
    with pytest.raises(ValueError, match="past t'"):
        learner.emit_hypothesis_sequence(5)


def test_bayes_reference_learner_plays_per_task_optimum(short_fig3a) -> None:
    learner = BayesReferenceLearner(2, sequence=short_fig3a)
    assert learner.hypothesis_for(3) == bayes_hypothesis(short_fig3a.phases[0])
    assert learner.hypothesis_for(25) == bayes_hypothesis(short_fig3a.phases[1])
    emitted = learner.emit_hypothesis_sequence(0)
    assert isinstance(emitted, HypothesisSequence)
    assert emitted.period == 20


def test_localise_change_finds_error_jump() -> None:
    errors = np.array([0.0] * 30 + [1.0] * 20)
    assert localise_change(errors) == 30
    assert localise_change(np.array([1.0])) == 0
    # a drop in the error rate is not a change to a new task
    assert localise_change(np.array([1.0] * 30 + [0.0] * 20)) == 0


def test_period_and_offset_estimates() -> None:
    assert estimate_period([0, 500, 1000, 1510], resolution=10) == 500
    assert estimate_period([3, 501, 1004, 1502, 2001], resolution=10) == 500
    assert estimate_offset([3, 503, 1001], period=500) == 3
    assert estimate_offset([498, 1002, 1501], period=500) == 1


def test_period_estimate_tolerates_jitter_and_missed_or_spurious_points() -> None:
    assert estimate_period([0, 493, 1000], resolution=10) == 500
    assert estimate_period([0, 500, 1500, 2000], resolution=10) == 500
    assert estimate_period([0, 500, 760, 1000, 1500], resolution=10) == 500
    with pytest.raises(ValueError):
        estimate_period([10], resolution=10)


def test_lattice_fit_keeps_points_on_the_tightest_lattice() -> None:
    n, mask, spread = lattice_fit(np.array([0.0, 500.0, 760.0, 1000.0, 1500.0]), 500)
    assert mask.tolist() == [True, True, False, True, True]
    assert n.tolist() == [0, 1, 2, 3]
    assert spread == 0.0


def test_monitor_holds_while_window_error_is_elevated() -> None:
    learner = AdaptivePeriodLearner(2, window=10)
    X, y = sample_arrays(task_a(), np.random.default_rng(0), 50)
    learner.segment = LogisticERM.fit(X, y, 2)
    learner.refresh_monitor()
    assert learner.monitor == learner.segment.hypothesis

    held = learner.monitor
    learner.errors.extend((t, 1) for t in range(10))
    learner.segment = LogisticERM.fit(X, -y, 2)
    learner.refresh_monitor()
    assert learner.monitor == held
    assert learner.hypothesis_for(10) == held

    learner.errors.extend((t, 0) for t in range(10, 20))
    learner.refresh_monitor()
    assert learner.monitor == learner.segment.hypothesis


def fill_history(learner: AdaptivePeriodLearner, seq: TaskSequence, until: int, seed: int = 0) -> None:
    for samples in stream_samples(seq, np.random.default_rng(seed), until):
        for s in samples:
            learner._xs.append(tuple(s.x))
            learner._ys.append(s.y)
            learner._ts.append(s.t)


def test_slots_of_one_task_share_a_cluster() -> None:
    learner = AdaptivePeriodLearner(2)
    fill_history(learner, fig3a(period=300), 1799, seed=4)
    ts = np.asarray(learner._ts)
    masks = [ts // 300 == slot for slot in range(6)]
    assert learner._cluster(masks, learner._agreement_inputs()) == [0, 1, 0, 1, 0, 1]
    assert len(learner._agreement_inputs()) == 1800


def test_contradiction_near_a_boundary_keeps_the_epoch() -> None:
    learner = AdaptivePeriodLearner(2)
    fill_history(learner, fig3a(period=500), 1999)
    learner.change_points = [500, 1000, 1500]
    learner._lock(learner.change_points)
    assert learner.locked
    assert (learner.period, learner.offset, learner.n_phases) == (500, 0, 2)

    learner._declare_change(2010, 0.6)
    assert learner.epoch_start == 0
    assert learner.locked
    assert learner.period == 500

    learner._declare_change(2250, 0.6)
    assert learner.epoch_start == 4
    assert not learner.locked


def test_adaptive_locks_alternating_schedule(stream) -> None:
    seq = fig3a(period=200)
    learner = AdaptivePeriodLearner(2)
    for samples in stream(seq, 1399, seed=4):
        learner.observe(samples)
    assert learner.locked
    assert (learner.period, learner.n_phases) == (200, 2)
    emitted = learner.emit_hypothesis_sequence(1399)
    assert emitted.at(1400) != emitted.at(1600)


def test_smallest_repeat() -> None:
    assert smallest_repeat([0, 1, 0, 1, 0]) == 2
    assert smallest_repeat([0, 0, 0]) == 1
    assert smallest_repeat([0, 1, 2, 0, 1, 2]) == 3
    assert smallest_repeat([0, 1, 2]) == 3


def test_adaptive_on_constant_task_declares_no_change(stream) -> None:
    seq = TaskSequence.constant(task_a(), period=100)
    learner = AdaptivePeriodLearner(2)
    for samples in stream(seq, 599, seed=2):
        learner.observe(samples)
    assert learner.change_points == []
    assert not learner.locked
    assert learner.emit_hypothesis_sequence(599).is_constant


def test_adaptive_detects_label_flip(stream) -> None:
    seq = fig3a(period=200)
    learner = AdaptivePeriodLearner(2)
    for samples in stream(seq, 399, seed=4):
        learner.observe(samples)
    assert len(learner.change_points) == 1
    assert abs(learner.change_points[0] - 200) <= 25


def test_build_learner_uses_sequence_schedule(short_fig3b) -> None:
    oracle = build_learner(learner_spec("oracle"), short_fig3b)
    assert (oracle.period, oracle.n_phases, oracle.offset) == (20, 2, 0)
    custom = build_learner(learner_spec({"kind": "oracle", "period": 7, "n_phases": 3}), short_fig3b)
    assert (custom.period, custom.n_phases) == (7, 3)
    ogd = build_learner(learner_spec({"kind": "ogd", "eta": 0.5}), short_fig3b)
    assert isinstance(ogd, OnlineGradientDescent)
    assert ogd.eta == 0.5
    ftl = build_learner(learner_spec({"kind": "ftl", "erm": {"solver": "gradient"}}), short_fig3b)
    assert ftl.erm.solver == "gradient"
    adaptive = build_learner(learner_spec("adaptive"), short_fig3b)
    assert adaptive.window == 50
    assert adaptive.threshold == 0.4
