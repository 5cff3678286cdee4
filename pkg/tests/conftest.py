import numpy as np
import pytest

from prolearn.tasks import TaskSequence, fig3a, fig3b, stream_samples
from prolearn.tasks.sequence import task_a

ENV_VARS = ("PROLEARN_OUTPUT_DIR", "PROLEARN_WORKERS", "PROLEARN_LOG_LEVEL", "MONGODB_URI")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def short_fig3a() -> TaskSequence:
    return fig3a(period=20)


@pytest.fixture
def short_fig3b() -> TaskSequence:
    return fig3b(period=20)


@pytest.fixture
def constant_seq() -> TaskSequence:
    return TaskSequence.constant(task_a(), period=20)


@pytest.fixture
def stream():
    """Materialised samples of steps 0..until of ``seq`` for a given seed."""

    def _stream(seq: TaskSequence, until: int, seed: int = 0):
        return list(stream_samples(seq, np.random.default_rng(seed), until))

    return _stream


@pytest.fixture
def small_streaming_doc(tmp_path):
    return {
        "scenario": "fig3a",
        "period": 20,
        "horizon": 60,
        "learners": ["ogd", "ftl", "oracle"],
        "seeds": [1, 2],
        "output_dir": str(tmp_path / "streaming"),
        "plot_stride": 5,
    }


@pytest.fixture
def small_frozen_doc(tmp_path):
    return {
        "scenario": "fig3a",
        "period": 20,
        "protocol": "frozen",
        "learners": ["bayes", "ogd"],
        "seeds": [7],
        "evaluation": {
            "t_prime": 40,
            "horizon_T": 120,
            "n_trials": 3,
            "references": ["strong", "weak"],
        },
        "output_dir": str(tmp_path / "frozen"),
    }
