import json

import pytest

import application
from prolearn.classes.config import (
    AdaptiveSpec,
    ExperimentConfig,
    OGDSpec,
    learner_spec,
    parse_config,
    validate_config,
)
from prolearn.classes.errors import ConfigError


def test_minimal_config_resolves_defaults() -> None:
    config = parse_config("learners: [ogd]\n")
    assert isinstance(config.learners[0], OGDSpec)
    assert config.learners[0].eta == 0.05
    assert config.scenario == "fig3a"
    assert config.period == 500
    assert config.horizon == 5000
    assert config.seeds == list(range(1, 11))
    assert config.protocol == "streaming"
    assert config.risk.mode == "analytic"
    assert config.evaluation.epsilon == 0.05
    assert config.evaluation.delta == 0.1
    assert config.evaluation.n_trials == 20
    assert config.output_dir == "results"
    assert config.workers == 1


def test_learner_shorthand_and_parameters() -> None:
    config = parse_config(
        """
learners:
  - adaptive
  - {kind: ogd, name: ogd_fast, eta: 0.5}
  - {kind: oracle, erm: {l2: 0.01, solver: gradient}}
"""
    )
    adaptive, fast, oracle = config.learners
    assert isinstance(adaptive, AdaptiveSpec)
    assert adaptive.window == 50
    assert fast.id == "ogd_fast"
    assert fast.eta == 0.5
    assert oracle.id == "oracle"
    assert oracle.period is None
    assert oracle.erm.l2 == 0.01
    assert oracle.erm.solver == "gradient"


def test_non_positive_period_is_rejected() -> None:
    with pytest.raises(ConfigError, match="period must be positive") as exc:
        parse_config("learners: [ogd]\nperiod: 0\n")
    assert exc.value.field == "period"


def test_unknown_keys_are_rejected() -> None:
    with pytest.raises(ConfigError) as exc:
        parse_config("learners: [ogd]\nlearning_rate: 0.1\n")
    assert exc.value.field == "learning_rate"
    with pytest.raises(ConfigError, match="eta_max"):
        parse_config("learners:\n  - {kind: ogd, eta_max: 1.0}\n")


def test_unknown_learner_kind_is_rejected() -> None:
    with pytest.raises(ConfigError, match="learners"):
        parse_config("learners: [sgd]\n")


def test_malformed_yaml_reports_line() -> None:
    with pytest.raises(ConfigError, match="malformed YAML") as exc:
        parse_config("period: 10\nlearners: [ogd\nhorizon: 20\n")
    assert exc.value.line is not None
    assert str(exc.value).startswith("[line ")


def test_malformed_json_reports_line() -> None:
    with pytest.raises(ConfigError, match="malformed JSON") as exc:
        parse_config('{"learners": ["ogd"],\n}')
    assert exc.value.line == 2


def test_non_mapping_document_is_rejected() -> None:
    with pytest.raises(ConfigError, match="mapping"):
        parse_config("- ogd\n- ftl\n")


def test_config_files(tmp_path) -> None:
    yaml_path = tmp_path / "exp.yaml"
    yaml_path.write_text("scenario: fig3b\nlearners: [ftl]\nseeds: [3, 4]\n", encoding="utf-8")
    assert parse_config(yaml_path).seeds == [3, 4]
    assert parse_config(str(yaml_path)).scenario == "fig3b"

    json_path = tmp_path / "exp.json"
    json_path.write_text(json.dumps({"learners": ["oracle"], "horizon": 100}), encoding="utf-8")
    assert parse_config(json_path).horizon == 100

    with pytest.raises(ConfigError, match="not found"):
        parse_config(str(tmp_path / "missing.yaml"))


def test_echo_round_trips() -> None:
    config = parse_config(
        """
scenario: fig3b
learners: [ogd, {kind: adaptive, window: 40}]
protocol: frozen
evaluation: {t_prime: 100, horizon_T: 400, references: [strong, weak], t_prime_grid: [50, 100]}
"""
    )
    echoed = config.echo()
    assert parse_config(echoed) == config
    assert json.loads(echoed)["learners"][0]["eta"] == 0.05


def test_overrides_merge_nested_sections() -> None:
    config = parse_config(
        "learners: [ogd]\nrisk:\n  reference: weak\nseeds: [1]\n",
        risk={"mode": "monte_carlo", "mc_samples": 500},
        seeds=[5, 6],
        workers=None,
    )
    assert config.risk.reference == "weak"
    assert config.risk.mode == "monte_carlo"
    assert config.risk.mc_samples == 500
    assert config.seeds == [5, 6]
    assert config.workers == 1


def test_environment_defaults(monkeypatch) -> None:
    monkeypatch.setenv("PROLEARN_WORKERS", "3")
    monkeypatch.setenv("PROLEARN_OUTPUT_DIR", "/tmp/prolearn-runs")
    config = parse_config("learners: [ogd]\n")
    assert config.workers == 3
    assert config.output_dir == "/tmp/prolearn-runs"


def test_non_integer_worker_env_is_a_config_error(monkeypatch, tmp_path) -> None:
    monkeypatch.setenv("PROLEARN_WORKERS", "four")
    with pytest.raises(ConfigError, match="PROLEARN_WORKERS") as exc:
        parse_config("learners: [ogd]\n")
    assert exc.value.field == "workers"
    # an explicit value does not consult the environment
    assert parse_config("learners: [ogd]\nworkers: 2\n").workers == 2

    path = tmp_path / "exp.yaml"
    path.write_text("learners: [ogd]\n", encoding="utf-8")
    assert application.main(["validate", str(path)]) == 1


@pytest.mark.parametrize(
    "document, message",
    [
        ({"learners": []}, "learners must not be empty"),
        ({"learners": ["ogd", "ogd"]}, "unique"),
        ({"learners": ["ogd"], "scenario": "custom"}, "requires a non-empty 'tasks'"),
        ({"learners": ["ogd"], "seeds": [1, 1]}, "seeds must be unique"),
        ({"learners": ["ogd"], "evaluation": {"t_prime": 100, "horizon_T": 100}}, "horizon_T"),
        ({"learners": ["ogd"], "evaluation": {"t_prime_grid": [30, 10]}}, "ascending"),
        ({"learners": ["ogd"], "evaluation": {"delta": 1.5}}, "delta"),
        ({"learners": [{"kind": "ogd", "eta": -1}]}, "eta"),
    ],
)
def test_invalid_documents(document, message) -> None:
    with pytest.raises(ConfigError, match=message):
        validate_config(document)


def test_custom_tasks_must_share_dimension() -> None:
    with pytest.raises(ConfigError, match="same length"):
        validate_config({
            "learners": ["ogd"],
            "scenario": "custom",
            "tasks": [{"name": "bad", "mu_pos": [1.0, 0.0], "mu_neg": [-1.0]}],
        })


def test_learner_spec_coercion() -> None:
    assert learner_spec("ftl").kind == "ftl"
    assert learner_spec({"kind": "ogd", "eta": 0.2}).eta == 0.2
    spec = OGDSpec(eta=0.3)
    assert learner_spec(spec) is spec


def test_model_validate_accepts_spec_objects() -> None:
    config = ExperimentConfig(learners=[OGDSpec()], seeds=[1])
    assert config.learners[0].id == "ogd"
