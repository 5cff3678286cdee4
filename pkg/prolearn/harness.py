import asyncio
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from .classes.config import ExperimentConfig, validate_config
from .classes.errors import ConfigError
from .classes.state import RunResult, run_status
from .graph import ExperimentGraph
from .services.mongodb import MongoDBService, mongodb_from_env

logger = logging.getLogger(__name__)

REPRODUCTION_LEARNERS = {
    "streaming": ["ogd", "ftl", "oracle", "adaptive"],
    "frozen": ["ogd", "ftl", "oracle"],
}


async def execute(
    config: ExperimentConfig,
    run_id: Optional[str] = None,
    mongodb: Optional[MongoDBService] = None,
) -> RunResult:
    """Run the experiment graph to completion and return the emitted result."""
    graph = ExperimentGraph(config, run_id=run_id, mongodb=mongodb)
    run_id = graph.input_state["run_id"]
    if mongodb:
        try:
            mongodb.create_run(run_id, config.model_dump(mode="json"))
        except Exception as e:
            logger.warning(f"Failed to register run {run_id} in MongoDB: {e}")

    final_state: Dict[str, Any] = {}
    try:
        # Stream through the graph and update progress
        async for state in graph.run(thread={}):
            final_state.update(state)
            node_name = list(state.keys())[0] if state else "unknown"
            logger.debug(f"Node completed: {node_name}")
            run_status[run_id].update({
                "current_step": node_name,
                "last_update": datetime.now().isoformat(),
            })
    except Exception as e:
        run_status[run_id].update({"status": "failed", "error": str(e)})
        if mongodb:
            try:
                mongodb.update_run(run_id, status="failed", error=str(e))
            except Exception as db_error:
                logger.warning(f"Failed to mark run {run_id} as failed in MongoDB: {db_error}")
        raise
    finally:
        status = run_status.pop(run_id, {})

    result = final_state["emitter"]["result"]
    result.events = list(status.get("events", []))
    return result


def _require_protocol(config: ExperimentConfig, protocol: str) -> None:
    if config.protocol != protocol:
        raise ConfigError(f"expected protocol '{protocol}', got '{config.protocol}'", field="protocol")


def run_streaming(config: ExperimentConfig, mongodb: Optional[MongoDBService] = None) -> RunResult:
    """Streaming protocol: every learner keeps learning while its current risk is recorded."""
    _require_protocol(config, "streaming")
    return asyncio.run(execute(config, mongodb=mongodb or mongodb_from_env()))


def run_learnability(config: ExperimentConfig, mongodb: Optional[MongoDBService] = None) -> RunResult:
    """Frozen protocol: prospective-learnability reports for every learner and reference."""
    _require_protocol(config, "frozen")
    return asyncio.run(execute(config, mongodb=mongodb or mongodb_from_env()))


def reproduction_config(
    scenario: Literal["fig3a", "fig3b"],
    protocol: Literal["streaming", "frozen"],
    output_dir: Union[str, Path],
    seeds: Optional[List[int]] = None,
    workers: Optional[int] = None,
    **overrides: Any,
) -> ExperimentConfig:
    """Built-in preset for the two alternating-Gaussian scenarios.

    Streaming presets run OGD, FTL and both prospective learners for 5000
    steps; frozen presets score OGD, FTL and the oracle learner at t'=3000
    against both references up to T=8000.
    """
    document: Dict[str, Any] = {
        "scenario": scenario,
        "protocol": protocol,
        "learners": REPRODUCTION_LEARNERS[protocol],
        "output_dir": str(output_dir),
    }
    if protocol == "frozen":
        document["evaluation"] = {
            "epsilon": 0.05,
            "delta": 0.1,
            "t_prime": 3000,
            "horizon_T": 8000,
            "n_trials": 20,
            "references": ["strong", "weak"],
        }
    if seeds:
        document["seeds"] = seeds
    if workers:
        document["workers"] = workers
    document.update({key: value for key, value in overrides.items() if value is not None})
    return validate_config(document)


def reproduce(
    scenario: Literal["fig3a", "fig3b"],
    output_dir: Union[str, Path],
    seeds: Optional[List[int]] = None,
    workers: Optional[int] = None,
    **overrides: Any,
) -> Dict[str, RunResult]:
    """Run both presets of ``scenario`` into ``<output_dir>/streaming`` and ``<output_dir>/frozen``."""
    output_dir = Path(output_dir)
    results = {}
    for protocol, runner in (("streaming", run_streaming), ("frozen", run_learnability)):
        config = reproduction_config(scenario, protocol, output_dir / protocol, seeds, workers, **overrides)
        logger.info(f"Reproducing {scenario} ({protocol}) into {config.output_dir}")
        results[protocol] = runner(config)
    return results
