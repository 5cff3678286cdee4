from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

from typing_extensions import NotRequired, Required, TypedDict

from .config import ExperimentConfig


class InputState(TypedDict, total=False):
    config: Required[ExperimentConfig]
    run_id: NotRequired[str]


class ExperimentState(InputState, total=False):
    sequence: Any
    output_dir: str
    started_at: str
    traces: Dict[int, Any]
    reports: List[Any]
    files: List[str]
    result: Any


@dataclass
class RunResult:
    """Everything one experiment run produced.

    ``traces`` maps each seed to the risk trace of every learner on that
    seed's stream (streaming protocol); ``reports`` holds one report per
    (learner, reference) pair (frozen protocol).
    """

    config: ExperimentConfig
    run_id: str
    version: str
    output_dir: Path
    traces: Dict[int, Any] = field(default_factory=dict)
    reports: List[Any] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)
    events: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def protocol(self) -> str:
        return self.config.protocol

    @property
    def learners(self) -> List[str]:
        return [spec.id for spec in self.config.learners]

    def to_document(self) -> Dict[str, Any]:
        """Summary record for the run registry; traces are referenced by file, not embedded."""
        return {
            "run_id": self.run_id,
            "version": self.version,
            "protocol": self.protocol,
            "scenario": self.config.scenario,
            "learners": self.learners,
            "seeds": list(self.config.seeds),
            "config": self.config.model_dump(mode="json"),
            "reports": [report.model_dump(mode="json") for report in self.reports],
            "metadata": self.metadata,
            "files": [path.name for path in self.files],
        }


# Per-process status of in-flight runs; execute() drops an entry once its run ends
run_status = defaultdict[str, Dict[str, Any]](lambda: {
    "status": "pending",
    "current_step": None,
    "error": None,
    "events": [],
    "last_update": datetime.now().isoformat(),
})


def record_event(run_id: str, event: Dict[str, Any]) -> None:
    if run_id:
        run_status[run_id]["events"].append(event)
        run_status[run_id]["last_update"] = datetime.now().isoformat()
