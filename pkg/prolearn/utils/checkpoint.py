"""Learner checkpoints as versioned JSON documents.

    {"format": "prolearn-checkpoint", "version": 1,
     "learner_type": "...", "dim": d, "last_t": t, "state": {...}}

The ``state`` payload is the learner's ``state_dict()``; every array is
stored as nested lists of floats so a restored learner continues
bit-identically.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from ..classes.errors import ProLearnError
from ..learners import LEARNERS, BaseLearner
from .io import atomic_write_json

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "prolearn-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(ProLearnError, ValueError):
    """Raised when a checkpoint document is malformed or of an unsupported version."""


def checkpoint_document(learner: BaseLearner) -> Dict[str, Any]:
    return {"format": CHECKPOINT_FORMAT, "version": CHECKPOINT_VERSION, **learner.to_dict()}


def save_checkpoint(learner: BaseLearner, path: Union[str, Path]) -> Path:
    path = atomic_write_json(path, checkpoint_document(learner))
    logger.info(f"Saved {learner.learner_type} checkpoint at t={learner.last_t} to {path}")
    return path


def restore_learner(document: Dict[str, Any]) -> BaseLearner:
    if document.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"not a prolearn checkpoint (format={document.get('format')!r})")
    if document.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {document.get('version')!r}")
    learner_type = document.get("learner_type")
    if learner_type not in LEARNERS:
        raise CheckpointError(f"unknown learner type {learner_type!r}")
    return LEARNERS[learner_type].from_dict(document)


def load_checkpoint(path: Union[str, Path]) -> BaseLearner:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CheckpointError(f"checkpoint {path} is not valid JSON: {e.msg} (line {e.lineno})") from e
    learner = restore_learner(document)
    logger.info(f"Restored {learner.learner_type} checkpoint at t={learner.last_t} from {path}")
    return learner
