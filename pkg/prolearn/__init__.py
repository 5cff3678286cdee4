"""Simulation framework for prospective learning on periodic task sequences."""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

__version__ = "0.1.0"

# Set up logging
logger = logging.getLogger(__name__)

# Load environment variables from .env file
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    logger.info(f"Loading environment variables from {env_path}")
    load_dotenv(dotenv_path=env_path, override=False)
else:
    logger.debug(f".env file not found at {env_path}. Using system environment variables.")

if not os.getenv("MONGODB_URI"):
    logger.debug("MONGODB_URI is not set; runs will not be registered in MongoDB.")

from .graph import ExperimentGraph  # noqa: E402

__all__ = ["ExperimentGraph", "__version__"]
