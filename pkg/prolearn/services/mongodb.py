import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import certifi
from pymongo import MongoClient

logger = logging.getLogger(__name__)


class MongoDBService:
    def __init__(self, uri: str, database: str = "prolearn"):
        # Use certifi for SSL certificate verification with updated options
        self.client = MongoClient(
            uri,
            tlsCAFile=certifi.where(),
            retryWrites=True,
            w='majority'
        )
        self.db = self.client.get_database(database)
        self.runs = self.db.runs

    def create_run(self, run_id: str, config: Dict[str, Any]) -> None:
        """Register a run before it starts."""
        now = datetime.now(timezone.utc)
        self.runs.insert_one({
            "run_id": run_id,
            "config": config,
            "status": "pending",
            "created_at": now,
            "updated_at": now,
        })

    def update_run(self, run_id: str,
                   status: Optional[str] = None,
                   error: Optional[str] = None) -> None:
        """Update the status of a run."""
        update_data: Dict[str, Any] = {"updated_at": datetime.now(timezone.utc)}
        if status:
            update_data["status"] = status
        if error:
            update_data["error"] = error

        self.runs.update_one(
            {"run_id": run_id},
            {"$set": update_data}
        )

    def store_result(self, run_id: str, document: Dict[str, Any]) -> None:
        """Attach the finished run summary (reports, metadata, file names) to its record."""
        self.runs.update_one(
            {"run_id": run_id},
            {"$set": {**document, "status": "completed", "updated_at": datetime.now(timezone.utc)}},
            upsert=True,
        )


def mongodb_from_env() -> Optional[MongoDBService]:
    """Run registry configured by MONGODB_URI, or None when unset or unreachable."""
    mongo_uri = os.getenv("MONGODB_URI")
    if not mongo_uri:
        return None
    try:
        service = MongoDBService(mongo_uri)
        logger.info("MongoDB integration enabled")
        return service
    except Exception as e:
        logger.warning(f"Failed to initialize MongoDB: {e}. Continuing without persistence.")
        return None
