import logging
import uuid
from typing import Any, AsyncIterator, Dict, Optional

from langgraph.graph import StateGraph

from .classes.config import ExperimentConfig
from .classes.state import ExperimentState, InputState
from .nodes import Assessor, ConfigLoader, Emitter, Simulator
from .services.mongodb import MongoDBService

logger = logging.getLogger(__name__)


def route_protocol(state: ExperimentState) -> str:
    return state["config"].protocol


class ExperimentGraph:
    def __init__(self, config: ExperimentConfig, run_id: Optional[str] = None,
                 mongodb: Optional[MongoDBService] = None):
        # Initialize InputState
        self.input_state = InputState(
            config=config,
            run_id=run_id or uuid.uuid4().hex[:12],
        )
        self.mongodb = mongodb

        # Initialize nodes
        self._init_nodes()
        self._build_workflow()

    def _init_nodes(self):
        """Initialize all workflow nodes"""
        self.loader = ConfigLoader()
        self.simulator = Simulator()
        self.assessor = Assessor()
        self.emitter = Emitter(mongodb=self.mongodb)

    def _build_workflow(self):
        """Configure the state graph workflow"""
        self.workflow = StateGraph(ExperimentState, input_schema=InputState)

        # Add nodes with their respective processing functions
        self.workflow.add_node("loader", self.loader.run)
        self.workflow.add_node("simulator", self.simulator.run)
        self.workflow.add_node("assessor", self.assessor.run)
        self.workflow.add_node("emitter", self.emitter.run)

        # Configure workflow edges
        self.workflow.set_entry_point("loader")
        self.workflow.set_finish_point("emitter")

        # Streaming runs simulate, frozen runs assess; both end in the emitter
        self.workflow.add_conditional_edges(
            "loader",
            route_protocol,
            {"streaming": "simulator", "frozen": "assessor"},
        )
        self.workflow.add_edge("simulator", "emitter")
        self.workflow.add_edge("assessor", "emitter")

    async def run(self, thread: Dict[str, Any]) -> AsyncIterator[Dict[str, Any]]:
        """Execute the experiment workflow"""
        compiled_graph = self.workflow.compile()

        async for state in compiled_graph.astream(
            self.input_state,
            thread
        ):
            yield state
