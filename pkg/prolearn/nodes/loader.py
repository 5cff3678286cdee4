import logging
from datetime import datetime
from pathlib import Path

from ..classes.state import ExperimentState, record_event, run_status
from ..tasks.sequence import build_sequence
from ..utils.io import atomic_write_text

logger = logging.getLogger(__name__)

RESOLVED_CONFIG = "config.resolved.json"


class ConfigLoader:
    """配置加载节点，负责解析实验任务序列并准备输出目录。

    执行以下操作：
    1. 根据场景构建任务序列
    2. 创建输出目录
    3. 回写完整解析后的配置，便于复现
    """

    async def load(self, state: ExperimentState) -> ExperimentState:
        """构建任务序列并回写解析后的配置。

        Args:
            state: 当前实验状态

        Returns:
            ExperimentState: 更新后的实验状态，包含任务序列和输出目录
        """
        config = state["config"]
        run_id = state.get("run_id")
        sequence = build_sequence(config)

        output_dir = Path(config.output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        echo_path = atomic_write_text(output_dir / RESOLVED_CONFIG, config.echo())

        logger.info(
            f"Loaded scenario '{config.scenario}' ({sequence.n_phases} phases, period {sequence.period}) "
            f"for {len(config.learners)} learners x {len(config.seeds)} seeds, protocol={config.protocol}"
        )
        if run_id:
            run_status[run_id]["status"] = "processing"
        record_event(run_id, {"type": "config_loaded", "output_dir": str(output_dir)})

        state["sequence"] = sequence
        state["output_dir"] = str(output_dir)
        state["started_at"] = datetime.now().isoformat()
        state["files"] = [str(echo_path)]
        return state

    async def run(self, state: ExperimentState) -> ExperimentState:
        return await self.load(state)
