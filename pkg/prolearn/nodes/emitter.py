import logging
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from .. import __version__
from ..classes.state import ExperimentState, RunResult, record_event, run_status
from ..evaluation.risk import risk_bands
from ..services.mongodb import MongoDBService
from ..services.pdf_service import PDFService
from ..utils.io import atomic_write_frame, atomic_write_json, atomic_write_text
from ..utils.markdown import render_summary

logger = logging.getLogger(__name__)


def emit_plot_data(result: RunResult, output_dir: Optional[Union[str, Path]] = None) -> List[Path]:
    """Write plot-ready CSV files for a finished run.

    Streaming runs get ``plot_{learner}.csv`` (t, median, q25, q75 across
    seeds, every ``plot_stride``-th step). Frozen runs with a t' grid get
    ``sweep_{learner}_{reference}.csv`` (t_prime, horizon_T, score, verdict).
    """
    output_dir = Path(output_dir or result.output_dir)
    paths = []
    if result.traces:
        for learner in result.learners:
            bands = risk_bands(result.traces, learner, stride=result.config.plot_stride)
            paths.append(atomic_write_frame(output_dir / f"plot_{learner}.csv", bands))
    for report in result.reports:
        if report.sweep:
            sweep = pd.DataFrame([point.model_dump() for point in report.sweep])
            sweep["verdict"] = sweep["verdict"].astype(int)
            paths.append(atomic_write_frame(output_dir / f"sweep_{report.learner}_{report.reference}.csv", sweep))
    logger.info(f"Wrote {len(paths)} plot data files to {output_dir}")
    return paths


class Emitter:
    """输出节点，负责把运行结果写入输出目录。

    执行以下操作：
    1. 写出每个种子的风险轨迹 CSV 和绘图数据
    2. 写出前瞻性报告 JSON、summary.md (可选 PDF) 和 metadata.json
    3. 配置了 MongoDB 时登记运行摘要
    """

    def __init__(self, mongodb: Optional[MongoDBService] = None) -> None:
        self.mongodb = mongodb

    async def emit(self, state: ExperimentState) -> ExperimentState:
        """写出全部结果文件并构建 RunResult。

        Args:
            state: 当前实验状态

        Returns:
            ExperimentState: 更新后的实验状态，包含 RunResult
        """
        config = state["config"]
        run_id = state.get("run_id") or "local"
        output_dir = Path(state["output_dir"])
        result = RunResult(
            config=config,
            run_id=run_id,
            version=__version__,
            output_dir=output_dir,
            traces=state.get("traces") or {},
            reports=state.get("reports") or [],
        )
        files = [Path(path) for path in state.get("files", [])]

        for seed, trace in result.traces.items():
            path = output_dir / f"risk_trace_seed{seed}.csv"
            trace.to_csv(path)
            files.append(path)
        files += emit_plot_data(result, output_dir)
        for report in result.reports:
            path = output_dir / f"report_{report.learner}_{report.reference}.json"
            files.append(atomic_write_text(path, report.model_dump_json(indent=2) + "\n"))

        started_at = datetime.fromisoformat(state.get("started_at") or datetime.now().isoformat())
        finished_at = datetime.now()
        result.metadata = {
            "run_id": run_id,
            "version": __version__,
            "protocol": config.protocol,
            "started_at": started_at.isoformat(),
            "finished_at": finished_at.isoformat(),
            "wall_clock_seconds": (finished_at - started_at).total_seconds(),
        }
        files.append(output_dir / "summary.md")
        if config.emit_pdf:
            files.append(output_dir / "summary.pdf")
        files.append(output_dir / "metadata.json")
        result.files = files

        summary = render_summary(result)
        atomic_write_text(output_dir / "summary.md", summary)
        if config.emit_pdf:
            success, written = PDFService(output_dir).write_pdf(summary, "summary")
            if not success:
                logger.warning(f"Summary PDF skipped: {written}")
                result.files.remove(output_dir / "summary.pdf")
        atomic_write_json(output_dir / "metadata.json", result.metadata)
        logger.info(f"Run {run_id} wrote {len(result.files)} files to {output_dir}")

        if self.mongodb:
            try:
                self.mongodb.store_result(run_id, result.to_document())
            except Exception as e:
                logger.warning(f"Failed to store run {run_id} in MongoDB: {e}")

        run_status[run_id].update({"status": "completed", "last_update": finished_at.isoformat()})
        record_event(run_id, {"type": "complete", "files": len(result.files)})
        state["result"] = result
        state["files"] = [str(path) for path in result.files]
        return state

    async def run(self, state: ExperimentState) -> ExperimentState:
        return await self.emit(state)
