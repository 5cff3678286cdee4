import asyncio
import logging
from typing import List

import numpy as np

from ..classes.config import LearnerSpec
from ..classes.state import ExperimentState, record_event
from ..evaluation.learnability import (
    assemble_report,
    check_parameters,
    default_horizon,
    run_trial,
    sweep_report,
    trial_seeds,
)
from ..evaluation.report import ProspectiveReport

logger = logging.getLogger(__name__)


class Assessor:
    """可学习性评估节点，负责在冻结协议下检验每个学习器。

    执行以下操作：
    1. 对每个学习器运行 n_trials 次独立试验 (截至 t' 的数据)
    2. 按每个参考序列 (strong / weak) 计算得分与结论
    3. 给定 t' 网格时估计最小可学习时间 t_bar
    """

    async def assess(self, state: ExperimentState) -> ExperimentState:
        """运行所有试验并生成前瞻性报告。

        Args:
            state: 当前实验状态

        Returns:
            ExperimentState: 更新后的实验状态，包含前瞻性报告列表
        """
        config = state["config"]
        sequence = state["sequence"]
        run_id = state.get("run_id")
        evaluation = config.evaluation

        grid = evaluation.t_prime_grid or [evaluation.t_prime]
        horizons = [evaluation.horizon_T or default_horizon(sequence, t) for t in grid]
        for t_prime, horizon in zip(grid, horizons):
            check_parameters(t_prime, horizon, evaluation.epsilon, evaluation.delta, evaluation.n_trials)
        seeds = trial_seeds(config.seeds, evaluation.n_trials)
        semaphore = asyncio.Semaphore(config.workers)

        async def run_one(spec: LearnerSpec, trial: int, seed_seq: np.random.SeedSequence):
            async with semaphore:
                risks = await asyncio.to_thread(run_trial, spec, sequence, grid, horizons, seed_seq)
                logger.debug(f"Finished {spec.id} trial {trial}")
                return risks

        reports: List[ProspectiveReport] = []
        for spec in config.learners:
            logger.info(f"Assessing {spec.id}: {evaluation.n_trials} trials at t' in {grid}")
            per_trial = await asyncio.gather(*[
                run_one(spec, trial, seed_seq) for trial, seed_seq in enumerate(seeds)
            ])
            for reference in evaluation.references:
                if evaluation.t_prime_grid:
                    report = sweep_report(
                        spec.id, sequence, per_trial, grid, horizons,
                        evaluation.epsilon, evaluation.delta, reference, evaluation.weak_two_sided,
                    )
                else:
                    report = assemble_report(
                        spec.id, sequence, np.vstack([trial[0] for trial in per_trial]), grid[0], horizons[0],
                        evaluation.epsilon, evaluation.delta, reference, evaluation.weak_two_sided,
                    )
                logger.info(report.summary())
                record_event(run_id, {
                    "type": "report",
                    "learner": spec.id,
                    "reference": reference,
                    "score": report.score,
                    "verdict": report.verdict,
                })
                reports.append(report)

        state["reports"] = reports
        return state

    async def run(self, state: ExperimentState) -> ExperimentState:
        return await self.assess(state)
