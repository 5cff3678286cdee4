import asyncio
import logging
from typing import Dict, List, Tuple

import numpy as np

from ..classes.config import LearnerSpec, RiskConfig
from ..classes.state import ExperimentState, record_event
from ..evaluation.reference import reference_risks
from ..evaluation.risk import RiskTrace, mc_risk, risk_of
from ..learners.factory import build_learner
from ..tasks.sequence import TaskSequence, stream_samples

logger = logging.getLogger(__name__)


def simulate_run(spec: LearnerSpec, seq: TaskSequence, seed: int, risk: RiskConfig, horizon: int) -> RiskTrace:
    """Streaming protocol for one (learner, seed): predict, record the risk, then learn.

    At each step t the learner's current hypothesis is scored on the task
    active at t before the samples of step t are observed. The data stream
    depends only on the seed, so every learner sees the same samples.
    """
    data_seed, eval_seed = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(data_seed)
    eval_rng = np.random.default_rng(eval_seed)
    learner = build_learner(spec, seq)
    reference = reference_risks(seq, risk.reference)

    trace = RiskTrace()
    for samples in stream_samples(seq, rng, horizon - 1):
        t = samples[0].t
        task = seq.task_at(t)
        hypothesis = learner.hypothesis_for(t)
        if risk.mode == "monte_carlo":
            value = mc_risk(hypothesis, task, risk.mc_samples, eval_rng)
        else:
            value = risk_of(hypothesis, task)
        trace.append(t, spec.id, task.name, value, value - reference[seq.phase_index(t)])
        learner.observe(samples)
    return trace


class Simulator:
    """流式仿真节点，负责在每个 (学习器, 种子) 组合上运行流式协议。

    每个组合独立运行，并发数受配置中的 workers 限制；
    结果按 (学习器, 种子) 排序后汇总，输出与调度顺序无关。
    """

    async def simulate(self, state: ExperimentState) -> ExperimentState:
        """并发运行所有流式仿真并按种子汇总风险轨迹。

        Args:
            state: 当前实验状态

        Returns:
            ExperimentState: 更新后的实验状态，包含每个种子的风险轨迹
        """
        config = state["config"]
        sequence = state["sequence"]
        run_id = state.get("run_id")
        semaphore = asyncio.Semaphore(config.workers)

        async def simulate_one(spec: LearnerSpec, seed: int) -> Tuple[str, int, RiskTrace]:
            async with semaphore:
                trace = await asyncio.to_thread(simulate_run, spec, sequence, seed, config.risk, config.horizon)
                final = trace.frame["risk"].iloc[-1]
                logger.info(f"Finished {spec.id} seed {seed}: {len(trace)} steps, final risk {final:.4f}")
                record_event(run_id, {"type": "run_complete", "learner": spec.id, "seed": seed})
                return spec.id, seed, trace

        logger.info(f"Simulating {len(config.learners) * len(config.seeds)} streaming runs with {config.workers} workers")
        results = await asyncio.gather(*[
            simulate_one(spec, seed)
            for spec in config.learners
            for seed in config.seeds
        ])

        order = {spec.id: i for i, spec in enumerate(config.learners)}
        by_seed: Dict[int, List[Tuple[int, RiskTrace]]] = {}
        for learner_id, seed, trace in results:
            by_seed.setdefault(seed, []).append((order[learner_id], trace))
        state["traces"] = {
            seed: RiskTrace.concat(trace for _, trace in sorted(runs, key=lambda run: run[0]))
            for seed, runs in sorted(by_seed.items())
        }
        return state

    async def run(self, state: ExperimentState) -> ExperimentState:
        return await self.simulate(state)
