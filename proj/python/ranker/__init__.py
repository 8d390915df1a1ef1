# Copyright 2026 The Ranker Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Iterative-exclusion and direct rankers.

Tasks, traces, PPO configs and policy parameters are plain dicts in the same
JSON shapes as the task and trace files. Library failures raise RankerError,
whose ``code`` attribute names the error (e.g. ``"DuplicateCandidateId"``).
"""

from ranker._ranker import (
    RankerError,
    compute_gae,
    default_ppo_config,
    evaluate,
    exclusion_reward,
    extract_answer,
    gen_synthetic,
    load_tasks,
    ndcg_at_k,
    overlap_f1,
    parse_exclusion,
    parse_ranking,
    planted_signal_suite,
    rank,
    ranking_reward,
    reciprocal_rank,
    routing_utility,
    save_tasks,
    scenario_names,
    train,
    validate_task,
    zero_params,
)

__all__ = [
    "RankerError",
    "compute_gae",
    "default_ppo_config",
    "evaluate",
    "exclusion_reward",
    "extract_answer",
    "gen_synthetic",
    "load_tasks",
    "ndcg_at_k",
    "overlap_f1",
    "parse_exclusion",
    "parse_ranking",
    "planted_signal_suite",
    "rank",
    "ranking_reward",
    "reciprocal_rank",
    "routing_utility",
    "save_tasks",
    "scenario_names",
    "train",
    "validate_task",
    "zero_params",
]
