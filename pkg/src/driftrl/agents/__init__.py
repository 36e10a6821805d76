from .borl import BorlGrid, run_borl, scale_block_reward
from .exp3p import Exp3pState, exp3p_probabilities, exp3p_select, exp3p_update
from .swucrl2cw import (AgentError, SwConfig, default_delta, episode_bound, run_segment,
                        run_swucrl2cw, theoretical_params)
from .trace import Block, Episode, RegretTrace
from .ucrl2 import restart_period, run_ucrl2, run_ucrl2s

ALGORITHMS = ("swucrl2cw", "borl", "ucrl2", "ucrl2s")

__all__ = [
    "ALGORITHMS", "AgentError", "Block", "BorlGrid", "Episode", "Exp3pState", "RegretTrace",
    "SwConfig", "default_delta", "episode_bound", "exp3p_probabilities", "exp3p_select",
    "exp3p_update", "restart_period", "run_borl", "run_segment", "run_swucrl2cw", "run_ucrl2",
    "run_ucrl2s", "scale_block_reward", "theoretical_params",
]
