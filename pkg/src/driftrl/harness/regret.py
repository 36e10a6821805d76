import numpy as np


def dynamic_regret(trace, oracle_gains):
    """Per-step and cumulative regret of ``trace`` against the per-step optimal gains.

    Uses mean rewards at the visited pairs, so reward noise does not enter.
    """
    gains = np.asarray(oracle_gains, dtype=np.float64)
    if gains.shape != (len(trace.mean_rewards),):
        raise ValueError(f"oracle gains have length {gains.size}, trace has {len(trace.mean_rewards)}")
    per_step = gains - trace.mean_rewards
    return per_step, np.cumsum(per_step)
