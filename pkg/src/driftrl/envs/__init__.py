from .drifting import DriftingConfig, drifting_env, drift_scenarios
from .inventory import (CensoredOutcome, InventoryConfig, InventoryEnv, censored_step, expected_demand,
                        inventory_mdp, reward_range)
from .peril import PerilConfig, peril_instance, peril_mdp, peril_report, scripted_trajectory
from .serialize import load_instance, dump_instance, instance_from_dict, instance_to_dict

__all__ = [
    "DriftingConfig", "drifting_env", "drift_scenarios",
    "CensoredOutcome", "InventoryConfig", "InventoryEnv", "censored_step", "expected_demand", "inventory_mdp",
    "reward_range", "PerilConfig", "peril_instance", "peril_mdp", "peril_report",
    "scripted_trajectory", "load_instance", "dump_instance", "instance_from_dict",
    "instance_to_dict",
]
