from .envspec import ENVIRONMENTS, build_env, resolve_agent, run_agent, scale_value
from .experiment import (ExperimentConfig, RunSummary, checkpoints_for, final_table,
                         read_summary_csv, run_experiment, run_scenario, write_summary_csv)
from .plot import render_svg, write_svg
from .regret import dynamic_regret

__all__ = [
    "ENVIRONMENTS", "ExperimentConfig", "RunSummary", "build_env", "checkpoints_for",
    "dynamic_regret", "final_table", "read_summary_csv", "render_svg", "resolve_agent",
    "run_agent", "run_experiment", "run_scenario", "scale_value", "write_summary_csv", "write_svg",
]
