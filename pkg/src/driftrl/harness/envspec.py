"""Environment and agent construction from plain mappings (config files, CLI)."""
import re

import numpy as np

from ..agents import (SwConfig, run_borl, run_swucrl2cw, run_ucrl2, run_ucrl2s,
                      theoretical_params)
from ..agents.swucrl2cw import model_of
from ..envs import (DriftingConfig, InventoryConfig, InventoryEnv, PerilConfig, drifting_env,
                    load_instance, peril_mdp)
from ..mdp import variation_budgets

ENVIRONMENTS = ("drifting", "peril", "inventory", "file")

_POWER = re.compile(r"^\s*T\s*\^\s*([0-9.]+)\s*$")


def scale_value(value, horizon):
    """Numbers pass through; strings like ``T^0.2`` become ``horizon ** 0.2``."""
    if isinstance(value, str):
        m = _POWER.match(value)
        if m:
            return horizon ** float(m.group(1))
        return float(value)
    return float(value)


def build_env(spec):
    spec = dict(spec)
    name = spec.pop("name", None) or spec.pop("env", None)
    if name == "drifting":
        T = int(spec.get("T", spec.get("horizon", 5000)))
        return drifting_env(DriftingConfig(
            T, scale_value(spec.get("V_r", spec.get("vr", 1.0)), T),
            scale_value(spec.get("V_p", spec.get("vp", 1.0)), T),
            bool(spec.get("rescale", False))))
    if name == "peril":
        return peril_mdp(PerilConfig(int(spec.get("tau", 25))))
    if name == "inventory":
        demand = spec.get("demand")
        if isinstance(demand, str):
            demand = np.loadtxt(demand, delimiter=",", ndmin=2)
        cfg = InventoryConfig(
            capacity=int(spec.get("S", spec.get("capacity", 5))),
            horizon=int(spec.get("T", spec.get("horizon", 1000))),
            fixed_cost=float(spec.get("f", 0.5)), unit_cost=float(spec.get("c", 0.2)),
            lost_sale_cost=float(spec.get("l", 1.0)), holding_cost=float(spec.get("h", 0.1)),
            floor=float(spec.get("zeta", 0.02)), cycles=float(spec.get("cycles", 2.0)),
            demand=demand)
        return InventoryEnv(cfg, spec.get("kind", "pseudo"), bool(spec.get("normalize", True)))
    if name == "file":
        return load_instance(spec["path"])
    raise ValueError(f"unknown environment {name!r}; choose from {', '.join(ENVIRONMENTS)}")


def agent_spec(entry):
    """Normalise an algorithm entry (name or mapping) to a mapping."""
    if isinstance(entry, str):
        return {"name": entry}
    return dict(entry)


def agent_label(entry):
    spec = agent_spec(entry)
    return spec.get("label", spec["name"])


def resolve_agent(entry, env):
    """Fill in defaults that depend on the instance (W*, eta* from budgets)."""
    spec = agent_spec(entry)
    if spec["name"] == "swucrl2cw" and ("W" not in spec or "eta" not in spec):
        mdp = model_of(env)
        if "B_r" in spec and "B_p" in spec:
            br, bp = float(spec["B_r"]), float(spec["B_p"])
        elif mdp.horizon > 1:
            b = variation_budgets(mdp)
            br, bp = b.reward_budget, b.transition_budget
        else:
            br = bp = 0.0
        w, eta = theoretical_params(mdp.num_states, mdp.mean_actions, mdp.horizon, br, bp)
        spec.setdefault("W", w)
        spec.setdefault("eta", eta)
    return spec


def run_agent(spec, env, rng, on_episode=None):
    name = spec["name"]
    delta = spec.get("delta")
    if name == "swucrl2cw":
        return run_swucrl2cw(env, SwConfig(int(spec["W"]), float(spec["eta"]), delta), rng,
                             on_episode=on_episode)
    if name == "borl":
        return run_borl(env, rng, delta, on_episode=on_episode)
    if name == "ucrl2":
        return run_ucrl2(env, rng, delta, on_episode=on_episode)
    if name == "ucrl2s":
        return run_ucrl2s(env, rng, delta, spec.get("period"), on_episode=on_episode)
    raise ValueError(f"unknown algorithm {name!r}")
