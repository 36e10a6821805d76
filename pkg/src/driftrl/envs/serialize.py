"""Instance documents (JSON or YAML).

Schema::

    S: 2                    # number of states
    actions: [2, 2]         # actions per state
    T: 100                  # horizon
    reward_noise: deterministic     # optional
    initial_state: 0                # optional
    reward_spec: <spec>
    transition_spec: <spec>

A ``<spec>`` is one of

* ``{table: ...}``: either a stationary table (rewards ``[s][a]``,
  transitions ``[s][a][s']``) or a time-indexed one with a leading ``T`` axis.
  Inner lists are ragged by ``actions``.
* ``{segments: [{until: t, table: ...}, ...]}``: piecewise-stationary, each
  table in force up to and including ``until``; the last must reach ``T``.
* ``{generator: name, params: {...}}`` with name ``drifting``, ``peril`` or
  ``inventory``; the generator builds the whole instance and the matching
  half is taken from it.
"""
import json
from pathlib import Path

import numpy as np
import yaml

from ..mdp import InstanceError, TimeVaryingMDP, pad_ragged


def _generate(name, params):
    from .drifting import DriftingConfig, drifting_env
    from .inventory import InventoryConfig, inventory_mdp
    from .peril import PerilConfig, peril_mdp
    params = dict(params or {})
    if name == "drifting":
        return drifting_env(DriftingConfig(**params))
    if name == "peril":
        return peril_mdp(PerilConfig(**params))
    if name == "inventory":
        kind = params.pop("kind", "pseudo")
        normalize = params.pop("normalize", True)
        return inventory_mdp(InventoryConfig(**params), kind, normalize)
    raise InstanceError(f"unknown generator {name!r}")


def _dense(table, S, actions, depth):
    """Ragged nested lists to a dense array; ``depth`` is 2 (rewards) or 3."""
    arr = table
    if len(arr) != S:
        raise InstanceError(f"table has {len(arr)} state rows, expected {S}")
    for s, row in enumerate(arr):
        if len(row) != actions[s]:
            raise InstanceError(f"state {s} lists {len(row)} actions, expected {actions[s]}")
    if depth == 2:
        return pad_ragged([[float(v) for v in row] for row in arr], S)
    for row in arr:
        for p in row:
            if len(p) != S:
                raise InstanceError("transition rows must have one entry per state")
    return pad_ragged([[np.asarray(p, dtype=np.float64) for p in row] for row in arr], S)


def _table(spec, S, actions, T, depth):
    table = spec["table"]
    # a time-indexed table has one more level of nesting
    probe = table
    for _ in range(depth):
        probe = probe[0]
    if isinstance(probe, list):
        if len(table) != T:
            raise InstanceError(f"time-indexed table has {len(table)} slices, expected T={T}")
        return np.stack([_dense(x, S, actions, depth) for x in table])
    one = _dense(table, S, actions, depth)
    return np.broadcast_to(one, (T,) + one.shape)


def _segments(spec, S, actions, T, depth):
    out, start = [], 0
    for seg in spec["segments"]:
        until = int(seg["until"])
        if until <= start or until > T:
            raise InstanceError("segment boundaries must increase and stay within [1, T]")
        one = _dense(seg["table"], S, actions, depth)
        out.append(np.broadcast_to(one, (until - start,) + one.shape))
        start = until
    if start != T:
        raise InstanceError("segments must cover the whole horizon")
    return np.concatenate(out)


def _part(spec, S, actions, T, depth):
    if not isinstance(spec, dict):
        raise InstanceError("specs must be mappings")
    if "table" in spec:
        return _table(spec, S, actions, T, depth), None
    if "segments" in spec:
        return _segments(spec, S, actions, T, depth), None
    if "generator" in spec:
        mdp = _generate(spec["generator"], spec.get("params"))
        return (mdp.rewards if depth == 2 else mdp.transitions), mdp
    raise InstanceError("spec needs one of 'table', 'segments', 'generator'")


def instance_from_dict(doc):
    try:
        S, actions, T = int(doc["S"]), [int(a) for a in doc["actions"]], int(doc["T"])
        rspec, pspec = doc["reward_spec"], doc["transition_spec"]
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from None
    if len(actions) != S:
        raise InstanceError("actions must list one count per state")
    rewards, gen_r = _part(rspec, S, actions, T, 2)
    transitions, gen_p = _part(pspec, S, actions, T, 3)
    gen = gen_r or gen_p
    if rewards.shape[0] != T or transitions.shape[0] != T:
        raise InstanceError("generator horizon disagrees with T")
    bounds = gen.reward_bounds if gen is not None else (0.0, 1.0)
    nonconf = gen.nonconforming if gen is not None else bool(
        (rewards < 0).any() or (rewards > 1).any())
    if gen is None and nonconf:
        bounds = (float(rewards.min()), float(rewards.max()))
    return TimeVaryingMDP(
        S, tuple(actions), T, rewards, transitions,
        reward_noise=doc.get("reward_noise", "deterministic"),
        noise_sigma=float(doc.get("noise_sigma", 1.0)),
        nonconforming=nonconf, reward_bounds=tuple(bounds),
        initial_state=int(doc.get("initial_state", 0)),
        name=doc.get("name", "file"), spec=doc)


def _ragged(arr, actions):
    return [[arr[s, a].tolist() for a in range(n)] for s, n in enumerate(actions)]


def _is_stationary(x):
    return bool(np.all(x == x[0]))


def instance_to_dict(mdp):
    """Document for ``mdp``; generated instances keep their generator form."""
    doc = {"S": mdp.num_states, "actions": list(mdp.actions_per_state), "T": mdp.horizon,
           "reward_noise": mdp.reward_noise, "initial_state": mdp.initial_state}
    if mdp.spec and "generator" in mdp.spec:
        gen = {"generator": mdp.spec["generator"], "params": mdp.spec["params"]}
        doc["reward_spec"] = gen
        doc["transition_spec"] = gen
        return doc
    for key, arr in (("reward_spec", mdp.rewards), ("transition_spec", mdp.transitions)):
        if _is_stationary(arr):
            doc[key] = {"table": _ragged(arr[0], mdp.actions_per_state)}
        else:
            doc[key] = {"table": [_ragged(a, mdp.actions_per_state) for a in arr]}
    return doc


def load_instance(path):
    path = Path(path)
    text = path.read_text()
    doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    return instance_from_dict(doc)


def dump_instance(mdp, path):
    path = Path(path)
    doc = instance_to_dict(mdp)
    if path.suffix == ".json":
        path.write_text(json.dumps(doc, indent=1))
    else:
        path.write_text(yaml.safe_dump(doc, sort_keys=False))
