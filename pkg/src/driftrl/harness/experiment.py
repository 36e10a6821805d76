"""Multi-run experiments: oracle gains once per environment, then (algorithm x run) cells."""
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import dataclass, field
import math
from pathlib import Path
import re

import numpy as np

from ..agents.swucrl2cw import model_of
from ..mdp import oracle_gains
from .envspec import agent_label, build_env, resolve_agent, run_agent
from .plot import write_svg
from .regret import dynamic_regret

FMT = "{:.12g}"
FIELDS = ("reward_mean", "reward_se", "regret_mean", "regret_se")


@dataclass
class ExperimentConfig:
    env: dict
    algorithms: list
    runs: int = 50
    seed: int = 0
    scenarios: list = None        # env overrides, each may carry a "label"
    output: str = None
    oracle_tolerance: float = 1e-6
    checkpoint_every: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if self.checkpoint_every < 1 or self.workers < 1:
            raise ValueError("checkpoint_every and workers must be positive")

    @classmethod
    def from_dict(cls, doc):
        known = {k: doc[k] for k in cls.__dataclass_fields__ if k in doc}
        extra = set(doc) - set(known)
        if extra:
            raise ValueError(f"unknown config keys: {', '.join(sorted(extra))}")
        return cls(**known)

    def scenario_list(self):
        if not self.scenarios:
            return [("default", dict(self.env))]
        out = []
        for i, sc in enumerate(self.scenarios):
            sc = dict(sc)
            label = str(sc.pop("label", f"scenario{i + 1}"))
            out.append((label, {**self.env, **sc}))
        return out


@dataclass
class RunSummary:
    checkpoints: np.ndarray
    algorithms: list
    reward_mean: dict
    reward_se: dict
    regret_mean: dict
    regret_se: dict
    completed: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    scenario: str = ""

    @property
    def complete(self):
        return not self.failures

    def final(self, label, what="reward_mean"):
        return float(getattr(self, what)[label][-1])

    def improvement(self, label, baseline):
        """Relative gain in final mean cumulative reward of ``label`` over ``baseline``."""
        base = self.final(baseline)
        return (self.final(label) - base) / abs(base)


def _stats(rows):
    rows = np.asarray(rows, dtype=np.float64)
    mean = rows.mean(axis=0)
    if len(rows) < 2:
        return mean, np.zeros_like(mean)
    return mean, rows.std(axis=0, ddof=1) / math.sqrt(len(rows))


def checkpoints_for(T, every):
    pts = list(range(every, T + 1, every))
    if not pts or pts[-1] != T:
        pts.append(T)
    return np.asarray(pts, dtype=np.int64)


_ENV_CACHE = {}


def _cell(task):
    env_spec, agent, seed, gains, points = task
    key = repr(sorted(env_spec.items()))
    env = _ENV_CACHE.get(key)
    if env is None:
        env = _ENV_CACHE[key] = build_env(env_spec)
    try:
        trace = run_agent(agent, env, np.random.default_rng(seed))
    except Exception as exc:  # recorded per cell, summary marks it incomplete
        return None, f"{type(exc).__name__}: {exc}"
    _, cum_regret = dynamic_regret(trace, gains)
    idx = points - 1
    return (trace.cumulative_reward[idx], cum_regret[idx]), None


def run_scenario(env_spec, config, label="default"):
    env = build_env(env_spec)
    mdp = model_of(env)
    gains = oracle_gains(mdp, config.oracle_tolerance)
    points = checkpoints_for(mdp.horizon, config.checkpoint_every)
    agents = [resolve_agent(a, env) for a in config.algorithms]
    labels = [agent_label(a) for a in config.algorithms]
    if len(set(labels)) != len(labels):
        raise ValueError("algorithm labels must be unique")
    tasks = [(env_spec, agent, config.seed + run, gains, points)
             for agent in agents for run in range(config.runs)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_cell, tasks))
    else:
        results = [_cell(t) for t in tasks]
    summary = RunSummary(points, labels, {}, {}, {}, {}, scenario=label)
    for i, lab in enumerate(labels):
        cells = results[i * config.runs:(i + 1) * config.runs]
        ok = [c[0] for c in cells if c[0] is not None]
        for run, (res, err) in enumerate(cells):
            if err is not None:
                summary.failures.append((lab, run, err))
        summary.completed[lab] = len(ok)
        if ok:
            summary.reward_mean[lab], summary.reward_se[lab] = _stats([o[0] for o in ok])
            summary.regret_mean[lab], summary.regret_se[lab] = _stats([o[1] for o in ok])
        else:
            nan = np.full(len(points), np.nan)
            for d in (summary.reward_mean, summary.reward_se, summary.regret_mean, summary.regret_se):
                d[lab] = nan
    return summary


def _slug(label):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", label).strip("_") or "scenario"


def run_experiment(config, out_dir=None, plot=True):
    """Run every scenario; writes ``<scenario>.csv`` (and ``.svg``) under ``out_dir``."""
    out_dir = out_dir or config.output
    results = {}
    for label, spec in config.scenario_list():
        summary = run_scenario(spec, config, label)
        results[label] = summary
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_summary_csv(summary, out / f"{_slug(label)}.csv")
            if plot:
                write_svg(summary, out / f"{_slug(label)}.svg", title=label)
    return results


def summary_rows(summary):
    header = ["t"] + [f"{lab}_{f}" for lab in summary.algorithms for f in FIELDS]
    rows = [header]
    for i, t in enumerate(summary.checkpoints):
        row = [str(int(t))]
        for lab in summary.algorithms:
            for f in FIELDS:
                row.append(FMT.format(getattr(summary, f)[lab][i]))
        rows.append(row)
    return rows


def write_summary_csv(summary, path_or_file):
    if hasattr(path_or_file, "write"):
        csv.writer(path_or_file, lineterminator="\n").writerows(summary_rows(summary))
        return
    with open(path_or_file, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(summary_rows(summary))


def read_summary_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    labels = []
    for col in header[1:]:
        lab = col.rsplit("_", 2)[0]
        if lab not in labels:
            labels.append(lab)
    data = np.array([[float(x) for x in r] for r in body]) if body else np.zeros((0, len(header)))
    summary = RunSummary(data[:, 0].astype(np.int64), labels, {}, {}, {}, {})
    for j, lab in enumerate(labels):
        for k, f in enumerate(FIELDS):
            getattr(summary, f)[lab] = data[:, 1 + 4 * j + k]
    return summary


def final_table(summary, baseline="ucrl2"):
    """Rows of (label, runs, final reward, se, final regret, se, gain over baseline)."""
    rows = []
    for lab in summary.algorithms:
        gain = summary.improvement(lab, baseline) if baseline in summary.algorithms else float("nan")
        rows.append((lab, summary.completed.get(lab, 0), summary.final(lab), summary.final(lab, "reward_se"),
                     summary.final(lab, "regret_mean"), summary.final(lab, "regret_se"), gain))
    return rows
