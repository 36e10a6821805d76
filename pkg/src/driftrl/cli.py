"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 on runtime failures.
"""
import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np
import yaml

from .agents import ALGORITHMS
from .agents.swucrl2cw import model_of
from .envs import PerilConfig, peril_report
from .harness.envspec import ENVIRONMENTS, build_env, resolve_agent, run_agent
from .harness.experiment import ExperimentConfig, final_table, run_experiment
from .harness.regret import dynamic_regret
from .mdp import diameter, oracle_gains

FMT = "{:.12g}"


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env_args(p):
    p.add_argument("--env", choices=ENVIRONMENTS, default="drifting")
    p.add_argument("-T", "--horizon", type=int, default=5000)
    p.add_argument("--vr", default="T^0.2", help="reward variation scale, a number or T^x")
    p.add_argument("--vp", default="T^0.2", help="transition variation scale, a number or T^x")
    p.add_argument("--rescale", action="store_true", help="map drifting rewards into [0,1]")
    p.add_argument("--tau", type=int, default=25)
    p.add_argument("--capacity", type=int, default=5)
    for name, default in (("f", 0.5), ("c", 0.2), ("l", 1.0), ("h", 0.1), ("zeta", 0.02), ("cycles", 2.0)):
        p.add_argument(f"--{name}", type=float, default=default)
    p.add_argument("--demand", help="CSV file with one demand pmf per row (T rows)")
    p.add_argument("--instance", help="instance document for --env file")


def _env_spec(args):
    if args.env == "drifting":
        return {"name": "drifting", "T": args.horizon, "V_r": args.vr, "V_p": args.vp,
                "rescale": args.rescale}
    if args.env == "peril":
        return {"name": "peril", "tau": args.tau}
    if args.env == "inventory":
        spec = {"name": "inventory", "S": args.capacity, "T": args.horizon, "f": args.f,
                "c": args.c, "l": args.l, "h": args.h, "zeta": args.zeta, "cycles": args.cycles}
        if args.demand:
            spec["demand"] = args.demand
        return spec
    if not args.instance:
        raise UsageError("--env file needs --instance PATH")
    return {"name": "file", "path": args.instance}


def build_parser():
    p = Parser(prog="driftrl", description="Reinforcement learning under drifting MDPs.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (run, oracle, peril) or directory (experiment)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dump-regions", metavar="PATH",
                   help="write the confidence regions of every episode as JSON lines (run only)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    e = sub.add_parser("experiment", help="multi-run comparison from a config file")
    e.add_argument("config")
    e.add_argument("--runs", type=int, help="override the number of runs")
    e.add_argument("--workers", type=int, help="override the worker count")
    e.add_argument("--no-plot", action="store_true")

    r = sub.add_parser("run", help="one algorithm on one environment, per-step trace")
    r.add_argument("--algorithm", choices=ALGORITHMS, default="swucrl2cw")
    r.add_argument("--window", "-W", type=int)
    r.add_argument("--eta", type=float)
    r.add_argument("--delta", type=float)
    _env_args(r)

    o = sub.add_parser("oracle", help="optimal gain and diameter per time step")
    o.add_argument("--tolerance", type=float, default=1e-6)
    o.add_argument("--no-diameter", action="store_true")
    _env_args(o)

    q = sub.add_parser("peril", help="empirical model of the alternating two-MDP construction")
    q.add_argument("--tau", type=int, default=25)
    q.add_argument("--delta", type=float, default=0.1)
    q.add_argument("--eta", type=float, default=0.5)
    return p


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table_text(header, rows, fmt):
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([FMT.format(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def cmd_run(args):
    spec = _env_spec(args)
    env = build_env(spec)
    mdp = model_of(env)
    agent = {"name": args.algorithm}
    if args.window is not None:
        agent["W"] = args.window
    if args.eta is not None:
        agent["eta"] = args.eta
    if args.delta is not None:
        agent["delta"] = args.delta
    agent = resolve_agent(agent, env)
    dump = None
    if args.dump_regions:
        dump = open(args.dump_regions, "w")

    def on_episode(index, t, regions, result):
        rec = {"episode": index, "t": t, "gain": result.gain,
               "policy": [int(x) for x in result.policy], "regions": regions.to_dict()}
        dump.write(json.dumps(rec) + "\n")

    try:
        trace = run_agent(agent, env, np.random.default_rng(args.seed),
                          on_episode=on_episode if dump else None)
    finally:
        if dump:
            dump.close()
    gains = oracle_gains(mdp)
    _, cum_regret = dynamic_regret(trace, gains)
    cum_reward = trace.cumulative_reward
    header = ["t", "state", "action", "reward", "mean_reward", "oracle_gain",
              "cumulative_reward", "cumulative_regret"]
    rows = [(t + 1, int(trace.states[t]), int(trace.actions[t]), float(trace.rewards[t]),
             float(trace.mean_rewards[t]), float(gains[t]), float(cum_reward[t]), float(cum_regret[t]))
            for t in range(len(trace))]
    _emit(_table_text(header, rows, args.format), args.out)
    return 0


def cmd_oracle(args):
    env = build_env(_env_spec(args))
    mdp = model_of(env)
    gains = oracle_gains(mdp, args.tolerance)
    cache = {}
    rows = []
    for t in range(1, mdp.horizon + 1):
        row = [t, float(gains[t - 1])]
        if not args.no_diameter:
            p = mdp.transitions_at(t)
            key = p.tobytes()
            if key not in cache:
                cache[key] = diameter(p, mdp.n_actions)
            d = cache[key]
            row.append(d if math.isfinite(d) else "inf")
        rows.append(row)
    header = ["t", "gain"] + ([] if args.no_diameter else ["diameter"])
    _emit(_table_text(header, rows, args.format), args.out)
    return 0


def cmd_peril(args):
    rep = peril_report(PerilConfig(args.tau), args.delta, args.eta)
    if args.format == "json":
        _emit(json.dumps(rep, indent=1) + "\n", args.out)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k in ("tau", "window", "delta", "eta", "diameter_p1", "diameter_p2", "diameter_empirical",
              "region_diameter_eta0", "region_diameter_eta"):
        v = rep[k]
        w.writerow([k, FMT.format(v) if isinstance(v, float) else v])
    w.writerow([])
    w.writerow(["state", "action", "visits", "p_next_state1", "p_next_state2", "radius"])
    for s in range(2):
        for a in range(2):
            p = rep["empirical_transitions"][s][a]
            w.writerow([s + 1, a + 1, rep["visits"][s][a], FMT.format(p[0]), FMT.format(p[1]),
                        FMT.format(rep["transition_radius"][s][a])])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_experiment(args):
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"config file {path} not found")
    text = path.read_text()
    doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise UsageError("config must be a mapping")
    if args.runs is not None:
        doc["runs"] = args.runs
    if args.workers is not None:
        doc["workers"] = args.workers
    doc.setdefault("seed", args.seed)
    try:
        config = ExperimentConfig.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out = args.out or config.output or "results"
    results = run_experiment(config, out, plot=not args.no_plot)
    header = ["scenario", "algorithm", "runs", "final_reward", "reward_se", "final_regret",
              "regret_se", "gain_over_ucrl2"]
    rows = []
    for label, summary in results.items():
        for row in final_table(summary):
            rows.append((label,) + row)
        for lab, run, err in summary.failures:
            print(f"warning: {label}/{lab} run {run} failed: {err}", file=sys.stderr)
    text = _table_text(header, rows, args.format)
    Path(out, "summary." + args.format).write_text(text)
    sys.stdout.write(text)
    return 0


COMMANDS = {"run": cmd_run, "oracle": cmd_oracle, "peril": cmd_peril, "experiment": cmd_experiment}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"driftrl: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"driftrl: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
