import numpy as np
import pytest

from driftrl import evi, kernels
from driftrl.agents import borl, episode_bound, swucrl2cw, ucrl2

KERNEL_NAMES = ("sort_desc", "optimistic_rows", "evi_sweeps", "ssp_sweeps")
BACKENDS = sorted(kernels.available_backends())


class EpisodeMonitor:
    """Checks the episode-count bound on every agent segment run in the session."""

    def __init__(self):
        self.segments = 0
        self.violations = []

    def wrap(self, run_segment):
        def checked(env, start, length, window, *args, **kw):
            rec = args[3] if len(args) > 3 else kw["recorder"]
            before = len(rec.episodes)
            out = run_segment(env, start, length, window, *args, **kw)
            mdp = swucrl2cw.model_of(env)
            n = len(rec.episodes) - before
            bound = episode_bound(mdp.num_states, mdp.mean_actions, window, length)
            self.segments += 1
            if n > bound:
                self.violations.append((start, length, window, n, bound))
            return out
        return checked


episode_monitor = EpisodeMonitor()
ACCEPTANCE = {}


def verdict(name, ok, detail):
    """Record an acceptance line for the terminal summary, then assert it."""
    ACCEPTANCE[name] = (bool(ok), detail)
    print(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def pytest_configure(config):
    # every EVI call in the session is checked for the optimism properties
    evi.monitor.enabled = True
    evi.monitor.reset()
    original = swucrl2cw.run_segment
    wrapped = episode_monitor.wrap(original)
    for mod in (swucrl2cw, borl, ucrl2):
        mod.run_segment = wrapped


def pytest_terminal_summary(terminalreporter):
    m = evi.monitor
    terminalreporter.write_line(
        f"EVI optimism monitor: {m.calls} calls, {len(m.violations)} violations "
        f"(backends: {', '.join(BACKENDS)})")
    terminalreporter.write_line(
        f"episode-count monitor: {episode_monitor.segments} segments, "
        f"{len(episode_monitor.violations)} violations")
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name in sorted(ACCEPTANCE, key=lambda k: (int(k[2:].split(".")[0].rstrip("abcdefg")), k)):
            ok, detail = ACCEPTANCE[name]
            terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_sessionfinish(session, exitstatus):
    if (evi.monitor.violations or episode_monitor.violations) and exitstatus == 0:
        session.exitstatus = 1


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    mod = kernels.available_backends()[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def segments_of(trace):
    """(start, end, window) per fresh-restart segment of a trace."""
    if trace.blocks:
        return [(b.start, b.end, b.window) for b in trace.blocks]
    return [(1, len(trace), int(trace.params["window"]))]


def assert_episode_bound(trace, mdp):
    S, A = mdp.num_states, mdp.mean_actions
    for start, end, window in segments_of(trace):
        n = sum(1 for e in trace.episodes if start <= e.start <= end)
        bound = episode_bound(S, A, window, end - start + 1)
        assert n <= bound, f"{n} episodes in [{start},{end}] exceeds {bound:.1f} (W={window})"


def assert_episode_tiling(trace):
    eps = trace.episodes
    assert eps[0].start == 1
    assert eps[-1].end == len(trace)
    for prev, nxt in zip(eps, eps[1:]):
        assert nxt.start == prev.end + 1
    for e in eps:
        assert 1 <= e.length <= e.window
