from __future__ import annotations

import os

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from iimkit.generator import ChoiceSequence, LevelChoice, iim_generate
from iimkit.graph import Graph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def to_nx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


@st.composite
def iim_graphs(draw, max_n0: int = 4, max_steps: int = 3):
    g0 = draw(graphs(1, max_n0))
    steps = draw(st.integers(0, max_steps))
    levels = []
    for i in range(steps):
        length = g0.n << i
        levels.append(LevelChoice(draw(st.integers(0, (1 << length) - 1)), length))
    return iim_generate(g0, ChoiceSequence(tuple(levels)))


@pytest.fixture(params=["python", "cython"])
def kernel(request):
    from iimkit import _kernels

    try:
        return _kernels.backend(request.param)
    except ImportError:
        pytest.skip("compiled kernels not built")


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, list[str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.args
    _, outcomes = ACCEPTANCE.setdefault(num, (title, []))
    outcomes.append("PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        title, outcomes = ACCEPTANCE[num]
        verdict = "PASS" if outcomes and all(o == "PASS" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}  {verdict}  {title}")
