from __future__ import annotations

from collections import deque

from hypothesis import given, settings
from hypothesis import strategies as st

from gadgetlab import io
from gadgetlab.catalog import locking_2_toggle, one_toggle, two_toggle
from gadgetlab.classify import (
    final_true_2_tunnel_states,
    has_distant_opening,
    has_forced_distant_closing,
    is_dag,
    is_deterministic,
    is_partial_matching,
    is_reversible,
    is_true_2_tunnel,
)
from gadgetlab.core import Instance, System, configuration_graph, make_gadget, tunnel_decomposition
from gadgetlab.reduce import apply_shadow_reduction, full_shadow
from gadgetlab.solve import Objective, oracle_solve, returns_to_initial, verify_path

SETTINGS = settings(max_examples=60, deadline=None)


@st.composite
def gadgets(draw, max_states=3, max_tunnels=2, dag=False, reversible=False):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_tunnels))
    states = list(range(1, n + 1))
    locs = [f"t{j}{e}" for j in range(k) for e in "ab"]
    trans = set()
    for s in states:
        for j in range(k):
            for a, b in ((f"t{j}a", f"t{j}b"), (f"t{j}b", f"t{j}a")):
                if dag and s == n:
                    continue
                lo = s + 1 if dag else 1
                for s2 in draw(st.sets(st.integers(lo, n), max_size=2)) if lo <= n else ():
                    trans.add((s, a, b, s2))
                    if reversible:
                        trans.add((s2, b, a, s))
    return make_gadget(states, locs, trans)


@st.composite
def systems(draw, gadget_strategy=None, max_instances=3):
    pool = [draw(gadget_strategy)] if gadget_strategy is not None else [one_toggle(), two_toggle(), locking_2_toggle()]
    n = draw(st.integers(1, max_instances))
    n_comp = draw(st.integers(2, 4))
    instances, groups = [], [[] for _ in range(n_comp)]
    for i in range(n):
        g = draw(st.sampled_from(pool))
        instances.append(Instance(g, draw(st.sampled_from(g.states))))
        for loc in g.locations:
            groups[draw(st.integers(0, n_comp - 1))].append((i, loc))
    start = draw(st.integers(0, n_comp - 1))
    target = draw(st.integers(0, n_comp - 1))
    return System(tuple(instances), tuple(tuple(g) for g in groups), start, target)


@SETTINGS
@given(gadgets())
def test_partial_matching_iff_reversible_deterministic(g):
    assert is_partial_matching(g) == bool(is_reversible(g) and is_deterministic(g))


@SETTINGS
@given(gadgets(max_states=3, max_tunnels=2))
def test_distant_effects_imply_true_2_tunnel(g):
    if has_distant_opening(g) or has_forced_distant_closing(g):
        assert is_true_2_tunnel(g)


@SETTINGS
@given(gadgets(max_states=4, max_tunnels=2, dag=True))
def test_dag_true_2_tunnel_has_final_states(g):
    assert is_dag(g)
    if is_true_2_tunnel(g):
        assert final_true_2_tunnel_states(g)


@SETTINGS
@given(gadgets(max_states=3, max_tunnels=3))
def test_tunnel_decomposition_partitions_locations(g):
    pairs = tunnel_decomposition(g).pairs
    flat = [loc for p in pairs for loc in p]
    assert sorted(flat) == sorted(g.locations)
    tunnel_of = tunnel_decomposition(g).tunnel_of
    for _, a, b, _ in g.transitions:
        assert tunnel_of[a] == tunnel_of[b]


def bfs_distance(system, goal) -> int | None:
    graph = configuration_graph(system)
    adj: dict = {}
    for src, dst, _ in graph.edges:
        adj.setdefault(src, []).append(dst)
    dist = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        if goal(graph.nodes[v]):
            return dist[v]
        for w in adj.get(v, ()):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return None


@SETTINGS
@given(systems())
def test_oracle_witness_is_valid_and_shortest(system):
    obj = Objective.reach(system.target)
    r = oracle_solve(system, obj)
    want = bfs_distance(system, lambda c: system.target in c.agents)
    assert r.yes == (want is not None)
    if r.yes:
        assert verify_path(system, obj, r.witness)
        assert len(r.witness) == want


@SETTINGS
@given(systems(gadgets(reversible=True)))
def test_reversible_systems_can_always_return(system):
    assert returns_to_initial(system) is None


@SETTINGS
@given(gadgets(max_states=3, max_tunnels=3))
def test_gadget_json_round_trip(g):
    back = io.loads_gadget(io.dumps_gadget(g))
    assert back == g
    assert io.dumps_gadget(back) == io.dumps_gadget(g)


@SETTINGS
@given(systems())
def test_system_json_round_trip(system):
    text = io.dumps_system(system)
    assert io.loads_system(text) == system
    assert io.canonicalize(text) == io.canonicalize(io.dumps_system(io.loads_system(text)))


@SETTINGS
@given(systems(st.sampled_from([two_toggle()]), max_instances=2), st.data())
def test_shadow_preserves_answers(system, data):
    fs = full_shadow(two_toggle())
    target = [data.draw(st.sampled_from(two_toggle().states)) for _ in system.instances]
    obj = Objective.reconfig(target)
    out = apply_shadow_reduction(system, obj, fs)
    assert oracle_solve(out.system, out.objective).yes == oracle_solve(system, obj).yes
