from __future__ import annotations

import pytest

from gadgetlab.catalog import locking_2_toggle, one_state_gadget, one_toggle
from gadgetlab.core import (
    Configuration,
    Instance,
    System,
    SystemBuilder,
    configuration_graph,
    initial_configuration,
    make_gadget,
    replay,
    step,
    tunnel_decomposition,
)
from gadgetlab.errors import (
    AgentNotAdjacent,
    DuplicateTransition,
    EmptyGadget,
    IllegalTransition,
    InvalidSystem,
    NotTunnelGadget,
    UnknownId,
)


def l2t_system():
    # Top component joins both upper ends; each lower end is private.
    g = locking_2_toggle()
    return System((Instance(g, 3),), (((0, "L1"), (0, "R1")), ((0, "L2"),), ((0, "R2"),)), 0)


def test_make_gadget_undirected_tunnel():
    g = make_gadget([1], ["a", "b"], [(1, "a", "b", 1), (1, "b", "a", 1)])
    assert len(g.transitions) == 2
    assert len(tunnel_decomposition(g)) == 1


def test_make_gadget_l2t_valid():
    g = locking_2_toggle()
    assert g.states == (1, 2, 3)
    assert len(g.locations) == 4


def test_make_gadget_unknown_state():
    with pytest.raises(UnknownId):
        make_gadget([1, 2, 3], ["a", "b"], [(4, "a", "b", 1)])


def test_make_gadget_rejects_duplicates_and_empty():
    with pytest.raises(DuplicateTransition):
        make_gadget([1], ["a", "b"], [(1, "a", "b", 1), (1, "a", "b", 1)])
    with pytest.raises(EmptyGadget):
        make_gadget([], ["a"], [])
    with pytest.raises(EmptyGadget):
        make_gadget([1], [], [])


def test_tunnel_decomposition_l2t():
    assert tunnel_decomposition(locking_2_toggle()).pairs == (("L1", "L2"), ("R1", "R2"))


def test_tunnel_decomposition_three_location_component():
    g = make_gadget([1], ["a", "b", "c"], [(1, "a", "b", 1), (1, "b", "c", 1)])
    with pytest.raises(NotTunnelGadget):
        tunnel_decomposition(g)


def test_tunnel_decomposition_isolated_locations():
    g = make_gadget([1], ["a", "b", "c", "d"], [])
    assert tunnel_decomposition(g).pairs == (("a", "b"), ("c", "d"))


def test_step_l2t_down():
    system = l2t_system()
    config = initial_configuration(system)
    nxt = step(system, config, 0, 0, (3, "L1", "L2", 1))
    assert nxt.states == (1,)
    assert nxt.agents == (1,)


def test_step_illegal_transition():
    system = l2t_system()
    with pytest.raises(IllegalTransition):
        step(system, initial_configuration(system), 0, 0, (1, "L2", "L1", 3))


def test_step_agent_not_adjacent():
    system = l2t_system()
    config = Configuration((3,), (1,))
    with pytest.raises(AgentNotAdjacent):
        step(system, config, 0, 0, (3, "L1", "L2", 1))


def test_step_is_local():
    g = one_toggle()
    system = System((Instance(g, "A"), Instance(g, "A")), (((0, "a"), (1, "a")), ((0, "b"),), ((1, "b"),)), 0)
    nxt = step(system, initial_configuration(system), 0, 0, ("A", "a", "b", "B"))
    assert nxt.states == ("B", "A")


def test_configuration_graph_one_toggle():
    g = one_toggle()
    system = System((Instance(g, "A"),), (((0, "a"),), ((0, "b"),)), 0)
    graph = configuration_graph(system)
    assert len(graph.nodes) == 2


def test_configuration_graph_empty_system():
    system = System((), ((),), 0)
    graph = configuration_graph(system)
    assert len(graph.nodes) == 1
    assert graph.edges == []


def test_configuration_graph_l2t():
    # With the four traversals of the locking 2-toggle the agent can be on top
    # in state 3, or below the tunnel it went down in state 1 or 2.
    graph = configuration_graph(l2t_system())
    assert sorted((c.states, c.agents) for c in graph.nodes) == [((1,), (1,)), ((2,), (2,)), ((3,), (0,))]


def test_replay_round_trip():
    system = l2t_system()
    final = replay(system, [(0, 0, (3, "L1", "L2", 1)), (0, 0, (1, "L2", "L1", 3))])
    assert final == initial_configuration(system)


def test_system_validation():
    g = one_toggle()
    with pytest.raises(InvalidSystem):
        System((Instance(g, "A"),), (((0, "a"),),), 0)  # location b uncovered
    with pytest.raises(InvalidSystem):
        System((Instance(g, "Z"),), (((0, "a"), (0, "b")),), 0)
    with pytest.raises(InvalidSystem):
        System((Instance(g, "A"),), (((0, "a"), (0, "b")),), 3)


def test_builder_joins_nodes():
    b = SystemBuilder()
    u, v = b.node(), b.node()
    i = b.add(one_state_gadget(0, 1), 0)
    b.attach(i, "t0a", u)
    b.attach(i, "t0b", v)
    b.join(u, v)
    system, node_comp = b.build(u)
    assert node_comp[u] == node_comp[v]
    assert len(system.components) == 1
