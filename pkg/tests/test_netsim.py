from __future__ import annotations

import random

import pytest

from gadgetlab import gen
from gadgetlab.catalog import locking_2_toggle, not_true_2_tunnel, one_state_gadget, one_toggle, two_toggle
from gadgetlab.core import Instance, System
from gadgetlab.errors import BudgetExceeded, InvalidSystem, TooManyAgentsPerConnection
from gadgetlab.netsim import (
    GadgetNetwork,
    Lts,
    check_bisimulation,
    gadget_to_lts,
    interface_lts,
    multi_agent_oracle,
    network_from_dict,
    network_to_dict,
    replay_probe,
    simulate_extra_agents,
)
from gadgetlab.reduce import collapse_non_true_2_tunnel
from gadgetlab.solve import Objective, oracle_solve


def lone(gadget, state) -> GadgetNetwork:
    comps = tuple(((0, loc),) for loc in gadget.locations)
    return GadgetNetwork(System((Instance(gadget, state),), comps, 0), tuple(range(len(comps))))


def test_zero_agents():
    system = System((Instance(one_toggle(), "A"),), (((0, "a"),), ((0, "b"),)), 0)
    r = multi_agent_oracle(system, Objective.reconfig(["A"]), ())
    assert r.yes and len(r.witness) == 0
    assert multi_agent_oracle(system, Objective.reconfig(["B"]), ()).decision == "no"


def test_one_gadget_network_matches_gadget_lts():
    for g, s in ((one_toggle(), "A"), (locking_2_toggle(), 3), (two_toggle(), "B")):
        assert check_bisimulation(interface_lts(lone(g, s)), gadget_to_lts(g, s))


def test_empty_network_is_complete_on_one_state():
    lts = interface_lts(GadgetNetwork(System((), ((),), 0), (0, 0)))
    assert lts.n_states == 1
    assert set(lts.transitions) == {(0, a, b, 0) for a in (0, 1) for b in (0, 1)}


def test_bisimulation_identical_and_distinguished():
    a = gadget_to_lts(one_toggle(), "A")
    assert check_bisimulation(a, a)
    r = check_bisimulation(a, gadget_to_lts(one_state_gadget(0, 1)))
    assert not r
    assert r.trace == [(1, 0)]
    assert "right" in r.detail


def test_collapse_is_bisimilar_to_live_tunnel():
    g = not_true_2_tunnel()
    assert check_bisimulation(gadget_to_lts(collapse_non_true_2_tunnel(g), 1), gadget_to_lts(g, 1, ["a1", "a2"]))


def test_lts_json_round_trip():
    lts = interface_lts(lone(locking_2_toggle(), 3))
    back = Lts.from_dict(lts.to_dict())
    assert check_bisimulation(lts, back)
    assert back.to_dict() == lts.to_dict()


def test_witnesses_replay():
    net = lone(locking_2_toggle(), 3)
    lts = interface_lts(net)
    assert lts.witnesses
    for (s, a, b, s2), moves in lts.witnesses.items():
        config = lts.members[s][0]
        exit_comp, after = replay_probe(net, config, a, moves)
        assert exit_comp == net.boundary[b]
        assert after in lts.members[s2]


def test_helpers_and_cap():
    # A helper next to a 1-toggle can flip it on its own, so (A, helper left)
    # and (B, helper right) are one class.  With cap 1 no probe may ever enter.
    t = one_toggle()
    system = System((Instance(t, "A"),), (((0, "a"),), ((0, "b"),)), 0)
    lts = interface_lts(GadgetNetwork(system, (0, 1), (0,)))
    assert lts.n_states == 3
    assert set(lts.members[0]) == {(("A",), (0,)), (("B",), (1,))}
    capped = interface_lts(GadgetNetwork(system, (0, 1), (0,), cap=1))
    assert capped.n_states == 1 and capped.transitions == ()
    with pytest.raises(InvalidSystem):
        GadgetNetwork(system, (0, 5))
    with pytest.raises(InvalidSystem):
        GadgetNetwork(system, (0, 1), (), cap=0)


def test_interface_is_deterministic():
    net = lone(two_toggle(), "A")
    assert interface_lts(net).to_dict() == interface_lts(net).to_dict()


def test_budget():
    with pytest.raises(BudgetExceeded):
        interface_lts(lone(locking_2_toggle(), 3), max_nodes=1)


def test_network_dict_round_trip():
    net = GadgetNetwork(System((Instance(one_toggle(), "A"),), (((0, "a"),), ((0, "b"),)), 0), (0, 1), (1,), 3)
    back = network_from_dict(network_to_dict(net))
    assert back == net


def test_simulate_extra_agents_matches_multi_agent():
    rng = random.Random(7)
    for _ in range(60):
        g = rng.choice([one_toggle(), two_toggle(), locking_2_toggle()])
        system = gen.random_system(rng, [g], rng.randint(1, 3), rng.randint(2, 4), "random", True)
        placement = tuple(rng.randrange(len(system.components)) for _ in range(2))
        if rng.random() < 0.5:
            obj = Objective.reach(system.target)
        else:
            obj = Objective.reconfig([rng.choice(i.gadget.states) for i in system.instances])
        want = multi_agent_oracle(system, obj, placement).decision
        out = simulate_extra_agents(system, placement, obj)
        assert oracle_solve(out.system, out.objective).decision == want


def test_simulate_extra_agents_rejects_crowding():
    system = System((Instance(one_toggle(), "A"),), (((0, "a"),), ((0, "b"),)), 0)
    with pytest.raises(TooManyAgentsPerConnection):
        simulate_extra_agents(system, (0, 0, 0), Objective.reach(1))
