from __future__ import annotations

import random

import pytest

from gadgetlab import gen
from gadgetlab.catalog import directed_single_use, labeled_ttsu, locking_2_toggle, one_state_gadget, one_toggle
from gadgetlab.classify import npredag_decomposition, one_state_family
from gadgetlab.core import Instance, MovePath, System, SystemBuilder
from gadgetlab.errors import InvalidTarget, WrongGadgetClass
from gadgetlab.solve import (
    Objective,
    extract_certificate,
    oracle_solve,
    returns_to_initial,
    solve_2sat,
    solve_one_state_2tunnel,
    solve_one_state_undirected,
    solve_reversible_noninteracting_traversal,
    solve_ttsu_reconfiguration,
    verify_npredag_certificate,
    verify_path,
)


def one_tunnel_system(start_at: str) -> System:
    g = one_state_gadget(0, 1)
    comps = (((0, "t0a"),), ((0, "t0b"),))
    return System((Instance(g, 0),), comps, 0 if start_at == "a" else 1)


def l2t_system() -> System:
    g = locking_2_toggle()
    return System((Instance(g, 3),), (((0, "L1"), (0, "R1")), ((0, "L2"),), ((0, "R2"),)), 0)


def chain(gadget, states, entries, exits, start_extra=()):
    """Gadgets in a row: exit of each joins entry of the next."""
    b = SystemBuilder()
    here = b.node()
    start = here
    for s, a, z in zip(states, entries, exits):
        i = b.add(gadget, s)
        b.attach(i, a, here)
        here = b.node()
        b.attach(i, z, here)
    system, _ = b.build(start)
    return system


@pytest.mark.parametrize("end", ["a", "b"])
def test_oracle_single_tunnel_traversal(end):
    r = oracle_solve(one_tunnel_system(end), Objective.traverse())
    assert r.yes and len(r.witness) == 1


def test_oracle_l2t_reconfig_one_move():
    r = oracle_solve(l2t_system(), Objective.reconfig([1]))
    assert r.yes and len(r.witness) == 1


def test_oracle_single_use_pointing_away():
    g = directed_single_use()
    # Each path leads from its own private component into another; start is bare.
    system = System((Instance(g, "fresh"), Instance(g, "fresh")), ((), ((0, "a"),), ((0, "b"),), ((1, "a"),), ((1, "b"),)), 0)
    assert oracle_solve(system, Objective.traverse()).decision == "no"


def test_oracle_budget_is_not_no():
    r = oracle_solve(l2t_system(), Objective.reconfig([2]), max_nodes=1)
    assert r.decision in ("yes", "budget")
    r = oracle_solve(chain(one_toggle(), "AAAA", "aaaa", "bbbb"), Objective.traverse(), max_nodes=2)
    assert r.decision == "budget"


def test_objective_checks():
    with pytest.raises(InvalidTarget):
        oracle_solve(l2t_system(), Objective.reach(9))
    with pytest.raises(InvalidTarget):
        oracle_solve(l2t_system(), Objective.reconfig([4]))


def test_verify_path_cases():
    system = l2t_system()
    path = oracle_solve(system, Objective.reach(1)).witness
    assert verify_path(system, Objective.reach(1), path)
    assert not verify_path(system, Objective.reach(1), MovePath(()))
    assert not verify_path(system, Objective.reconfig([2]), path)
    deleted = MovePath(path.moves[1:]) if len(path) > 1 else MovePath(())
    assert not verify_path(system, Objective.reach(1), deleted)


def test_undirected_star_and_disconnected():
    g = one_state_gadget(0, 1)
    b = SystemBuilder()
    hub = b.node()
    for _ in range(3):
        i = b.add(g, 0)
        b.attach(i, "t0a", hub)
        b.attach(i, "t0b", b.node())
    system, _ = b.build(hub)
    assert solve_one_state_undirected(system).yes
    lone = System((Instance(g, 0),), ((), ((0, "t0a"),), ((0, "t0b"),)), 0)
    assert solve_one_state_undirected(lone).decision == "no"


def test_two_tunnel_series_and_conflict():
    d = one_state_gadget(1, 0)
    assert solve_one_state_2tunnel(chain(d, [0, 0], ["t0a", "t0a"], ["t0b", "t0b"])).yes
    # Each directed tunnel's exit is the other's entry side, and neither entry is reachable.
    system = System(
        (Instance(d, 0), Instance(d, 0)),
        ((), ((0, "t0a"), (1, "t0b")), ((1, "t0a"), (0, "t0b"))),
        0,
    )
    r = solve_one_state_2tunnel(system)
    assert r.decision == "no"
    assert oracle_solve(system, Objective.traverse()).decision == "no"


def test_solve_2sat():
    assert solve_2sat(2, [(1, 2), (-1, 2), (1, -2)]) == [True, True]
    assert solve_2sat(1, [(1, 1), (-1, -1)]) is None


def test_reversible_noninteracting_chain():
    t = one_toggle()
    system = chain(t, "AAB", "aaa", "bbb")
    r = solve_reversible_noninteracting_traversal(system)
    assert r.decision == "no"
    assert oracle_solve(system, Objective.traverse()).decision == "no"
    b = SystemBuilder()
    hub = b.node()
    for _ in range(3):
        i = b.add(t, "A")
        b.attach(i, "a", hub)
        b.attach(i, "b", b.node())
    star, _ = b.build(hub)
    assert solve_reversible_noninteracting_traversal(star).yes
    with pytest.raises(WrongGadgetClass):
        solve_reversible_noninteracting_traversal(l2t_system())


def ttsu_path():
    g = labeled_ttsu()
    b = SystemBuilder()
    s, m, e = b.node(), b.node(), b.node()
    free = [b.node() for _ in range(4)]
    i = b.add(g, 1)
    b.attach(i, "a1", s)
    b.attach(i, "a2", m)
    b.attach(i, "b1", free[0])
    b.attach(i, "b2", free[1])
    j = b.add(g, 1)
    b.attach(j, "a1", m)
    b.attach(j, "a2", e)
    b.attach(j, "b1", free[2])
    b.attach(j, "b2", free[3])
    system, _ = b.build(s)
    return system


def test_ttsu_reconfiguration_cases():
    system = ttsu_path()
    r = solve_ttsu_reconfiguration(system, (2, 2))
    assert r.yes and verify_path(system, Objective.reconfig((2, 2)), r.witness)
    assert oracle_solve(system, Objective.reconfig((2, 2))).yes
    r = solve_ttsu_reconfiguration(system, (2, 3))
    assert r.decision == "no"
    assert oracle_solve(system, Objective.reconfig((2, 3))).decision == "no"
    r = solve_ttsu_reconfiguration(system, (1, 1))
    assert r.yes and len(r.witness) == 0
    with pytest.raises(InvalidTarget):
        solve_ttsu_reconfiguration(system, (None, 2))


def test_npredag_certificates():
    system = ttsu_path()
    dec = npredag_decomposition(labeled_ttsu(), one_state_family)
    obj = Objective.reconfig((2, 2))
    path = oracle_solve(system, obj).witness
    cert = extract_certificate(system, dec, path)
    assert verify_npredag_certificate(system, dec, cert, obj)
    bad = [dict(item) for item in cert]
    bad[0]["before"] = [3, 3]
    assert not verify_npredag_certificate(system, dec, bad, obj)
    # A DAG-like transition smuggled into a segment is rejected.
    smuggled = [{"kind": "segment", "moves": [item["move"] for item in cert]}]
    assert not verify_npredag_certificate(system, dec, smuggled, obj)


def test_reversible_systems_return_home():
    rng = random.Random(4)
    for _ in range(20):
        system = gen.random_system(rng, [one_toggle(), locking_2_toggle()], rng.randint(1, 4), rng.randint(2, 4))
        assert returns_to_initial(system) is None
