from __future__ import annotations

import random

import pytest

from gadgetlab import gen, io
from gadgetlab.catalog import (
    distant_opener,
    labeled_ttsu,
    locking_2_toggle,
    not_true_2_tunnel,
    one_state_gadget,
    one_toggle,
    two_single_use,
    two_toggle,
    visiting_harder,
)
from gadgetlab.classify import is_monotonically_closing, is_monotonically_opening, is_reversible
from gadgetlab.core import Instance, System, make_gadget
from gadgetlab.errors import BadDegreeSequence, IllegalShadowTransition, InvalidTarget, WrongGadgetClass
from gadgetlab.reduce import (
    CnfFormula,
    DigraphInstance,
    apply_shadow_reduction,
    apply_verified_reduction,
    collapse_non_true_2_tunnel,
    full_shadow,
    parse_dimacs,
    parse_edge_list,
    reduce_3sat_to_traversal,
    reduce_hampath_directed,
    reduce_hampath_spiral,
    reduce_hampath_undir_close,
    reduce_reach_to_reconfig_reversible,
    reduce_reach_to_traversal_distant_opening,
    reduce_reach_to_traversal_reversible_interacting,
    reduce_stcon_to_traversal,
    shadow_gadget,
    verified_gadget,
)
from gadgetlab.solve import Objective, oracle_solve

G3 = one_state_gadget(3, 0)


def solved(out) -> bool:
    r = oracle_solve(out.system, out.objective, max_nodes=2_000_000)
    assert r.decision != "budget"
    return r.yes


def test_collapse_not_true_2_tunnel():
    c = collapse_non_true_2_tunnel(not_true_2_tunnel())
    assert c.states == (1, 2) and len(c.locations) == 2
    t = collapse_non_true_2_tunnel(one_toggle())
    assert len(t.states) == 2 and len(t.transitions) == 2


def test_stcon_cases():
    g = one_state_gadget(1, 0)
    assert solved(reduce_stcon_to_traversal(DigraphInstance(4, ((0, 1), (1, 2), (2, 3)), 0, 3), g))
    assert not solved(reduce_stcon_to_traversal(DigraphInstance(4, ((0, 1), (2, 3)), 0, 3), g))
    assert not solved(reduce_stcon_to_traversal(DigraphInstance(2, (), 0, 1), g))


def test_3sat_cases():
    assert solved(reduce_3sat_to_traversal(CnfFormula(3, [(1, 2, 3)]), G3))
    assert not solved(reduce_3sat_to_traversal(CnfFormula(1, [(1, 1, 1), (-1, -1, -1)]), G3))


def test_parse_dimacs_and_edge_list():
    cnf = parse_dimacs("c hello\np cnf 2 1\n1 -2 2 0\n")
    assert cnf.clauses == ((1, -2, 2),)
    g = parse_edge_list("n 3\ns 0\nt 2\n0 1\n1 2\n")
    assert g.arcs == ((0, 1), (1, 2)) and g.has_hamiltonian_path()


def test_hampath_directed_small_and_bad_degree():
    # s -> v -> t with v given a second in-arc from s to make its degrees legal.
    g = DigraphInstance(3, ((0, 1), (0, 1), (1, 2)), 0, 2)
    assert solved(reduce_hampath_directed(g, visiting_harder())) == g.has_hamiltonian_path()
    bad = DigraphInstance(5, ((0, 1), (2, 1), (3, 1), (1, 4), (2, 3)), 0, 4)
    with pytest.raises(BadDegreeSequence):
        reduce_hampath_directed(bad, visiting_harder())


def test_hampath_sweeps_small():
    rng = random.Random(8)
    for _ in range(15):
        g = gen.random_legal_digraph(rng, rng.randint(2, 5))
        assert solved(reduce_hampath_directed(g, visiting_harder())) == g.has_hamiltonian_path()
        assert solved(reduce_hampath_undir_close(g, labeled_ttsu())) == g.has_hamiltonian_path()


def test_undir_close_rejects_gadget_that_keeps_b_open():
    with pytest.raises(WrongGadgetClass):
        reduce_hampath_undir_close(DigraphInstance(2, ((0, 1),), 0, 1), visiting_harder())


def test_spiral_cases():
    rng = random.Random(2)
    for _ in range(10):
        g = gen.random_cubic_graph(rng, rng.choice([2, 4, 6]))
        assert solved(reduce_hampath_spiral(g, two_single_use())) == g.has_hamiltonian_path()
    # Two disjoint pieces: s-t never meet the interior vertices.
    split = DigraphInstance(6, ((0, 5), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)), 0, 5, False)
    assert not split.has_hamiltonian_path()
    assert not solved(reduce_hampath_spiral(split, two_single_use()))
    with pytest.raises(BadDegreeSequence):
        reduce_hampath_spiral(DigraphInstance(3, ((0, 1), (1, 2)), 0, 2, False), two_single_use())


def reach_pair(solvable: bool, gadget):
    comps = (((0, "a1"),), ((0, "a2"), (1, "a1")), ((1, "a2"),), ((0, "b1"), (0, "b2"), (1, "b1"), (1, "b2")))
    first = "ready" if solvable else "spent"
    return System((Instance(gadget, first), Instance(gadget, "ready")), comps, 0, 2)


def test_reach_to_traversal_distant_opening():
    g = distant_opener()
    for solvable in (True, False):
        system = reach_pair(solvable, g)
        assert oracle_solve(system, Objective.reach(2)).yes == solvable
        assert solved(reduce_reach_to_traversal_distant_opening(system, g)) == solvable


def test_reach_to_traversal_reversible_interacting():
    l2t = locking_2_toggle()
    system = System((Instance(l2t, 3),), (((0, "L1"),), ((0, "L2"),), ((0, "R1"),), ((0, "R2"),)), 0, 1)
    assert solved(reduce_reach_to_traversal_reversible_interacting(system, l2t))
    blocked = System((Instance(l2t, 2),), (((0, "L1"),), ((0, "L2"),), ((0, "R1"),), ((0, "R2"),)), 0, 1)
    out = reduce_reach_to_traversal_reversible_interacting(blocked, l2t)
    assert not solved(out)
    assert out.metadata


def test_reach_to_reconfig():
    l2t = locking_2_toggle()
    comps = (((0, "L1"),), ((0, "L2"),), ((0, "R1"),), ((0, "R2"),))
    assert solved(reduce_reach_to_reconfig_reversible(System((Instance(l2t, 3),), comps, 0, 1)))
    out = reduce_reach_to_reconfig_reversible(System((Instance(l2t, 2),), comps, 0, 1))
    assert not solved(out)
    assert all(is_reversible(g) for g in out.system.gadgets())


def test_shadow_gadget_rules():
    base = two_toggle()
    same = shadow_gadget(base, ["X"], [])
    assert set(same.transitions) == set(base.transitions)
    with pytest.raises(IllegalShadowTransition):
        shadow_gadget(base, ["X"], [("A", "a1", "b1", "B")])
    fs = full_shadow(base)
    shadow = fs.metadata["shadow_states"][0]
    for a in fs.locations:
        reach = {t[2] for t in fs.outgoing.get((shadow, a), ())}
        assert reach == set(fs.locations) - {a}
    normal = {t for t in fs.transitions if t[0] in base.states and t[3] in base.states}
    assert normal == set(base.transitions)


def test_verified_gadgets_are_monotone():
    fs = full_shadow(two_toggle())
    assert is_monotonically_closing(verified_gadget(fs, "closingPair"))
    assert is_monotonically_opening(verified_gadget(fs, "openingPairs"))


def test_verification_blocked_after_shadow_move():
    fs = full_shadow(two_toggle())
    vc = verified_gadget(fs, "closingPair")
    a, b = vc.metadata["verify"]
    shadow = fs.metadata["shadow_states"][0]
    locs = {loc: k for k, loc in enumerate(vc.locations)}
    comps = tuple(((0, loc),) for loc in vc.locations)
    system = System((Instance(vc, shadow),), comps, locs[a], locs[b])
    assert oracle_solve(system, Objective.reach(locs[b])).decision == "no"
    system = System((Instance(vc, "A"),), comps, locs[a], locs[b])
    assert oracle_solve(system, Objective.reach(locs[b])).yes


def test_shadow_and_verified_preserve_answers():
    t2 = two_toggle()
    fs = full_shadow(t2)
    rng = random.Random(5)
    for _ in range(25):
        system = gen.random_system(rng, [t2], rng.randint(1, 3), rng.randint(2, 4), "random", True)
        target = [rng.choice(t2.states) for _ in system.instances]
        obj = Objective.reconfig(target)
        assert solved(apply_shadow_reduction(system, obj, fs)) == oracle_solve(system, obj).yes
        want = oracle_solve(system, Objective.reach(system.target)).yes
        order = list(range(len(system.instances)))
        for scheme in ("closingPair", "openingPairs"):
            rng.shuffle(order)
            out = apply_verified_reduction(system, verified_gadget(fs, scheme), order)
            assert solved(out) == want


def test_shadow_target_rejected():
    fs = full_shadow(two_toggle())
    system = System((Instance(two_toggle(), "A"),), (((0, "a1"), (0, "a2"), (0, "b1"), (0, "b2")),), 0)
    with pytest.raises(InvalidTarget):
        apply_shadow_reduction(system, Objective.reconfig([fs.metadata["shadow_states"][0]]), fs)


def test_outputs_round_trip_through_json():
    out = reduce_3sat_to_traversal(CnfFormula(2, [(1, -2, 2)]), G3)
    back = io.loads_system(io.dumps_system(out.system))
    assert back == out.system
    assert out.to_dict()["objective"] == {"kind": "traverse"}


def test_reduction_requires_suitable_gadget():
    with pytest.raises(WrongGadgetClass):
        reduce_3sat_to_traversal(CnfFormula(1, [(1, 1, 1)]), one_state_gadget(0, 3))
    plain = make_gadget([1], ["a", "b"], [(1, "a", "b", 1), (1, "b", "a", 1)])
    with pytest.raises(WrongGadgetClass):
        reduce_reach_to_traversal_distant_opening(System((Instance(plain, 1),), (((0, "a"),), ((0, "b"),)), 0, 1), plain)
