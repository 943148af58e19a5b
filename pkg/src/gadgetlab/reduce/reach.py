"""Compilers from reachability to universal traversal and to reconfiguration."""

from __future__ import annotations

from ..catalog import one_toggle
from ..classify import distant_openings, has_interacting_tunnels, is_deterministic, is_reversible, traversable_tunnels
from ..core import Gadget, System, SystemBuilder
from ..errors import InvalidTarget, WrongGadgetClass
from ..solve import Objective, oracle_solve
from .output import ReductionOutput
from .parts import _final_states, ends, tunnels_of


def _check_reach(system: System) -> None:
    if system.start is None or system.target is None:
        raise InvalidTarget("reachability instance needs start and target components")


def _copy_original(b: SystemBuilder, system: System, keep: list) -> list:
    """Re-add the kept instances on nodes mirroring the original components."""
    nodes = [b.node(("c", c)) for c in range(len(system.components))]
    for i in keep:
        inst = system.instances[i]
        j = b.add(inst.gadget, inst.state)
        for loc in inst.gadget.locations:
            b.attach(j, loc, nodes[system.component_of[(i, loc)]])
    return nodes


def _traversable_now(system: System) -> list:
    return [i for i, inst in enumerate(system.instances) if inst.gadget.by_state[inst.state]]


def opening_parts(gadget: Gadget) -> dict:
    """Final true 2-tunnel state ``S`` and a crossing of ``x`` from it that opens a
    direction of ``y``; ``reverse_open`` tells whether ``y``'s other direction is open in ``S``."""
    tunnels = tunnels_of(gadget)
    for s in _final_states(gadget):
        found = distant_openings(gadget, from_states={s})
        if found:
            t, opened = found[0]
            ky, dy = opened[0]
            y1, y2 = ends(tunnels, ky, dy)
            rev = (ky, 1 - dy) in traversable_tunnels(gadget, tunnels, s)
            return {"state": s, "x": (t[1], t[2]), "y": (y1, y2), "reverse_open": rev}
    raise WrongGadgetClass(f"{gadget.name!r} has no distant opening from a final true 2-tunnel state")


def _attach_opening(system: System, gadget: Gadget, parts: dict) -> ReductionOutput:
    keep = _traversable_now(system)
    b = SystemBuilder()
    nodes = _copy_original(b, system, keep)
    W = nodes[system.target]
    S = parts["state"]
    x1, x2 = parts["x"]
    y1, y2 = parts["y"]

    def opener() -> int:
        i = b.add(gadget, S)
        b.attach(i, x1, W)
        b.attach(i, x2, W)
        return i

    corr = {"sentinel": [opener()]}
    for new, old in enumerate(keep):
        inst = system.instances[old]
        t = inst.gadget.by_state[inst.state][0]
        p = nodes[system.component_of[(old, t[1])]]
        q = nodes[system.component_of[(old, t[2])]]
        h1 = opener()
        if parts["reverse_open"]:
            b.attach(h1, y2, W)  # the already-open reverse direction leads out of W
            b.attach(h1, y1, p)
        else:
            b.attach(h1, y1, W)  # the newly opened direction leads out of W
            b.attach(h1, y2, p)
        h2 = opener()
        b.attach(h2, y1, q)
        b.attach(h2, y2, W)
        corr[f"instance {old}"] = [new, h1, h2]
    out, _ = b.build(nodes[system.start], None, {"reduction": "reach2traversal"})
    return ReductionOutput(
        out,
        Objective.traverse(),
        corr,
        "every gadget traversable iff the target is reachable",
        {"reduction": "reach2traversal", "variant": "distant-opening", "dropped": [i for i in range(len(system.instances)) if i not in keep]},
    )


def reduce_reach_to_traversal_distant_opening(system: System, gadget: Gadget, self_test: bool = True) -> ReductionOutput:
    """Append, per original gadget, two copies of ``gadget`` opened from the target that
    lead back to the gadget and home again.  A sentinel copy forces a visit to the target."""
    _check_reach(system)
    parts = opening_parts(gadget)
    if self_test:
        _self_test_opening(gadget, parts)
    return _attach_opening(system, gadget, parts)


def _self_test_opening(gadget: Gadget, parts: dict) -> None:
    """One copy of ``gadget`` between start and a separate target, with and without a link."""
    s = parts["state"]
    t = gadget.by_state[s][0]
    for linked in (False, True):
        b = SystemBuilder()
        start, win = b.node(), b.node()
        i = b.add(gadget, s)
        b.attach(i, t[1], start)
        b.attach(i, t[2], win if linked else b.node())
        inner, _ = b.build(start, win)
        out = _attach_opening(inner, gadget, parts)
        got = oracle_solve(out.system, out.objective, max_nodes=200_000)
        if got.decision != ("yes" if linked else "no"):
            raise WrongGadgetClass(f"attachment self-test failed for {gadget.name!r} (linked={linked})")


def reduce_reach_to_traversal_reversible_interacting(system: System, gadget: Gadget) -> ReductionOutput:
    """One 1-toggle from the target to each gadget plus a copy of ``gadget`` usable only at the target.

    The toggles are literal 1-toggles, so the output mixes two gadget types.
    """
    _check_reach(system)
    if not (is_reversible(gadget) and is_deterministic(gadget) and has_interacting_tunnels(gadget)):
        raise WrongGadgetClass(f"{gadget.name!r} is not reversible, deterministic and interacting")
    toggle = one_toggle()
    keep = _traversable_now(system)
    b = SystemBuilder()
    nodes = _copy_original(b, system, keep)
    W = nodes[system.target]
    corr: dict = {}
    for new, old in enumerate(keep):
        inst = system.instances[old]
        t = inst.gadget.by_state[inst.state][0]
        k = b.add(toggle, "A")
        b.attach(k, "a", W)
        b.attach(k, "b", nodes[system.component_of[(old, t[1])]])
        corr[f"instance {old}"] = [new, k]
    s = next(x for x in gadget.states if gadget.by_state[x])
    t = gadget.by_state[s][0]
    stub = b.add(gadget, s)
    b.attach(stub, t[1], W)
    b.attach(stub, t[2], b.node())
    corr["target gadget"] = [stub]
    out, _ = b.build(nodes[system.start], None, {"reduction": "reach2traversal"})
    return ReductionOutput(
        out,
        Objective.traverse(),
        corr,
        "every gadget traversable iff the target is reachable",
        {"reduction": "reach2traversal", "variant": "reversible-interacting", "mixed_gadget_types": True},
    )


def reduce_reach_to_reconfig_reversible(system: System, loop: Gadget | None = None) -> ReductionOutput:
    """Put a loop gadget at the target; ask to flip it and restore everything else."""
    _check_reach(system)
    for g in system.gadgets():
        if not is_reversible(g):
            raise WrongGadgetClass(f"{g.name!r} is not reversible")
    loop = loop or one_toggle()
    if not is_reversible(loop):
        raise WrongGadgetClass("loop gadget must be reversible")
    s = next((x for x in loop.states if any(t[3] != x for t in loop.by_state[x])), None)
    if s is None:
        raise WrongGadgetClass("loop gadget has no state-changing transition")
    t = next(t for t in loop.by_state[s] if t[3] != s)
    b = SystemBuilder()
    nodes = _copy_original(b, system, list(range(len(system.instances))))
    k = b.add(loop, s)
    for loc in loop.locations:
        b.attach(k, loc, nodes[system.target])
    out, _ = b.build(nodes[system.start], None, {"reduction": "reach2reconfig"})
    target = list(system.initial_states) + [t[3]]
    return ReductionOutput(
        out,
        Objective.reconfig(target),
        {"loop": [k]},
        "target configuration reachable iff the target location is reachable",
        {"reduction": "reach2reconfig"},
    )
