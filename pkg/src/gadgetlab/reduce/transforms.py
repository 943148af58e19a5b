"""Gadget-to-gadget transforms: collapse, shadow and verified gadgets."""

from __future__ import annotations

from ..classify import is_true_2_tunnel, reachable_states, traversable_tunnels
from ..core import Gadget, Instance, System, SystemBuilder, make_gadget, tunnel_decomposition
from ..errors import (
    IllegalShadowTransition,
    InvalidTarget,
    NotShadowGadget,
    NotTunnelGadget,
    WrongGadgetClass,
)
from ..solve import RECONFIG, Objective
from .output import ReductionOutput

COLLAPSED = ("x", "y")
SHADOW = "*"
VERIFIED = "V"


def collapse_non_true_2_tunnel(gadget: Gadget) -> Gadget:
    """Merge every tunnel onto one location pair ``x``/``y`` (first end onto ``x``)."""
    try:
        tunnels = tunnel_decomposition(gadget)
    except NotTunnelGadget:
        raise WrongGadgetClass(f"{gadget.name!r} is not a tunnel gadget") from None
    if is_true_2_tunnel(gadget):
        raise WrongGadgetClass(f"{gadget.name!r} is true 2-tunnel")
    end = {}
    for a, b in tunnels.pairs:
        end[a], end[b] = COLLAPSED
    trans = {(s, end[a], end[b], s2) for s, a, b, s2 in gadget.transitions}
    return make_gadget(
        gadget.states, COLLAPSED, trans, name=f"{gadget.name}/collapsed", metadata={"collapsed_from": gadget.name}
    )


def live_tunnel(gadget: Gadget, state) -> tuple | None:
    """The only tunnel ever traversable from ``state`` (``None`` if there is none)."""
    tunnels = tunnel_decomposition(gadget)
    ever = set()
    for s in reachable_states(gadget, state):
        ever |= {k for k, _ in traversable_tunnels(gadget, tunnels, s)}
    if len(ever) > 1:
        raise WrongGadgetClass(f"state {state!r} of {gadget.name!r} is true 2-tunnel")
    return tunnels.pairs[ever.pop()] if ever else None


def collapse_system(system: System) -> System:
    """Replace every instance by its collapsed gadget wired to its live tunnel.

    Component indices are kept, so start and target carry over unchanged.
    """
    cache: dict = {}
    instances = []
    groups: list[list] = [[] for _ in system.components]
    spare = []
    for i, inst in enumerate(system.instances):
        if inst.gadget not in cache:
            cache[inst.gadget] = collapse_non_true_2_tunnel(inst.gadget)
        instances.append(Instance(cache[inst.gadget], inst.state))
        pair = live_tunnel(inst.gadget, inst.state)
        if pair is None:
            spare += [[(i, "x")], [(i, "y")]]
            continue
        for loc, new in zip(pair, COLLAPSED):
            groups[system.component_of[(i, loc)]].append((i, new))
    comps = tuple(tuple(g) for g in groups + spare)
    return System(tuple(instances), comps, system.start, system.target)


def shadow_gadget(base: Gadget, shadow_states, extra_transitions, name: str | None = None) -> Gadget:
    """Base gadget plus shadow states; every added transition must end in a shadow state."""
    shadow_states = list(shadow_states)
    if set(shadow_states) & set(base.states):
        raise IllegalShadowTransition("shadow states must be new states")
    shadow = set(shadow_states)
    extra = [tuple(t) for t in extra_transitions]
    for t in extra:
        if t[3] not in shadow:
            raise IllegalShadowTransition(f"added transition {t!r} does not end in a shadow state")
    trans = set(base.transitions) | set(extra)
    return make_gadget(
        list(base.states) + shadow_states,
        base.locations,
        trans,
        name=name or f"{base.name}/shadow",
        metadata={"shadow_of": base.name, "shadow_base": base, "shadow_states": shadow_states},
    )


def full_shadow(base: Gadget) -> Gadget:
    """One shadow state reachable from anywhere, in which every location connects to every other."""
    extra = []
    for s in list(base.states) + [SHADOW]:
        for a in base.locations:
            for b in base.locations:
                if a != b:
                    extra.append((s, a, b, SHADOW))
    return shadow_gadget(base, [SHADOW], extra, name=f"{base.name}/full-shadow")


def _fresh(names, taken) -> list:
    out = []
    for n in names:
        k = n
        while k in taken:
            k = k + "'"
        out.append(k)
    return out


def verified_gadget(shadow: Gadget, scheme: str = "closingPair") -> Gadget:
    """Add verifying locations whose end-to-end traversal exists exactly in normal states.

    ``closingPair`` adds ``A``/``B`` crossable both ways without changing state in
    every normal state.  ``openingPairs`` adds ``A``/``B`` (normal states go to a
    verified state, shadow states stay shadow) and ``C``/``D`` crossable only in
    the verified state, which keeps every traversal it has ever had.
    """
    if "shadow_states" not in shadow.metadata:
        raise NotShadowGadget(f"{shadow.name!r} is not a shadow gadget")
    shadow_states = list(shadow.metadata["shadow_states"])
    normal = [s for s in shadow.states if s not in shadow_states]
    trans = set(shadow.transitions)
    meta = dict(shadow.metadata)
    if scheme == "closingPair":
        A, B = _fresh(["A", "B"], set(shadow.locations))
        for s in normal:
            trans |= {(s, A, B, s), (s, B, A, s)}
        meta.update(scheme=scheme, verify=[A, B])
        return make_gadget(shadow.states, list(shadow.locations) + [A, B], trans, f"{shadow.name}/verified-closing", meta)
    if scheme == "openingPairs":
        A, B, C, D = _fresh(["A", "B", "C", "D"], set(shadow.locations))
        (V,) = _fresh([VERIFIED], {str(s) for s in shadow.states})
        for s in normal:
            trans |= {(s, A, B, V), (s, B, A, V)}
        for s in shadow_states:
            trans |= {(s, A, B, s), (s, B, A, s)}
        locs = list(shadow.locations)
        trans |= {(V, a, b, V) for a in locs for b in locs if a != b}
        trans |= {(V, A, B, V), (V, B, A, V), (V, C, D, V), (V, D, C, V)}
        meta.update(scheme=scheme, verify=[A, B, C, D], verified_state=V)
        meta["shadow_states"] = shadow_states
        return make_gadget(
            list(shadow.states) + [V], locs + [A, B, C, D], trans, f"{shadow.name}/verified-opening", meta
        )
    raise ValueError(f"unknown verification scheme {scheme!r}")


def _base_of(g: Gadget) -> Gadget:
    if "shadow_base" not in g.metadata:
        raise NotShadowGadget(f"{g.name!r} does not record its base gadget")
    return g.metadata["shadow_base"]


def apply_shadow_reduction(system: System, objective: Objective, shadow: Gadget) -> ReductionOutput:
    """Substitute the shadow gadget for every instance of its base gadget."""
    base = _base_of(shadow)
    if objective.kind != RECONFIG:
        raise WrongGadgetClass("shadow substitution applies to reconfiguration instances")
    objective.check(system)
    shadow_states = set(shadow.metadata["shadow_states"])
    insts, swapped = [], []
    for i, inst in enumerate(system.instances):
        if inst.gadget == base:
            insts.append(Instance(shadow, inst.state))
            swapped.append(i)
            t = objective.target_states[i]
            if t is None or t in shadow_states:
                raise InvalidTarget(f"target for instance {i} must be a normal state")
        else:
            insts.append(inst)
    if not swapped:
        raise WrongGadgetClass(f"no instance uses the base gadget {base.name!r}")
    out = System(tuple(insts), system.components, system.start, system.target)
    return ReductionOutput(
        out,
        objective,
        {"substituted": swapped},
        "reconfiguration answer unchanged",
        {"reduction": "shadow"},
    )


def apply_verified_reduction(system: System, verified: Gadget, order=None) -> ReductionOutput:
    """Substitute verified gadgets and chain their verification traversals from the old
    target to a fresh target, in ``order`` (default: instance order)."""
    base = _base_of(verified)
    if system.target is None:
        raise InvalidTarget("reachability instance needs a target")
    scheme = verified.metadata.get("scheme")
    verify = verified.metadata.get("verify")
    if not verify:
        raise NotShadowGadget(f"{verified.name!r} has no verifying locations")
    b = SystemBuilder()
    nodes = [b.node() for _ in system.components]
    for i, inst in enumerate(system.instances):
        if inst.gadget != base:
            raise WrongGadgetClass(f"instance {i} does not use the base gadget {base.name!r}")
        b.add(verified, inst.state)
        for loc in inst.gadget.locations:
            b.attach(i, loc, nodes[system.component_of[(i, loc)]])
    order = list(range(len(system.instances))) if order is None else list(order)
    if sorted(order) != list(range(len(system.instances))):
        raise ValueError("order must be a permutation of the instances")
    here = nodes[system.target]
    for i in order:
        b.attach(i, verify[0], here)
        if scheme == "openingPairs":
            mid = b.node()
            b.attach(i, verify[1], mid)
            b.attach(i, verify[2], mid)
            here = b.node()
            b.attach(i, verify[3], here)
        else:
            here = b.node()
            b.attach(i, verify[1], here)
    out, node_comp = b.build(nodes[system.start], here)
    return ReductionOutput(
        out,
        Objective.reach(out.target),
        {"verified": order},
        "reachability answer unchanged",
        {"reduction": "verified", "scheme": scheme},
    )
